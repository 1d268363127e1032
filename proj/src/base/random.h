// base/random.h

// Copyright 2026  The simulmt Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef SIMUL_BASE_RANDOM_H_
#define SIMUL_BASE_RANDOM_H_

#include <cstdint>
#include <random>
#include <string_view>

namespace simul {

using Rng = std::mt19937_64;

inline uint64_t SplitMix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// All randomness in a run flows from one seed; each consumer ("data",
// "init", "shuffle", ...) draws from its own named sub-stream so that adding
// draws in one place never perturbs another.
inline uint64_t SubstreamSeed(uint64_t seed, std::string_view name,
                              uint64_t index = 0) {
  uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (char c : name) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return SplitMix64(SplitMix64(seed ^ h) + index);
}

inline Rng MakeRng(uint64_t seed, std::string_view name, uint64_t index = 0) {
  return Rng(SubstreamSeed(seed, name, index));
}

}  // namespace simul

#endif  // SIMUL_BASE_RANDOM_H_
