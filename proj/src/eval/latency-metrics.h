// eval/latency-metrics.h

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

// Latency metrics over read counts g(1..m) of the emitted words (eos
// stripped) for a source of length n:
//
//   AL = 1/tau * sum_{j=1..tau} [ g(j) - (j-1) / r ],  r = m / n,
//        tau = first j with g(j) = n (or m if none, flagged)
//   AP = sum_j g(j) / (n * m)
//   CW = g(m) / #{ j : g(j) > g(j-1) },  g(0) = 0   (reads per non-empty gap)

#ifndef SIMUL_EVAL_LATENCY_METRICS_H_
#define SIMUL_EVAL_LATENCY_METRICS_H_

#include <span>
#include <vector>

namespace simul {

struct AlResult {
  double value = 0.0;
  int tau = 0;
  bool reached_end = true;  // false if no word was emitted after a full read
};

/// All three throw SimulError for an empty g or n < 1.
AlResult AverageLagging(std::span<const int> g, int source_len);
double AverageProportion(std::span<const int> g, int source_len);

struct CwResult {
  double value = 0.0;
  bool defined = true;  // false (value 0) when no read precedes any write
};
CwResult ConsecutiveWait(std::span<const int> g);

struct LatencyReport {
  double al = 0.0;
  double ap = 0.0;
  double cw = 0.0;
  size_t sentences = 0;       // sentences contributing to the means
  size_t empty_outputs = 0;   // skipped: no word before eos
  size_t al_unreached = 0;    // AL computed with tau = m
  size_t cw_undefined = 0;    // excluded from the CW mean
};

/// Sentence-averaged AL, AP and CW.
LatencyReport CorpusLatency(const std::vector<std::vector<int>> &g,
                            const std::vector<int> &source_lens);

}  // namespace simul

#endif  // SIMUL_EVAL_LATENCY_METRICS_H_
