// eval/bleu.h

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

#ifndef SIMUL_EVAL_BLEU_H_
#define SIMUL_EVAL_BLEU_H_

#include <array>
#include <vector>

namespace simul {

struct BleuReport {
  double bleu = 0.0;                    // 0..100
  std::array<double, 4> precisions{};   // as used: add-one for n >= 2
  std::array<double, 4> raw_precisions{};
  double brevity_penalty = 0.0;
  size_t hyp_len = 0, ref_len = 0;
};

/// Corpus 4-gram BLEU, single reference.  Clipped n-gram matches and n-gram
/// totals are summed over the corpus; p_1 is unsmoothed, p_n for n >= 2 is
/// (matches + 1) / (total + 1).  BP = exp(1 - ref/hyp) when hyp < ref.
/// Sentences are token-id sequences with eos already removed.  Throws
/// SimulError for an empty corpus or mismatched sizes.
BleuReport CorpusBleu(const std::vector<std::vector<int>> &hypotheses,
                      const std::vector<std::vector<int>> &references);

}  // namespace simul

#endif  // SIMUL_EVAL_BLEU_H_
