// eval/sweep.h

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

#ifndef SIMUL_EVAL_SWEEP_H_
#define SIMUL_EVAL_SWEEP_H_

#include <string>
#include <vector>

#include "decoder/simul-decoder.h"
#include "eval/bleu.h"
#include "eval/latency-metrics.h"

namespace simul {

struct DecodedCorpus {
  std::vector<DecodeTrace> traces;
  LatencyReport latency;
  BleuReport bleu;
  double token_accuracy = 0.0;
  size_t truncated = 0;
};

/// Decodes every source under `cfg` and scores it against `references`
/// (eos already removed).
DecodedCorpus DecodeCorpus(const ActionScorer &scorer, const Vocab &vocab,
                           const std::vector<std::vector<int>> &sources,
                           const std::vector<std::vector<int>> &references,
                           const DecodeConfig &cfg);

/// Fraction of reference positions j with hyp[j] == ref[j], over the corpus.
double TokenAccuracy(const std::vector<std::vector<int>> &hypotheses,
                     const std::vector<std::vector<int>> &references);
/// Same, restricted to one 0-based position (sentences too short for it are
/// skipped; a missing hypothesis token counts as wrong).
double PositionAccuracy(const std::vector<std::vector<int>> &hypotheses,
                        const std::vector<std::vector<int>> &references,
                        size_t position);

struct SweepRow {
  double t = 0.0, al = 0.0, ap = 0.0, cw = 0.0, bleu = 0.0;
  friend bool operator==(const SweepRow &, const SweepRow &) = default;
};

/// One row per temperature (ascending), decoding the whole corpus each time
/// with base.temperature replaced.
std::vector<SweepRow> Sweep(const ActionScorer &scorer, const Vocab &vocab,
                            const std::vector<std::vector<int>> &sources,
                            const std::vector<std::vector<int>> &references,
                            const DecodeConfig &base, std::vector<double> temps);

/// Header "t,AL,AP,CW,BLEU"; values with 4 decimals, independent of locale.
std::string SweepToCsv(const std::vector<SweepRow> &rows);
/// Throws FormatError on a bad header or row.
std::vector<SweepRow> ParseSweepCsv(const std::string &text);

/// Comma separated list of reals, e.g. "-2,-0.5,0,4.5,9".
std::vector<double> ParseRealList(const std::string &text);

}  // namespace simul

#endif  // SIMUL_EVAL_SWEEP_H_
