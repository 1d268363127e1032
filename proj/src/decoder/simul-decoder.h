// decoder/simul-decoder.h

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

#ifndef SIMUL_DECODER_SIMUL_DECODER_H_
#define SIMUL_DECODER_SIMUL_DECODER_H_

#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "nnet/model-config.h"
#include "oracle/dynamic-oracle.h"
#include "oracle/policy.h"
#include "transition/transition-system.h"

namespace simul {

struct DecodeConfig {
  OracleConfig band;          // latency constraint for adaptive decoding
  double temperature = 0.0;   // delay score is multiplied by e^temperature
  int max_target_len = 256;   // Word actions, eos included
  Policy mode = Policy::Adaptive();

  void Check() const;
  nlohmann::json ToJson() const;
  static DecodeConfig FromJson(const nlohmann::json &j);
};

struct DecodeTrace {
  ActionSequence actions;
  std::vector<int> words;  // emitted target words, eos excluded
  std::vector<int> g;      // g[j]: source words read when words[j] was emitted
  int source_len = 0;
  bool finished = false;   // eos emitted
  bool truncated = false;  // stopped at max_target_len without eos
};

/// Greedy adaptive decoding.  The first action is always a read.  With
/// source left and lag <= alpha a read is forced; with lag >= beta or the
/// source exhausted the best non-delay token (eos included) is forced;
/// otherwise the action maximising the adjusted score wins, where the delay
/// score is scaled by e^t.  Comparisons are made on log scores and ties go
/// to the lowest token id.  Throws SimulError for an empty source.
DecodeTrace AdaptiveDecode(const ActionScorer &scorer, const Vocab &vocab,
                           std::span<const int> source, const DecodeConfig &cfg);

/// Wait-k schedule; words are the argmax over non-delay tokens.
DecodeTrace WaitkDecode(const ActionScorer &scorer, const Vocab &vocab,
                        std::span<const int> source, int k, int max_target_len);

/// Reads the whole source, then decodes greedily (wait-k with k = |x|).
DecodeTrace FullSentenceDecode(const ActionScorer &scorer, const Vocab &vocab,
                               std::span<const int> source, int max_target_len);

/// Dispatches on cfg.mode.
DecodeTrace Decode(const ActionScorer &scorer, const Vocab &vocab,
                   std::span<const int> source, const DecodeConfig &cfg);

/// True iff Delay wins the adjusted comparison against every word at
/// temperature t; used for the unconstrained branch of AdaptiveDecode.
bool PrefersDelay(const ScoreVector &scores, const Vocab &vocab, double t);

/// "words<TAB>g1,g2,...<TAB>actions".
std::string FormatTraceLine(const DecodeTrace &trace, const Vocab &vocab);

}  // namespace simul

#endif  // SIMUL_DECODER_SIMUL_DECODER_H_
