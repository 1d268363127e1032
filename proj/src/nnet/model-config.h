// nnet/model-config.h

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

#ifndef SIMUL_NNET_MODEL_CONFIG_H_
#define SIMUL_NNET_MODEL_CONFIG_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "transition/transition-system.h"

namespace simul {

enum class ScoringMode { kSigmoid, kSoftmax };
enum class Precision { kF32, kF64 };

std::string ToString(ScoringMode mode);
std::string ToString(Precision precision);
ScoringMode ParseScoringMode(const std::string &s);
Precision ParsePrecision(const std::string &s);

struct ModelConfig {
  int d_model = 64;
  int n_layers = 2;         // both encoder and decoder
  int n_heads = 2;
  int ffn_width = 128;
  int max_delay_count = 64; // delay-count table has max_delay_count + 1 rows
  // Ablation switches.
  bool keep_delay_in_attention = false;
  bool use_count_embedding = true;
  ScoringMode scoring = ScoringMode::kSigmoid;
  Precision precision = Precision::kF32;
  uint64_t seed = 1;

  void Check() const;
  nlohmann::json ToJson() const;
  static ModelConfig FromJson(const nlohmann::json &j);
};

/// Scores for every action in the extended vocabulary, indexed by token id.
/// log_scores holds log p(a) computed directly from the logits, so it keeps
/// resolving differences after the scores themselves round to 1.
struct ScoreVector {
  ScoringMode mode = ScoringMode::kSigmoid;
  std::vector<double> scores;
  std::vector<double> log_scores;

  size_t size() const { return scores.size(); }
  static ScoreVector FromLogits(std::span<const double> logits,
                                ScoringMode mode);
};

/// Anything that can score the next action from a consumed source prefix and
/// the action history: the neural model, or hand-built scorers in tests.
class ActionScorer {
 public:
  virtual ~ActionScorer() = default;
  virtual ScoreVector Score(std::span<const int> source_prefix,
                            const ActionSequence &history) const = 0;
};

/// Per-step objective over logits.  `targets` are the supervised token ids in
/// the extended vocabulary.  Writes dLoss/dlogits into `dlogits`.
class StepLoss {
 public:
  virtual ~StepLoss() = default;
  virtual double Compute(std::span<const double> logits,
                         std::span<const int> targets, ScoringMode mode,
                         std::span<double> dlogits) const = 0;
};

/// A teacher-forced action sequence with its per-step supervision.
/// targets[i] supervises the choice of actions[i] given actions[0..i); an
/// empty set leaves that step unsupervised.
struct SupervisedPath {
  std::vector<int> source;
  ActionSequence actions;
  std::vector<std::vector<int>> targets;
  double weight = 1.0;
};

}  // namespace simul

#endif  // SIMUL_NNET_MODEL_CONFIG_H_
