// training/trainer.h

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

#ifndef SIMUL_TRAINING_TRAINER_H_
#define SIMUL_TRAINING_TRAINER_H_

#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "base/random.h"
#include "json.hpp"
#include "nnet/checkpoint.h"
#include "oracle/dynamic-oracle.h"
#include "oracle/policy.h"
#include "training/imitation-loss.h"

namespace simul {

struct TrainConfig {
  OracleConfig oracle;
  Policy mode = Policy::Adaptive();
  double learning_rate = 5e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  int batch_size = 16;       // sentence pairs per step
  int max_steps = 3000;
  int checkpoint_every = 0;  // 0: only the final checkpoint
  NegativeTerm negative_term = NegativeTerm::kNone;
  uint64_t seed = 1;

  void Check() const;
  nlohmann::json ToJson() const;
  static TrainConfig FromJson(const nlohmann::json &j);
};

/// One gold pair; `target` ends with eos.
struct TrainingPair {
  std::vector<int> source;
  std::vector<int> target;
};

struct TrainStepReport {
  int step = 0;            // 1-based
  double loss = 0.0;       // mean over the pairs of the batch
  double grad_norm = 0.0;  // of that mean, before the update
  size_t examples = 0;     // pairs consumed so far
  double wall_ms = 0.0;
  uint64_t floor_hits = 0; // cumulative

  nlohmann::json ToJson() const;
};

/// Minibatch Adam on the loss selected by config.mode.  Pairs are visited in
/// epochs, each a permutation drawn from the "shuffle" stream of the seed.
/// Single writer; fully deterministic given the seed.
template <typename Real>
class Trainer {
 public:
  /// Throws ConfigError for an invalid config or empty data, and
  /// SimulError if an example cannot be turned into a training path.
  Trainer(ScorerModel<Real> *model, const TrainConfig &config,
          std::vector<TrainingPair> data);

  /// One optimisation step.  Throws NumericError (leaving the parameters
  /// untouched) if the loss or gradient is not finite.
  TrainStepReport Step();

  int steps_done() const { return step_; }
  const OracleImitationLoss &loss() const { return loss_; }

 private:
  ScorerModel<Real> *model_;
  TrainConfig config_;
  std::vector<TrainingPair> data_;
  std::vector<std::vector<SupervisedPath>> paths_;  // per pair
  OracleImitationLoss loss_;
  ParameterSet<Real> grads_, m_, v_;
  Rng shuffle_rng_;
  std::vector<size_t> order_;
  size_t cursor_ = 0;
  size_t examples_ = 0;
  int step_ = 0;
};

struct TrainRunOptions {
  std::ostream *log = nullptr;        // JSON lines
  std::string checkpoint_path;        // empty: no checkpoints
  nlohmann::json meta = nlohmann::json::object();
  std::function<void(const TrainStepReport &)> on_step;
};

struct TrainRunResult {
  int steps = 0;
  double final_loss = 0.0;
  bool diverged = false;
  std::string error;  // set when diverged
};

/// Runs config.max_steps steps, writing a checkpoint every
/// config.checkpoint_every steps and at the end.  On divergence the run
/// stops, the last good checkpoint is left in place and diverged is set.
TrainRunResult RunTraining(AnyScorerModel *model, const TrainConfig &config,
                           const std::vector<TrainingPair> &data,
                           const TrainRunOptions &options);

}  // namespace simul

#endif  // SIMUL_TRAINING_TRAINER_H_
