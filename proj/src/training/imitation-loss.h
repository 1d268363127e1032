// training/imitation-loss.h

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

#ifndef SIMUL_TRAINING_IMITATION_LOSS_H_
#define SIMUL_TRAINING_IMITATION_LOSS_H_

#include <atomic>
#include <span>
#include <string>
#include <vector>

#include "nnet/model-config.h"
#include "oracle/dynamic-oracle.h"
#include "oracle/policy.h"

namespace simul {

inline constexpr double kProbabilityFloor = 1e-12;

/// Which non-oracle actions get an extra -log(1 - p(a)) term.
///   kNone:       none (the plain imitation loss)
///   kCompetitor: the delay token when it is not a target, plus the
///                highest-scoring non-target word
///   kAll:        every non-target action (binary cross-entropy on the rest)
enum class NegativeTerm { kNone, kCompetitor, kAll };

/// Accepts none|competitor|all; also false/true for none/competitor.
NegativeTerm ParseNegativeTerm(const std::string &s);
std::string NegativeTermName(NegativeTerm n);

/// Step loss -log f where f is the mean score of the target actions, floored
/// at kProbabilityFloor, plus the selected negative terms.  Gradients are
/// taken w.r.t. the logits of whichever normalisation `mode` names.
class OracleImitationLoss : public StepLoss {
 public:
  OracleImitationLoss(int delay_id, NegativeTerm negatives)
      : delay_id_(delay_id), negatives_(negatives) {}

  double Compute(std::span<const double> logits, std::span<const int> targets,
                 ScoringMode mode, std::span<double> dlogits) const override;

  /// Times the floor was hit (any thread).
  uint64_t floor_hits() const { return floor_hits_.load(); }
  void ResetFloorHits() { floor_hits_ = 0; }

 private:
  int delay_id_;
  NegativeTerm negatives_;
  mutable std::atomic<uint64_t> floor_hits_{0};
};

/// Mean score of the oracle actions at the state reached by `prefix`.
double OracleStepProbability(const ActionScorer &scorer, const Vocab &vocab,
                             const ActionSequence &prefix, std::span<const int> x,
                             std::span<const int> y, const OracleConfig &cfg);

/// -sum_i log f(a_<i); teacher forced along `path`.
double PathLoss(const ActionScorer &scorer, const Vocab &vocab,
                const ActionSequence &path, std::span<const int> x,
                std::span<const int> y, const OracleConfig &cfg);

/// Average of PathLoss over the aggressive and conservative extreme paths.
double TwoPathLoss(const ActionScorer &scorer, const Vocab &vocab,
                   std::span<const int> x, std::span<const int> y,
                   const OracleConfig &cfg);

/// The teacher-forced training paths of one sentence pair under `policy`.
///
/// Adaptive: both extreme paths, weight 1/2 each, every step supervised by
/// the oracle action set.  Wait-k and full-sentence: the single schedule path
/// with only its word steps supervised (the schedule itself decides reads).
std::vector<SupervisedPath> BuildTrainingPaths(const std::vector<int> &x,
                                               const std::vector<int> &y,
                                               const Vocab &vocab,
                                               const OracleConfig &cfg,
                                               const Policy &policy);

}  // namespace simul

#endif  // SIMUL_TRAINING_IMITATION_LOSS_H_
