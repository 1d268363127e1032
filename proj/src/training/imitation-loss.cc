// training/imitation-loss.cc

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

#include "training/imitation-loss.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "base/simul-error.h"
#include "transition/transition-system.h"

namespace simul {

namespace {

double Sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace

NegativeTerm ParseNegativeTerm(const std::string &s) {
  if (s == "none" || s == "false") return NegativeTerm::kNone;
  if (s == "competitor" || s == "true") return NegativeTerm::kCompetitor;
  if (s == "all") return NegativeTerm::kAll;
  throw ConfigError({"train.negative_term: expected none, competitor or all, got '" +
                     s + "'"});
}

std::string NegativeTermName(NegativeTerm n) {
  switch (n) {
    case NegativeTerm::kNone: return "none";
    case NegativeTerm::kCompetitor: return "competitor";
    default: return "all";
  }
}

double OracleImitationLoss::Compute(std::span<const double> logits,
                                    std::span<const int> targets,
                                    ScoringMode mode,
                                    std::span<double> dlogits) const {
  const size_t v = logits.size();
  if (targets.empty()) throw SimulError("loss", "empty target action set");
  const bool want_grad = !dlogits.empty();
  if (want_grad) std::fill(dlogits.begin(), dlogits.end(), 0.0);

  std::vector<double> p(v);
  if (mode == ScoringMode::kSigmoid) {
    for (size_t j = 0; j < v; ++j) p[j] = Sigmoid(logits[j]);
  } else {
    const double mx = *std::max_element(logits.begin(), logits.end());
    double z = 0.0;
    for (size_t j = 0; j < v; ++j) z += (p[j] = std::exp(logits[j] - mx));
    for (double &q : p) q /= z;
  }
  const double n_t = static_cast<double>(targets.size());
  double f = 0.0;
  for (int a : targets) f += p[a];
  f /= n_t;

  double loss;
  if (f < kProbabilityFloor) {
    ++floor_hits_;
    loss = -std::log(kProbabilityFloor);
  } else {
    loss = -std::log(f);
    if (want_grad) {
      if (mode == ScoringMode::kSigmoid) {
        for (int a : targets)
          dlogits[a] -= p[a] * Sigmoid(-logits[a]) / (n_t * f);
      } else {
        for (size_t j = 0; j < v; ++j) dlogits[j] += p[j];
        for (int a : targets) dlogits[a] -= p[a] / (n_t * f);
      }
    }
  }

  if (negatives_ == NegativeTerm::kNone) return loss;
  auto is_target = [&](int j) {
    return std::find(targets.begin(), targets.end(), j) != targets.end();
  };
  std::vector<int> negatives;
  if (negatives_ == NegativeTerm::kAll) {
    for (size_t j = 0; j < v; ++j)
      if (!is_target(static_cast<int>(j))) negatives.push_back(static_cast<int>(j));
  } else {
    if (!is_target(delay_id_)) negatives.push_back(delay_id_);
    int best = -1;
    for (size_t j = 0; j < v; ++j) {
      const int id = static_cast<int>(j);
      if (id == delay_id_ || is_target(id)) continue;
      if (best < 0 || logits[j] > logits[best]) best = id;
    }
    if (best >= 0) negatives.push_back(best);
  }
  for (int c : negatives) {
    double rest;  // 1 - p_c, computed without cancellation
    if (mode == ScoringMode::kSigmoid) {
      rest = Sigmoid(-logits[c]);
    } else {
      rest = 0.0;
      for (size_t j = 0; j < v; ++j)
        if (static_cast<int>(j) != c) rest += p[j];
    }
    if (rest < kProbabilityFloor) {
      ++floor_hits_;
      loss += -std::log(kProbabilityFloor);
      continue;
    }
    loss += -std::log(rest);
    if (!want_grad) continue;
    if (mode == ScoringMode::kSigmoid) {
      dlogits[c] += p[c];
    } else {
      for (size_t j = 0; j < v; ++j) dlogits[j] -= p[c] * p[j] / rest;
      dlogits[c] += p[c] / rest;
    }
  }
  return loss;
}

double OracleStepProbability(const ActionScorer &scorer, const Vocab &vocab,
                             const ActionSequence &prefix, std::span<const int> x,
                             std::span<const int> y, const OracleConfig &cfg) {
  TransitionSystem ts(vocab);
  const PrefixState state = ts.Replay(prefix, x.size());
  const std::vector<Action> oracle = OracleActions(state, x, y, cfg);
  if (oracle.empty()) throw SimulError("internal", "empty oracle action set");
  const ScoreVector sv = scorer.Score(x.first(state.src_len), prefix);
  double f = 0.0;
  for (const Action &a : oracle) f += sv.scores.at(a.TokenId(vocab));
  return f / static_cast<double>(oracle.size());
}

double PathLoss(const ActionScorer &scorer, const Vocab &vocab,
                const ActionSequence &path, std::span<const int> x,
                std::span<const int> y, const OracleConfig &cfg) {
  double loss = 0.0;
  ActionSequence prefix;
  prefix.reserve(path.size());
  for (const Action &a : path) {
    const double f = OracleStepProbability(scorer, vocab, prefix, x, y, cfg);
    loss -= std::log(std::max(f, kProbabilityFloor));
    prefix.push_back(a);
  }
  return loss;
}

double TwoPathLoss(const ActionScorer &scorer, const Vocab &vocab,
                   std::span<const int> x, std::span<const int> y,
                   const OracleConfig &cfg) {
  const ActionSequence agg = ExtremePath(x, y, cfg, PathSide::kAggressive);
  const ActionSequence con = ExtremePath(x, y, cfg, PathSide::kConservative);
  return 0.5 * (PathLoss(scorer, vocab, agg, x, y, cfg) +
                PathLoss(scorer, vocab, con, x, y, cfg));
}

std::vector<SupervisedPath> BuildTrainingPaths(const std::vector<int> &x,
                                               const std::vector<int> &y,
                                               const Vocab &vocab,
                                               const OracleConfig &cfg,
                                               const Policy &policy) {
  std::vector<SupervisedPath> out;
  if (policy.kind == Policy::kAdaptive) {
    TransitionSystem ts(vocab);
    for (PathSide side : {PathSide::kAggressive, PathSide::kConservative}) {
      SupervisedPath p;
      p.source = x;
      p.actions = ExtremePath(x, y, cfg, side);
      p.weight = 0.5;
      const auto states = ts.ReplayStates(p.actions, x.size());
      p.targets.resize(p.actions.size());
      for (size_t i = 0; i < p.actions.size(); ++i)
        for (const Action &a : OracleActions(states[i], x, y, cfg))
          p.targets[i].push_back(a.TokenId(vocab));
      out.push_back(std::move(p));
    }
    return out;
  }
  const int k = policy.kind == Policy::kWaitk ? policy.k : static_cast<int>(x.size());
  SupervisedPath p;
  p.source = x;
  p.actions = WaitkPath(x, y, std::max(k, 1));
  p.targets.resize(p.actions.size());
  for (size_t i = 0; i < p.actions.size(); ++i)
    if (p.actions[i].IsWord()) p.targets[i] = {p.actions[i].WordId()};
  out.push_back(std::move(p));
  return out;
}

}  // namespace simul
