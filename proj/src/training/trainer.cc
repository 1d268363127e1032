// training/trainer.cc

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

#include "training/trainer.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "base/simul-error.h"

namespace simul {

void TrainConfig::Check() const {
  ConfigChecker c;
  try {
    oracle.Check();
  } catch (const ConfigError &e) {
    for (const auto &v : e.violations()) c.Require(false, v);
  }
  c.Require(learning_rate > 0, "train.learning_rate must be > 0");
  c.Require(beta1 >= 0 && beta1 < 1, "train.beta1 must be in [0, 1)");
  c.Require(beta2 >= 0 && beta2 < 1, "train.beta2 must be in [0, 1)");
  c.Require(epsilon > 0, "train.epsilon must be > 0");
  c.Require(batch_size >= 1, "train.batch_size must be >= 1");
  c.Require(max_steps >= 0, "train.max_steps must be >= 0");
  c.Require(checkpoint_every >= 0, "train.checkpoint_every must be >= 0");
  c.Require(mode.kind != Policy::kWaitk || mode.k >= 1, "train.mode: k must be >= 1");
  c.Throw();
}

nlohmann::json TrainConfig::ToJson() const {
  return {{"oracle", oracle.ToJson()},
          {"mode", mode.ToString()},
          {"learning_rate", learning_rate},
          {"beta1", beta1},
          {"beta2", beta2},
          {"epsilon", epsilon},
          {"batch_size", batch_size},
          {"max_steps", max_steps},
          {"checkpoint_every", checkpoint_every},
          {"negative_term", NegativeTermName(negative_term)},
          {"seed", seed}};
}

TrainConfig TrainConfig::FromJson(const nlohmann::json &j) {
  TrainConfig c;
  if (j.contains("oracle")) c.oracle = OracleConfig::FromJson(j.at("oracle"));
  if (j.contains("mode")) c.mode = Policy::Parse(j.at("mode").get<std::string>());
  c.learning_rate = j.value("learning_rate", c.learning_rate);
  c.beta1 = j.value("beta1", c.beta1);
  c.beta2 = j.value("beta2", c.beta2);
  c.epsilon = j.value("epsilon", c.epsilon);
  c.batch_size = j.value("batch_size", c.batch_size);
  c.max_steps = j.value("max_steps", c.max_steps);
  c.checkpoint_every = j.value("checkpoint_every", c.checkpoint_every);
  if (j.contains("negative_term")) {
    const auto &n = j.at("negative_term");
    c.negative_term = n.is_boolean() ? (n.get<bool>() ? NegativeTerm::kCompetitor
                                                      : NegativeTerm::kNone)
                                     : ParseNegativeTerm(n.get<std::string>());
  }
  c.seed = j.value("seed", c.seed);
  return c;
}

nlohmann::json TrainStepReport::ToJson() const {
  return {{"step", step},
          {"loss", loss},
          {"grad_norm", grad_norm},
          {"examples", examples},
          {"wall_ms", wall_ms}};
}

template <typename Real>
Trainer<Real>::Trainer(ScorerModel<Real> *model, const TrainConfig &config,
                       std::vector<TrainingPair> data)
    : model_(model),
      config_(config),
      data_(std::move(data)),
      loss_(model->vocab().DelayId(), config.negative_term),
      shuffle_rng_(MakeRng(config.seed, "shuffle")) {
  config_.Check();
  if (data_.empty()) throw ConfigError({"train: empty training data"});
  const Vocab &vocab = model_->vocab();
  paths_.reserve(data_.size());
  for (size_t i = 0; i < data_.size(); ++i) {
    const TrainingPair &p = data_[i];
    if (p.source.empty() || p.target.empty() || p.target.back() != vocab.EosId())
      throw FormatError("train: pair " + std::to_string(i) +
                        " needs a non-empty source and an eos-terminated target");
    paths_.push_back(
        BuildTrainingPaths(p.source, p.target, vocab, config_.oracle, config_.mode));
  }
  grads_ = model_->params().ZerosLike();
  m_ = model_->params().ZerosLike();
  v_ = model_->params().ZerosLike();
  order_.resize(data_.size());
}

template <typename Real>
TrainStepReport Trainer<Real>::Step() {
  const auto start = std::chrono::steady_clock::now();
  std::vector<SupervisedPath> batch;
  const size_t pairs = std::min<size_t>(config_.batch_size, data_.size());
  for (size_t b = 0; b < pairs; ++b) {
    if (cursor_ == 0) {
      std::iota(order_.begin(), order_.end(), size_t{0});
      // Explicit Fisher-Yates so the order does not depend on the standard
      // library's shuffle implementation.
      for (size_t i = order_.size(); i > 1; --i)
        std::swap(order_[i - 1], order_[shuffle_rng_() % i]);
    }
    const auto &paths = paths_[order_[cursor_]];
    batch.insert(batch.end(), paths.begin(), paths.end());
    cursor_ = (cursor_ + 1) % order_.size();
  }

  grads_.SetZero();
  const double total = model_->LossAndGradients(batch, loss_, &grads_);
  const double inv = 1.0 / static_cast<double>(pairs);
  grads_.Scale(static_cast<Real>(inv));
  const double grad_norm = std::sqrt(grads_.SquaredNorm());
  if (!std::isfinite(total) || !std::isfinite(grad_norm))
    throw NumericError("non-finite loss or gradient at step " +
                       std::to_string(step_ + 1));

  ++step_;
  const double b1 = config_.beta1, b2 = config_.beta2;
  const double c1 = 1.0 - std::pow(b1, step_), c2 = 1.0 - std::pow(b2, step_);
  ParameterSet<Real> &w = model_->params();
  for (int i = 0; i < w.size(); ++i) {
    auto g = grads_[i].array();
    auto m = m_[i].array();
    auto v = v_[i].array();
    m = static_cast<Real>(b1) * m + static_cast<Real>(1 - b1) * g;
    v = static_cast<Real>(b2) * v + static_cast<Real>(1 - b2) * g * g;
    w[i].array() -= static_cast<Real>(config_.learning_rate) *
                    (m / static_cast<Real>(c1)) /
                    ((v / static_cast<Real>(c2)).sqrt() +
                     static_cast<Real>(config_.epsilon));
  }
  examples_ += pairs;

  TrainStepReport r;
  r.step = step_;
  r.loss = total * inv;
  r.grad_norm = grad_norm;
  r.examples = examples_;
  r.floor_hits = loss_.floor_hits();
  r.wall_ms = std::chrono::duration<double, std::milli>(
                  std::chrono::steady_clock::now() - start).count();
  return r;
}

TrainRunResult RunTraining(AnyScorerModel *model, const TrainConfig &config,
                           const std::vector<TrainingPair> &data,
                           const TrainRunOptions &options) {
  return std::visit(
      [&](auto &m) {
        using Real = typename std::decay_t<decltype(m.params()[0])>::Scalar;
        Trainer<Real> trainer(&m, config, data);
        TrainRunResult result;
        auto save = [&](int step) {
          if (options.checkpoint_path.empty()) return;
          nlohmann::json meta = options.meta;
          meta["step"] = step;
          meta["train"] = config.ToJson();
          WriteCheckpoint(options.checkpoint_path, m, meta);
        };
        for (int s = 0; s < config.max_steps; ++s) {
          TrainStepReport r;
          try {
            r = trainer.Step();
          } catch (const NumericError &e) {
            result.diverged = true;
            result.error = e.what();
            return result;
          }
          result.steps = r.step;
          result.final_loss = r.loss;
          if (options.log) *options.log << r.ToJson().dump() << '\n';
          if (config.checkpoint_every > 0 && r.step % config.checkpoint_every == 0 &&
              r.step != config.max_steps)
            save(r.step);
          if (options.on_step) options.on_step(r);
        }
        save(result.steps);
        return result;
      },
      *model);
}

template class Trainer<float>;
template class Trainer<double>;

}  // namespace simul
