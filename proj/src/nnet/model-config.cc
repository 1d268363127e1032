// nnet/model-config.cc

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

#include "nnet/model-config.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "base/simul-error.h"

namespace simul {

std::string ToString(ScoringMode mode) {
  return mode == ScoringMode::kSigmoid ? "sigmoid" : "softmax";
}

std::string ToString(Precision precision) {
  return precision == Precision::kF32 ? "f32" : "f64";
}

ScoringMode ParseScoringMode(const std::string &s) {
  if (s == "sigmoid") return ScoringMode::kSigmoid;
  if (s == "softmax") return ScoringMode::kSoftmax;
  throw ConfigError({"model.scoring: expected sigmoid|softmax, got '" + s + "'"});
}

Precision ParsePrecision(const std::string &s) {
  if (s == "f32") return Precision::kF32;
  if (s == "f64") return Precision::kF64;
  throw ConfigError({"model.precision: expected f32|f64, got '" + s + "'"});
}

void ModelConfig::Check() const {
  ConfigChecker c;
  c.Require(d_model >= 1, "model.d_model must be >= 1");
  c.Require(n_layers >= 1, "model.n_layers must be >= 1");
  c.Require(n_heads >= 1, "model.n_heads must be >= 1");
  c.Require(n_heads < 1 || d_model % n_heads == 0,
            "model.d_model must be divisible by model.n_heads");
  c.Require(ffn_width >= 1, "model.ffn_width must be >= 1");
  c.Require(max_delay_count >= 1, "model.max_delay_count must be >= 1");
  c.Throw();
}

nlohmann::json ModelConfig::ToJson() const {
  return {{"d_model", d_model},
          {"n_layers", n_layers},
          {"n_heads", n_heads},
          {"ffn_width", ffn_width},
          {"max_delay_count", max_delay_count},
          {"keep_delay_in_attention", keep_delay_in_attention},
          {"use_count_embedding", use_count_embedding},
          {"scoring", ToString(scoring)},
          {"precision", ToString(precision)},
          {"seed", seed}};
}

ModelConfig ModelConfig::FromJson(const nlohmann::json &j) {
  ModelConfig c;
  c.d_model = j.value("d_model", c.d_model);
  c.n_layers = j.value("n_layers", c.n_layers);
  c.n_heads = j.value("n_heads", c.n_heads);
  c.ffn_width = j.value("ffn_width", c.ffn_width);
  c.max_delay_count = j.value("max_delay_count", c.max_delay_count);
  c.keep_delay_in_attention =
      j.value("keep_delay_in_attention", c.keep_delay_in_attention);
  c.use_count_embedding = j.value("use_count_embedding", c.use_count_embedding);
  if (j.contains("scoring")) c.scoring = ParseScoringMode(j.at("scoring"));
  if (j.contains("precision")) c.precision = ParsePrecision(j.at("precision"));
  c.seed = j.value("seed", c.seed);
  return c;
}

ScoreVector ScoreVector::FromLogits(std::span<const double> logits,
                                    ScoringMode mode) {
  ScoreVector out;
  out.mode = mode;
  out.scores.resize(logits.size());
  out.log_scores.resize(logits.size());
  if (mode == ScoringMode::kSigmoid) {
    for (size_t i = 0; i < logits.size(); ++i) {
      const double z = logits[i];
      // log sigmoid(z) = -log(1 + exp(-z)), evaluated without overflow.
      out.log_scores[i] = z >= 0 ? -std::log1p(std::exp(-z))
                                 : z - std::log1p(std::exp(z));
      out.scores[i] = std::exp(out.log_scores[i]);
    }
  } else {
    double max = -std::numeric_limits<double>::infinity();
    for (double z : logits) max = std::max(max, z);
    double sum = 0.0;
    for (double z : logits) sum += std::exp(z - max);
    const double log_norm = max + std::log(sum);
    for (size_t i = 0; i < logits.size(); ++i) {
      out.log_scores[i] = logits[i] - log_norm;
      out.scores[i] = std::exp(out.log_scores[i]);
    }
  }
  return out;
}

}  // namespace simul
