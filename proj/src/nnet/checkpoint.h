// nnet/checkpoint.h

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

// Checkpoint container:
//
//   bytes 0..7   magic "SIMULMT\x01" (last byte is the format version)
//   bytes 8..15  little-endian uint64 header length H
//   H bytes      UTF-8 JSON: {"model": ModelConfig, "vocab": Vocab,
//                "tensors": [{"name", "rows", "cols"}...], "meta": {...}}
//   payload      every tensor in header order, row-major, little-endian
//                float32 or float64 according to model.precision

#ifndef SIMUL_NNET_CHECKPOINT_H_
#define SIMUL_NNET_CHECKPOINT_H_

#include <memory>
#include <string>
#include <variant>

#include "json.hpp"
#include "nnet/scorer-model.h"

namespace simul {

using AnyScorerModel = std::variant<ScorerModel<float>, ScorerModel<double>>;

/// Builds a freshly initialised model of the precision named in `config`.
AnyScorerModel MakeScorerModel(const ModelConfig &config, const Vocab &vocab);

template <typename Real>
std::string SerializeCheckpoint(const ScorerModel<Real> &model,
                                const nlohmann::json &meta);
/// Writes to a temporary file then renames, so a crash never leaves a
/// truncated checkpoint behind.
template <typename Real>
void WriteCheckpoint(const std::string &path, const ScorerModel<Real> &model,
                     const nlohmann::json &meta);

struct LoadedCheckpoint {
  std::unique_ptr<AnyScorerModel> model;
  nlohmann::json meta;
};
LoadedCheckpoint ReadCheckpoint(const std::string &path);
LoadedCheckpoint ParseCheckpoint(const std::string &bytes);

/// Owns a scorer adapter for whichever precision the model has.
std::unique_ptr<ActionScorer> MakeActionScorer(const AnyScorerModel &model);
const ModelConfig &GetModelConfig(const AnyScorerModel &model);
const Vocab &GetVocab(const AnyScorerModel &model);

}  // namespace simul

#endif  // SIMUL_NNET_CHECKPOINT_H_
