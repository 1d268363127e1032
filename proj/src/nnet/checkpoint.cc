// nnet/checkpoint.cc

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

#include "nnet/checkpoint.h"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "base/simul-error.h"

namespace simul {

namespace {

constexpr char kMagic[8] = {'S', 'I', 'M', 'U', 'L', 'M', 'T', '\x01'};

template <typename T>
void AppendLittleEndian(T value, std::string *out) {
  char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big)
    std::reverse(bytes, bytes + sizeof(T));
  out->append(bytes, sizeof(T));
}

template <typename T>
T ReadLittleEndian(const char *p) {
  char bytes[sizeof(T)];
  std::memcpy(bytes, p, sizeof(T));
  if constexpr (std::endian::native == std::endian::big)
    std::reverse(bytes, bytes + sizeof(T));
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

template <typename Real>
void FillTensors(const std::string &bytes, size_t offset,
                 const nlohmann::json &tensors, ScorerModel<Real> *model) {
  ParameterSet<Real> &params = model->params();
  if (static_cast<int>(tensors.size()) != params.size())
    throw FormatError("checkpoint: tensor count does not match model layout");
  for (int i = 0; i < params.size(); ++i) {
    const auto &t = tensors[i];
    Matrix<Real> &m = params[i];
    if (t.at("name").get<std::string>() != params.name(i) ||
        t.at("rows").get<Eigen::Index>() != m.rows() ||
        t.at("cols").get<Eigen::Index>() != m.cols())
      throw FormatError("checkpoint: tensor " + std::to_string(i) + " (" +
                        params.name(i) + ") does not match model layout");
    const size_t need = static_cast<size_t>(m.size()) * sizeof(Real);
    if (offset + need > bytes.size())
      throw FormatError("checkpoint: truncated payload");
    for (Eigen::Index k = 0; k < m.size(); ++k)
      m.data()[k] = ReadLittleEndian<Real>(bytes.data() + offset + k * sizeof(Real));
    offset += need;
  }
  if (offset != bytes.size())
    throw FormatError("checkpoint: trailing bytes after payload");
}

}  // namespace

AnyScorerModel MakeScorerModel(const ModelConfig &config, const Vocab &vocab) {
  if (config.precision == Precision::kF64)
    return AnyScorerModel(std::in_place_type<ScorerModel<double>>, config, vocab);
  return AnyScorerModel(std::in_place_type<ScorerModel<float>>, config, vocab);
}

template <typename Real>
std::string SerializeCheckpoint(const ScorerModel<Real> &model,
                                const nlohmann::json &meta) {
  const ParameterSet<Real> &params = model.params();
  nlohmann::json tensors = nlohmann::json::array();
  for (int i = 0; i < params.size(); ++i)
    tensors.push_back({{"name", params.name(i)},
                       {"rows", params[i].rows()},
                       {"cols", params[i].cols()}});
  nlohmann::json header = {{"model", model.config().ToJson()},
                           {"vocab", model.vocab().ToJson()},
                           {"tensors", tensors},
                           {"meta", meta}};
  const std::string text = header.dump();
  std::string out(kMagic, sizeof(kMagic));
  AppendLittleEndian<uint64_t>(text.size(), &out);
  out += text;
  for (int i = 0; i < params.size(); ++i)
    for (Eigen::Index k = 0; k < params[i].size(); ++k)
      AppendLittleEndian<Real>(params[i].data()[k], &out);
  return out;
}

template <typename Real>
void WriteCheckpoint(const std::string &path, const ScorerModel<Real> &model,
                     const nlohmann::json &meta) {
  const std::string bytes = SerializeCheckpoint(model, meta);
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("checkpoint: cannot open " + tmp);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw FormatError("checkpoint: write failed for " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw FormatError("checkpoint: cannot rename " + tmp + " to " + path);
}

LoadedCheckpoint ParseCheckpoint(const std::string &bytes) {
  if (bytes.size() < 16 || std::memcmp(bytes.data(), kMagic, 7) != 0)
    throw FormatError("checkpoint: bad magic");
  if (bytes[7] != kMagic[7])
    throw FormatError("checkpoint: unsupported format version " +
                      std::to_string(static_cast<int>(bytes[7])));
  const uint64_t header_len = ReadLittleEndian<uint64_t>(bytes.data() + 8);
  if (16 + header_len > bytes.size())
    throw FormatError("checkpoint: truncated header");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(bytes.substr(16, header_len));
  } catch (const nlohmann::json::exception &e) {
    throw FormatError(std::string("checkpoint header: ") + e.what());
  }
  const ModelConfig config = ModelConfig::FromJson(header.at("model"));
  const Vocab vocab = Vocab::FromJson(header.at("vocab"));
  LoadedCheckpoint loaded;
  loaded.model = std::make_unique<AnyScorerModel>(MakeScorerModel(config, vocab));
  loaded.meta = header.value("meta", nlohmann::json::object());
  std::visit(
      [&](auto &model) {
        FillTensors(bytes, 16 + header_len, header.at("tensors"), &model);
      },
      *loaded.model);
  return loaded;
}

LoadedCheckpoint ReadCheckpoint(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("checkpoint: cannot open " + path);
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  return ParseCheckpoint(bytes);
}

std::unique_ptr<ActionScorer> MakeActionScorer(const AnyScorerModel &model) {
  return std::visit(
      [](const auto &m) -> std::unique_ptr<ActionScorer> {
        using Real = typename std::decay_t<decltype(m.params()[0])>::Scalar;
        return std::make_unique<NeuralScorer<Real>>(m);
      },
      model);
}

const ModelConfig &GetModelConfig(const AnyScorerModel &model) {
  return std::visit([](const auto &m) -> const ModelConfig & { return m.config(); },
                    model);
}

const Vocab &GetVocab(const AnyScorerModel &model) {
  return std::visit([](const auto &m) -> const Vocab & { return m.vocab(); },
                    model);
}

template std::string SerializeCheckpoint(const ScorerModel<float> &,
                                         const nlohmann::json &);
template std::string SerializeCheckpoint(const ScorerModel<double> &,
                                         const nlohmann::json &);
template void WriteCheckpoint(const std::string &, const ScorerModel<float> &,
                              const nlohmann::json &);
template void WriteCheckpoint(const std::string &, const ScorerModel<double> &,
                              const nlohmann::json &);

}  // namespace simul
