// transition/vocab.cc

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

#include "transition/vocab.h"

#include <sstream>

#include "base/simul-error.h"

namespace simul {

Vocab::Vocab(std::vector<std::string> tokens, int delay_id, int eos_id)
    : tokens_(std::move(tokens)), delay_id_(delay_id), eos_id_(eos_id) {
  const int n = Size();
  if (delay_id < 0 || delay_id >= n || eos_id < 0 || eos_id >= n)
    throw FormatError("vocab: delay/eos id out of range");
  if (delay_id == eos_id)
    throw FormatError("vocab: delay and eos must be distinct tokens");
  for (int i = 0; i < n; ++i) {
    const std::string &tok = tokens_[i];
    if (tok.empty() || tok.find_first_of(" \t\r\n") != std::string::npos)
      throw FormatError("vocab: token " + std::to_string(i) +
                        " is empty or contains whitespace");
    if (!index_.emplace(tok, i).second)
      throw FormatError("vocab: duplicate token '" + tok + "'");
  }
}

Vocab Vocab::WithSpecials(const std::vector<std::string> &words) {
  std::vector<std::string> tokens;
  tokens.reserve(words.size() + 2);
  tokens.emplace_back(kDelayToken);
  tokens.emplace_back(kEosToken);
  tokens.insert(tokens.end(), words.begin(), words.end());
  return Vocab(std::move(tokens), 0, 1);
}

const std::string &Vocab::Token(int id) const {
  if (id < 0 || id >= Size())
    throw FormatError("vocab: id " + std::to_string(id) + " out of range");
  return tokens_[id];
}

std::optional<int> Vocab::Find(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int Vocab::Id(std::string_view token) const {
  auto id = Find(token);
  if (!id) throw FormatError("vocab: unknown token '" + std::string(token) + "'");
  return *id;
}

nlohmann::json Vocab::ToJson() const {
  return {{"tokens", tokens_}, {"delay_id", delay_id_}, {"eos_id", eos_id_}};
}

Vocab Vocab::FromJson(const nlohmann::json &j) {
  try {
    return Vocab(j.at("tokens").get<std::vector<std::string>>(),
                 j.at("delay_id").get<int>(), j.at("eos_id").get<int>());
  } catch (const nlohmann::json::exception &e) {
    throw FormatError(std::string("vocab json: ") + e.what());
  }
}

std::vector<int> Vocab::Encode(std::string_view line) const {
  std::istringstream in{std::string(line)};
  std::vector<int> ids;
  std::string tok;
  while (in >> tok) ids.push_back(Id(tok));
  return ids;
}

std::string Vocab::Decode(const std::vector<int> &ids) const {
  std::string out;
  for (size_t i = 0; i < ids.size(); ++i) {
    if (i) out += ' ';
    out += Token(ids[i]);
  }
  return out;
}

}  // namespace simul
