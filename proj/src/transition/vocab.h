// transition/vocab.h

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

#ifndef SIMUL_TRANSITION_VOCAB_H_
#define SIMUL_TRANSITION_VOCAB_H_

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "json.hpp"

namespace simul {

inline constexpr std::string_view kDelayToken = "<eps>";
inline constexpr std::string_view kEosToken = "</s>";

/// The extended action vocabulary: every target word plus the delay token.
/// Token ids are dense from 0.  The same table indexes source words, so
/// source sentences never contain the delay token.
class Vocab {
 public:
  Vocab() = default;
  /// Throws FormatError unless delay and eos are distinct, in range and each
  /// occur exactly once, and all token strings are unique and non-empty.
  Vocab(std::vector<std::string> tokens, int delay_id, int eos_id);

  /// <eps> at id 0, </s> at id 1, then `words` in order.
  static Vocab WithSpecials(const std::vector<std::string> &words);

  /// Size of the extended vocabulary (words + eos + delay).
  int Size() const { return static_cast<int>(tokens_.size()); }
  /// Number of non-delay tokens (words and eos).
  int NumWords() const { return Size() - 1; }
  int DelayId() const { return delay_id_; }
  int EosId() const { return eos_id_; }
  bool IsWord(int id) const { return id >= 0 && id < Size() && id != delay_id_; }

  const std::string &Token(int id) const;
  /// Throws FormatError for unknown tokens.
  int Id(std::string_view token) const;
  std::optional<int> Find(std::string_view token) const;

  const std::vector<std::string> &tokens() const { return tokens_; }

  /// {"tokens": [...], "delay_id": n, "eos_id": m}
  nlohmann::json ToJson() const;
  static Vocab FromJson(const nlohmann::json &j);

  /// Whitespace-tokenizes and maps a sentence; throws on unknown tokens.
  std::vector<int> Encode(std::string_view line) const;
  std::string Decode(const std::vector<int> &ids) const;

  friend bool operator==(const Vocab &a, const Vocab &b) {
    return a.tokens_ == b.tokens_ && a.delay_id_ == b.delay_id_ &&
           a.eos_id_ == b.eos_id_;
  }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> index_;
  int delay_id_ = -1;
  int eos_id_ = -1;
};

}  // namespace simul

#endif  // SIMUL_TRANSITION_VOCAB_H_
