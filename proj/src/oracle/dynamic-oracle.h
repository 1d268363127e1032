// oracle/dynamic-oracle.h

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

#ifndef SIMUL_ORACLE_DYNAMIC_ORACLE_H_
#define SIMUL_ORACLE_DYNAMIC_ORACLE_H_

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "transition/transition-system.h"

namespace simul {

/// Source/target length ratio used to rescale the target side of the lag.
/// When built from integer lengths the ratio is kept as an exact fraction and
/// lag comparisons are done in integer arithmetic; otherwise comparisons use
/// an absolute tolerance of 1e-9.
class LengthRatio {
 public:
  LengthRatio() = default;
  explicit LengthRatio(double value);
  static LengthRatio Exact(int64_t num, int64_t den);
  /// Accepts "1.25", "5/4" (exact) and plain numbers.
  static LengthRatio Parse(const std::string &text);

  double value() const { return value_; }
  bool is_exact() const { return exact_; }
  int64_t num() const { return num_; }
  int64_t den() const { return den_; }

  /// Sign of (src_len - ratio * tgt_len - bound).
  int CompareLag(int src_len, int tgt_len, int bound) const;

  std::string ToString() const;
  nlohmann::json ToJson() const;
  static LengthRatio FromJson(const nlohmann::json &j);

  friend bool operator==(const LengthRatio &, const LengthRatio &) = default;

 private:
  double value_ = 1.0;
  bool exact_ = true;
  int64_t num_ = 1;
  int64_t den_ = 1;
};

/// Mean of src/tgt over the given length pairs, exact when the fraction stays
/// representable.  Pairs with a zero target length are skipped.
LengthRatio MeanLengthRatio(std::span<const std::pair<size_t, size_t>> lengths);

struct OracleConfig {
  int alpha = 1;          // lag at or below this forces a read
  int beta = 5;           // lag at or above this forces a write
  LengthRatio gamma;

  /// Throws ConfigError unless alpha < beta and gamma > 0.
  void Check() const;
  nlohmann::json ToJson() const;
  static OracleConfig FromJson(const nlohmann::json &j);
};

/// d' = src_len - gamma * |tgt|.
double EffectiveLag(const PrefixState &state, const OracleConfig &cfg);
inline bool LagAtMost(int src_len, int tgt_len, const OracleConfig &cfg, int b) {
  return cfg.gamma.CompareLag(src_len, tgt_len, b) <= 0;
}
inline bool LagAtLeast(int src_len, int tgt_len, const OracleConfig &cfg, int b) {
  return cfg.gamma.CompareLag(src_len, tgt_len, b) >= 0;
}

/// Restricted dynamic oracle.  Returns the actions that keep the walk inside
/// the band and still reach (x, y); Delay (if any) comes first.  Forcing wins
/// over the two-action branch, and a Delay is dropped when the source is
/// exhausted.  Throws OracleDomainError when `state` is not a prefix pair of
/// (x, y) or when the target is already complete.
std::vector<Action> OracleActions(const PrefixState &state,
                                  std::span<const int> x, std::span<const int> y,
                                  const OracleConfig &cfg);

enum class PathSide { kAggressive, kConservative };

/// The oracle walk that writes whenever allowed (aggressive) or reads
/// whenever allowed (conservative).  Requires |x|, |y| >= 1.
ActionSequence ExtremePath(std::span<const int> x, std::span<const int> y,
                           const OracleConfig &cfg, PathSide side);

/// Wait-k schedule: k reads (capped at |x|), then alternate write/read until
/// the source is exhausted, then the remaining writes.  Stops after the
/// last target word.  k >= |x| gives the full-sentence path.
ActionSequence WaitkPath(std::span<const int> x, std::span<const int> y, int k);

struct OraclePathSet {
  std::vector<ActionSequence> paths;
  bool truncated = false;
};

/// Exhaustive DFS over oracle choices (Delay branch first).  Stops after
/// `limit` complete paths and sets `truncated`.
OraclePathSet EnumerateOraclePaths(std::span<const int> x,
                                   std::span<const int> y,
                                   const OracleConfig &cfg, size_t limit);

/// Sum of d' over the states each action was taken from.
double CumulativeLag(const ActionSequence &path, const OracleConfig &cfg);

/// Replays `path` and reports the first step that breaks a forcing rule or
/// leaves the oracle's action set; -1 if the path is a valid oracle walk
/// ending with the full target.
std::ptrdiff_t FirstOracleViolation(const ActionSequence &path,
                                    std::span<const int> x,
                                    std::span<const int> y,
                                    const OracleConfig &cfg);

}  // namespace simul

#endif  // SIMUL_ORACLE_DYNAMIC_ORACLE_H_
