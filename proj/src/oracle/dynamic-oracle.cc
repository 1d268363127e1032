// oracle/dynamic-oracle.cc

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

#include "oracle/dynamic-oracle.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "base/simul-error.h"

namespace simul {

namespace {

constexpr double kLagTolerance = 1e-9;
// Fractions whose parts grow beyond this fall back to floating point.
constexpr int64_t kMaxExactPart = int64_t{1} << 50;

// Oracle at grid cell (s, t) for the gold pair; returns 0, 1 or 2 actions.
void OracleAt(int s, int t, int x_len, std::span<const int> y,
              const OracleConfig &cfg, std::vector<Action> *out) {
  out->clear();
  const int y_len = static_cast<int>(y.size());
  const bool src_left = s < x_len;
  const bool tgt_left = t < y_len;
  if (src_left && LagAtMost(s, t, cfg, cfg.alpha)) {
    out->push_back(Action::Delay());
  } else if (tgt_left && LagAtLeast(s, t, cfg, cfg.beta)) {
    out->push_back(Action::Word(y[t]));
  } else {
    // Two-action branch, filtered down to what the transition function can
    // still apply.
    if (src_left) out->push_back(Action::Delay());
    if (tgt_left) out->push_back(Action::Word(y[t]));
  }
}

void Enumerate(int s, int t, std::span<const int> x, std::span<const int> y,
               const OracleConfig &cfg, size_t limit, ActionSequence *prefix,
               OraclePathSet *result) {
  if (result->truncated) return;
  if (t == static_cast<int>(y.size())) {
    if (result->paths.size() >= limit) {
      result->truncated = true;
      return;
    }
    result->paths.push_back(*prefix);
    return;
  }
  std::vector<Action> options;
  OracleAt(s, t, static_cast<int>(x.size()), y, cfg, &options);
  for (const Action &a : options) {
    prefix->push_back(a);
    if (a.IsDelay())
      Enumerate(s + 1, t, x, y, cfg, limit, prefix, result);
    else
      Enumerate(s, t + 1, x, y, cfg, limit, prefix, result);
    prefix->pop_back();
  }
}

}  // namespace

LengthRatio::LengthRatio(double value)
    : value_(value), exact_(false), num_(0), den_(0) {}

LengthRatio LengthRatio::Exact(int64_t num, int64_t den) {
  if (den == 0) throw ConfigError({"gamma: zero denominator"});
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const int64_t g = std::gcd(num, den);
  LengthRatio r;
  r.num_ = num / (g ? g : 1);
  r.den_ = den / (g ? g : 1);
  r.exact_ = true;
  r.value_ = static_cast<double>(r.num_) / static_cast<double>(r.den_);
  return r;
}

LengthRatio LengthRatio::Parse(const std::string &text) {
  const auto slash = text.find('/');
  try {
    if (slash != std::string::npos)
      return Exact(std::stoll(text.substr(0, slash)),
                   std::stoll(text.substr(slash + 1)));
    size_t used = 0;
    double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return LengthRatio(v);
  } catch (const std::logic_error &) {
    throw ConfigError({"gamma: cannot parse '" + text + "'"});
  }
}

int LengthRatio::CompareLag(int src_len, int tgt_len, int bound) const {
  if (exact_) {
    // src - num/den * tgt  vs  bound   <=>   src*den - num*tgt  vs  bound*den
    const __int128 lhs = static_cast<__int128>(src_len) * den_ -
                         static_cast<__int128>(num_) * tgt_len;
    const __int128 rhs = static_cast<__int128>(bound) * den_;
    return (lhs > rhs) - (lhs < rhs);
  }
  const double diff = (src_len - value_ * tgt_len) - bound;
  if (std::fabs(diff) <= kLagTolerance) return 0;
  return diff > 0 ? 1 : -1;
}

std::string LengthRatio::ToString() const {
  if (exact_) {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }
  std::ostringstream os;
  os.precision(17);
  os << value_;
  return os.str();
}

nlohmann::json LengthRatio::ToJson() const {
  if (exact_)
    return {{"num", num_}, {"den", den_}, {"value", value_}};
  return value_;
}

LengthRatio LengthRatio::FromJson(const nlohmann::json &j) {
  if (j.is_number()) return LengthRatio(j.get<double>());
  if (j.is_string()) return Parse(j.get<std::string>());
  if (j.is_object() && j.contains("num") && j.contains("den"))
    return Exact(j.at("num").get<int64_t>(), j.at("den").get<int64_t>());
  throw ConfigError({"gamma: expected number, \"a/b\" string or {num, den}"});
}

LengthRatio MeanLengthRatio(std::span<const std::pair<size_t, size_t>> lengths) {
  // Running sum num/den of src/tgt, reduced at every step.
  __int128 num = 0, den = 1;
  double approx = 0.0;
  size_t count = 0;
  bool exact = true;
  for (const auto &[src, tgt] : lengths) {
    if (tgt == 0) continue;
    ++count;
    approx += static_cast<double>(src) / static_cast<double>(tgt);
    if (!exact) continue;
    num = num * static_cast<__int128>(tgt) + static_cast<__int128>(src) * den;
    den = den * static_cast<__int128>(tgt);
    __int128 a = num < 0 ? -num : num, b = den;
    while (b != 0) {
      __int128 r = a % b;
      a = b;
      b = r;
    }
    if (a > 1) {
      num /= a;
      den /= a;
    }
    if (num > kMaxExactPart || den > kMaxExactPart) exact = false;
  }
  if (count == 0) return LengthRatio();
  if (exact && den * static_cast<__int128>(count) <= kMaxExactPart)
    return LengthRatio::Exact(static_cast<int64_t>(num),
                              static_cast<int64_t>(den) *
                                  static_cast<int64_t>(count));
  return LengthRatio(approx / static_cast<double>(count));
}

void OracleConfig::Check() const {
  ConfigChecker c;
  c.Require(alpha < beta, "oracle: alpha (" + std::to_string(alpha) +
                              ") must be < beta (" + std::to_string(beta) + ")");
  c.Require(gamma.value() > 0 && std::isfinite(gamma.value()),
            "oracle: gamma must be positive and finite");
  c.Throw();
}

nlohmann::json OracleConfig::ToJson() const {
  return {{"alpha", alpha}, {"beta", beta}, {"gamma", gamma.ToJson()}};
}

OracleConfig OracleConfig::FromJson(const nlohmann::json &j) {
  OracleConfig cfg;
  cfg.alpha = j.value("alpha", cfg.alpha);
  cfg.beta = j.value("beta", cfg.beta);
  if (j.contains("gamma")) cfg.gamma = LengthRatio::FromJson(j.at("gamma"));
  return cfg;
}

double EffectiveLag(const PrefixState &state, const OracleConfig &cfg) {
  return state.src_len - cfg.gamma.value() * state.TgtLen();
}

std::vector<Action> OracleActions(const PrefixState &state,
                                  std::span<const int> x, std::span<const int> y,
                                  const OracleConfig &cfg) {
  const int s = state.src_len, t = state.TgtLen();
  if (s < 0 || s > static_cast<int>(x.size()) || t > static_cast<int>(y.size()) ||
      !std::equal(state.tgt.begin(), state.tgt.end(), y.begin()))
    throw OracleDomainError("state is not a prefix pair of (x, y)");
  if (t == static_cast<int>(y.size()))
    throw OracleDomainError("target already complete; the episode has ended");
  std::vector<Action> out;
  OracleAt(s, t, static_cast<int>(x.size()), y, cfg, &out);
  return out;
}

ActionSequence ExtremePath(std::span<const int> x, std::span<const int> y,
                           const OracleConfig &cfg, PathSide side) {
  ActionSequence path;
  std::vector<Action> options;
  int s = 0, t = 0;
  const int x_len = static_cast<int>(x.size());
  while (t < static_cast<int>(y.size())) {
    OracleAt(s, t, x_len, y, cfg, &options);
    // options is {Delay, Word} in the two-action branch.
    const Action a = options.size() == 1                   ? options[0]
                     : side == PathSide::kConservative ? options[0]
                                                           : options[1];
    path.push_back(a);
    if (a.IsDelay())
      ++s;
    else
      ++t;
  }
  return path;
}

ActionSequence WaitkPath(std::span<const int> x, std::span<const int> y, int k) {
  if (k < 1) throw ConfigError({"wait-k: k must be >= 1"});
  ActionSequence path;
  const int x_len = static_cast<int>(x.size());
  int s = 0;
  for (; s < std::min(k, x_len); ++s) path.push_back(Action::Delay());
  for (size_t j = 0; j < y.size(); ++j) {
    if (j > 0 && s < x_len) {
      path.push_back(Action::Delay());
      ++s;
    }
    path.push_back(Action::Word(y[j]));
  }
  return path;
}

OraclePathSet EnumerateOraclePaths(std::span<const int> x,
                                   std::span<const int> y,
                                   const OracleConfig &cfg, size_t limit) {
  OraclePathSet result;
  ActionSequence prefix;
  Enumerate(0, 0, x, y, cfg, limit, &prefix, &result);
  return result;
}

double CumulativeLag(const ActionSequence &path, const OracleConfig &cfg) {
  double total = 0.0;
  int s = 0, t = 0;
  for (const Action &a : path) {
    total += s - cfg.gamma.value() * t;
    if (a.IsDelay())
      ++s;
    else
      ++t;
  }
  return total;
}

std::ptrdiff_t FirstOracleViolation(const ActionSequence &path,
                                    std::span<const int> x,
                                    std::span<const int> y,
                                    const OracleConfig &cfg) {
  std::vector<Action> options;
  int s = 0, t = 0;
  const int x_len = static_cast<int>(x.size());
  for (size_t i = 0; i < path.size(); ++i) {
    if (t == static_cast<int>(y.size())) return static_cast<std::ptrdiff_t>(i);
    OracleAt(s, t, x_len, y, cfg, &options);
    if (std::find(options.begin(), options.end(), path[i]) == options.end())
      return static_cast<std::ptrdiff_t>(i);
    if (path[i].IsDelay())
      ++s;
    else
      ++t;
  }
  if (t != static_cast<int>(y.size()))
    return static_cast<std::ptrdiff_t>(path.size());
  return -1;
}

}  // namespace simul
