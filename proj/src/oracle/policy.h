// oracle/policy.h

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

#ifndef SIMUL_ORACLE_POLICY_H_
#define SIMUL_ORACLE_POLICY_H_

#include <string>

#include "base/simul-error.h"

namespace simul {

/// Read/write schedule family shared by training and decoding.
struct Policy {
  enum Kind { kAdaptive, kWaitk, kFullSentence };
  Kind kind = kAdaptive;
  int k = 0;  // only for kWaitk

  static Policy Adaptive() { return {kAdaptive, 0}; }
  static Policy Waitk(int k) { return {kWaitk, k}; }
  static Policy FullSentence() { return {kFullSentence, 0}; }

  /// "adaptive", "full_sentence", "waitk:K" or "waitK".
  static Policy Parse(const std::string &s) {
    if (s == "adaptive") return Adaptive();
    if (s == "full_sentence" || s == "full") return FullSentence();
    std::string digits;
    if (s.rfind("waitk:", 0) == 0)
      digits = s.substr(6);
    else if (s.rfind("wait", 0) == 0)
      digits = s.substr(4);
    int k = 0;
    try {
      size_t used = 0;
      k = std::stoi(digits, &used);
      if (used != digits.size()) k = 0;
    } catch (const std::logic_error &) {
      k = 0;
    }
    if (k < 1)
      throw ConfigError({"mode: expected adaptive, full_sentence or waitk:K "
                         "with K >= 1, got '" + s + "'"});
    return Waitk(k);
  }

  std::string ToString() const {
    switch (kind) {
      case kAdaptive: return "adaptive";
      case kFullSentence: return "full_sentence";
      default: return "waitk:" + std::to_string(k);
    }
  }

  friend bool operator==(const Policy &, const Policy &) = default;
};

}  // namespace simul

#endif  // SIMUL_ORACLE_POLICY_H_
