// eval/bleu.cc

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

#include "eval/bleu.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "base/simul-error.h"

namespace simul {

namespace {

using NgramCounts = std::map<std::vector<int>, int>;

NgramCounts Count(const std::vector<int> &s, size_t n) {
  NgramCounts c;
  for (size_t i = 0; i + n <= s.size(); ++i)
    ++c[std::vector<int>(s.begin() + i, s.begin() + i + n)];
  return c;
}

}  // namespace

BleuReport CorpusBleu(const std::vector<std::vector<int>> &hypotheses,
                      const std::vector<std::vector<int>> &references) {
  if (hypotheses.empty()) throw SimulError("metric", "BLEU of an empty corpus");
  if (hypotheses.size() != references.size())
    throw SimulError("metric", "BLEU: hypothesis and reference counts differ");
  std::array<double, 4> match{}, total{};
  BleuReport r;
  for (size_t s = 0; s < hypotheses.size(); ++s) {
    const auto &hyp = hypotheses[s], &ref = references[s];
    r.hyp_len += hyp.size();
    r.ref_len += ref.size();
    for (size_t n = 1; n <= 4; ++n) {
      const NgramCounts h = Count(hyp, n), rc = Count(ref, n);
      for (const auto &[gram, c] : h) {
        auto it = rc.find(gram);
        if (it != rc.end()) match[n - 1] += std::min(c, it->second);
        total[n - 1] += c;
      }
    }
  }
  double log_sum = 0.0;
  bool zero = false;
  for (size_t n = 0; n < 4; ++n) {
    r.raw_precisions[n] = total[n] > 0 ? match[n] / total[n] : 0.0;
    r.precisions[n] = n == 0 ? r.raw_precisions[0]
                             : (match[n] + 1.0) / (total[n] + 1.0);
    if (r.precisions[n] <= 0.0)
      zero = true;
    else
      log_sum += std::log(r.precisions[n]);
  }
  if (r.hyp_len == 0) {
    r.brevity_penalty = 0.0;
    return r;
  }
  r.brevity_penalty =
      r.hyp_len >= r.ref_len
          ? 1.0
          : std::exp(1.0 - static_cast<double>(r.ref_len) / r.hyp_len);
  r.bleu = zero ? 0.0 : 100.0 * r.brevity_penalty * std::exp(log_sum / 4.0);
  return r;
}

}  // namespace simul
