// eval/latency-metrics.cc

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

#include "eval/latency-metrics.h"

#include "base/simul-error.h"

namespace simul {

namespace {

void CheckInput(std::span<const int> g, int source_len) {
  if (g.empty()) throw SimulError("metric", "no emitted words");
  if (source_len < 1) throw SimulError("metric", "empty source");
}

}  // namespace

AlResult AverageLagging(std::span<const int> g, int source_len) {
  CheckInput(g, source_len);
  const int m = static_cast<int>(g.size());
  AlResult r;
  r.tau = m;
  r.reached_end = false;
  for (int j = 0; j < m; ++j) {
    if (g[j] >= source_len) {
      r.tau = j + 1;
      r.reached_end = true;
      break;
    }
  }
  // (j-1)/r with r = m/n is (j-1)*n/m.
  double sum = 0.0;
  for (int j = 1; j <= r.tau; ++j)
    sum += g[j - 1] - static_cast<double>(j - 1) * source_len / m;
  r.value = sum / r.tau;
  return r;
}

double AverageProportion(std::span<const int> g, int source_len) {
  CheckInput(g, source_len);
  double sum = 0.0;
  for (int v : g) sum += v;
  return sum / (static_cast<double>(source_len) * static_cast<double>(g.size()));
}

CwResult ConsecutiveWait(std::span<const int> g) {
  if (g.empty()) throw SimulError("metric", "no emitted words");
  int gaps = 0, prev = 0;
  for (int v : g) {
    if (v > prev) ++gaps;
    prev = v;
  }
  CwResult r;
  if (gaps == 0) {
    r.defined = false;
    return r;
  }
  r.value = static_cast<double>(g.back()) / gaps;
  return r;
}

LatencyReport CorpusLatency(const std::vector<std::vector<int>> &g,
                            const std::vector<int> &source_lens) {
  if (g.size() != source_lens.size())
    throw SimulError("metric", "trace and source counts differ");
  LatencyReport r;
  size_t cw_count = 0;
  for (size_t i = 0; i < g.size(); ++i) {
    if (g[i].empty()) {
      ++r.empty_outputs;
      continue;
    }
    const AlResult al = AverageLagging(g[i], source_lens[i]);
    r.al += al.value;
    r.al_unreached += !al.reached_end;
    r.ap += AverageProportion(g[i], source_lens[i]);
    const CwResult cw = ConsecutiveWait(g[i]);
    if (cw.defined) {
      r.cw += cw.value;
      ++cw_count;
    } else {
      ++r.cw_undefined;
    }
    ++r.sentences;
  }
  if (r.sentences > 0) {
    r.al /= r.sentences;
    r.ap /= r.sentences;
  }
  if (cw_count > 0) r.cw /= cw_count;
  return r;
}

}  // namespace simul
