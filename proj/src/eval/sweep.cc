// eval/sweep.cc

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

#include "eval/sweep.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "base/simul-error.h"

namespace simul {

namespace {

std::string Fixed4(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 4);
  std::string s(buf, res.ptr);
  if (s == "-0.0000") s = "0.0000";
  return s;
}

double ParseReal(const std::string &field, const std::string &context) {
  double v = 0.0;
  const char *begin = field.data(), *end = field.data() + field.size();
  auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc() || res.ptr != end || field.empty())
    throw FormatError(context + ": cannot parse '" + field + "' as a number");
  return v;
}

std::vector<std::string> SplitCommas(const std::string &line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(line);
  while (std::getline(is, cur, ',')) out.push_back(cur);
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

}  // namespace

DecodedCorpus DecodeCorpus(const ActionScorer &scorer, const Vocab &vocab,
                           const std::vector<std::vector<int>> &sources,
                           const std::vector<std::vector<int>> &references,
                           const DecodeConfig &cfg) {
  if (sources.size() != references.size())
    throw SimulError("eval", "source and reference counts differ");
  DecodedCorpus out;
  std::vector<std::vector<int>> hyps, g;
  std::vector<int> lens;
  for (const auto &src : sources) {
    out.traces.push_back(Decode(scorer, vocab, src, cfg));
    const DecodeTrace &t = out.traces.back();
    hyps.push_back(t.words);
    g.push_back(t.g);
    lens.push_back(static_cast<int>(src.size()));
    out.truncated += t.truncated;
  }
  out.latency = CorpusLatency(g, lens);
  out.bleu = CorpusBleu(hyps, references);
  out.token_accuracy = TokenAccuracy(hyps, references);
  return out;
}

double TokenAccuracy(const std::vector<std::vector<int>> &hypotheses,
                     const std::vector<std::vector<int>> &references) {
  size_t hit = 0, total = 0;
  for (size_t s = 0; s < references.size(); ++s) {
    for (size_t j = 0; j < references[s].size(); ++j)
      hit += j < hypotheses[s].size() && hypotheses[s][j] == references[s][j];
    total += references[s].size();
  }
  return total ? static_cast<double>(hit) / total : 0.0;
}

double PositionAccuracy(const std::vector<std::vector<int>> &hypotheses,
                        const std::vector<std::vector<int>> &references,
                        size_t position) {
  size_t hit = 0, total = 0;
  for (size_t s = 0; s < references.size(); ++s) {
    if (references[s].size() <= position) continue;
    ++total;
    hit += hypotheses[s].size() > position &&
           hypotheses[s][position] == references[s][position];
  }
  return total ? static_cast<double>(hit) / total : 0.0;
}

std::vector<SweepRow> Sweep(const ActionScorer &scorer, const Vocab &vocab,
                            const std::vector<std::vector<int>> &sources,
                            const std::vector<std::vector<int>> &references,
                            const DecodeConfig &base, std::vector<double> temps) {
  std::sort(temps.begin(), temps.end());
  std::vector<SweepRow> rows;
  for (double t : temps) {
    DecodeConfig cfg = base;
    cfg.temperature = t;
    const DecodedCorpus d = DecodeCorpus(scorer, vocab, sources, references, cfg);
    rows.push_back({t, d.latency.al, d.latency.ap, d.latency.cw, d.bleu.bleu});
  }
  return rows;
}

std::string SweepToCsv(const std::vector<SweepRow> &rows) {
  std::string out = "t,AL,AP,CW,BLEU\n";
  for (const SweepRow &r : rows)
    out += Fixed4(r.t) + "," + Fixed4(r.al) + "," + Fixed4(r.ap) + "," +
           Fixed4(r.cw) + "," + Fixed4(r.bleu) + "\n";
  return out;
}

std::vector<SweepRow> ParseSweepCsv(const std::string &text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line != "t,AL,AP,CW,BLEU")
    throw FormatError("sweep csv: expected header t,AL,AP,CW,BLEU");
  std::vector<SweepRow> rows;
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = SplitCommas(line);
    const std::string ctx = "sweep csv line " + std::to_string(lineno);
    if (f.size() != 5) throw FormatError(ctx + ": expected 5 fields");
    rows.push_back({ParseReal(f[0], ctx), ParseReal(f[1], ctx), ParseReal(f[2], ctx),
                    ParseReal(f[3], ctx), ParseReal(f[4], ctx)});
  }
  return rows;
}

std::vector<double> ParseRealList(const std::string &text) {
  std::vector<double> out;
  for (const std::string &f : SplitCommas(text)) out.push_back(ParseReal(f, "list"));
  if (out.empty()) throw FormatError("list: no values in '" + text + "'");
  return out;
}

}  // namespace simul
