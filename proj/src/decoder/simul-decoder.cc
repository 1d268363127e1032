// decoder/simul-decoder.cc

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

#include "decoder/simul-decoder.h"

#include <cmath>

#include "base/simul-error.h"

namespace simul {

namespace {

// Best non-delay token; lowest id on ties.
int BestWord(const ScoreVector &scores, const Vocab &vocab) {
  int best = -1;
  for (int j = 0; j < static_cast<int>(scores.size()); ++j) {
    if (j == vocab.DelayId()) continue;
    if (best < 0 || scores.log_scores[j] > scores.log_scores[best]) best = j;
  }
  return best;
}

class TraceBuilder {
 public:
  TraceBuilder(const Vocab &vocab, int source_len) : vocab_(vocab) {
    trace_.source_len = source_len;
  }
  void Read() {
    trace_.actions.push_back(Action::Delay());
    ++src_;
  }
  void Write(int id) {
    trace_.actions.push_back(Action::Word(id));
    ++tgt_;
    if (id == vocab_.EosId()) {
      trace_.finished = true;
    } else {
      trace_.words.push_back(id);
      trace_.g.push_back(src_);
    }
  }
  int src() const { return src_; }
  int tgt() const { return tgt_; }
  const ActionSequence &actions() const { return trace_.actions; }
  DecodeTrace Finish(int max_target_len) {
    trace_.truncated = !trace_.finished && tgt_ >= max_target_len;
    return std::move(trace_);
  }

 private:
  const Vocab &vocab_;
  DecodeTrace trace_;
  int src_ = 0, tgt_ = 0;
};

}  // namespace

void DecodeConfig::Check() const {
  ConfigChecker c;
  try {
    band.Check();
  } catch (const ConfigError &e) {
    for (const auto &v : e.violations()) c.Require(false, v);
  }
  c.Require(max_target_len >= 1, "decode.max_target_len must be >= 1");
  c.Require(std::isfinite(temperature), "decode.temperature must be finite");
  c.Require(mode.kind != Policy::kWaitk || mode.k >= 1, "decode.mode: k must be >= 1");
  c.Throw();
}

nlohmann::json DecodeConfig::ToJson() const {
  return {{"band", band.ToJson()},
          {"temperature", temperature},
          {"max_target_len", max_target_len},
          {"mode", mode.ToString()}};
}

DecodeConfig DecodeConfig::FromJson(const nlohmann::json &j) {
  DecodeConfig c;
  if (j.contains("band")) c.band = OracleConfig::FromJson(j.at("band"));
  c.temperature = j.value("temperature", c.temperature);
  c.max_target_len = j.value("max_target_len", c.max_target_len);
  if (j.contains("mode")) c.mode = Policy::Parse(j.at("mode").get<std::string>());
  return c;
}

bool PrefersDelay(const ScoreVector &scores, const Vocab &vocab, double t) {
  const int d = vocab.DelayId();
  const double adjusted = scores.log_scores[d] + t;
  for (int j = 0; j < static_cast<int>(scores.size()); ++j) {
    if (j == d) continue;
    const double s = scores.log_scores[j];
    // Lower ids win ties.
    if (s > adjusted || (s == adjusted && j < d)) return false;
  }
  return true;
}

DecodeTrace AdaptiveDecode(const ActionScorer &scorer, const Vocab &vocab,
                           std::span<const int> source, const DecodeConfig &cfg) {
  if (source.empty()) throw SimulError("decode", "empty source sentence");
  const int n = static_cast<int>(source.size());
  TraceBuilder tb(vocab, n);
  tb.Read();
  while (tb.tgt() < cfg.max_target_len) {
    const bool src_left = tb.src() < n;
    if (src_left && LagAtMost(tb.src(), tb.tgt(), cfg.band, cfg.band.alpha)) {
      tb.Read();
      continue;
    }
    const ScoreVector scores = scorer.Score(source.first(tb.src()), tb.actions());
    const bool force_word =
        !src_left || LagAtLeast(tb.src(), tb.tgt(), cfg.band, cfg.band.beta);
    if (!force_word && PrefersDelay(scores, vocab, cfg.temperature)) {
      tb.Read();
      continue;
    }
    const int w = BestWord(scores, vocab);
    tb.Write(w);
    if (w == vocab.EosId()) break;
  }
  return tb.Finish(cfg.max_target_len);
}

DecodeTrace WaitkDecode(const ActionScorer &scorer, const Vocab &vocab,
                        std::span<const int> source, int k, int max_target_len) {
  if (source.empty()) throw SimulError("decode", "empty source sentence");
  if (k < 1) throw ConfigError({"wait-k: k must be >= 1"});
  const int n = static_cast<int>(source.size());
  TraceBuilder tb(vocab, n);
  while (tb.src() < std::min(k, n)) tb.Read();
  while (tb.tgt() < max_target_len) {
    if (tb.tgt() > 0 && tb.src() < n) tb.Read();
    const int w = BestWord(scorer.Score(source.first(tb.src()), tb.actions()), vocab);
    tb.Write(w);
    if (w == vocab.EosId()) break;
  }
  return tb.Finish(max_target_len);
}

DecodeTrace FullSentenceDecode(const ActionScorer &scorer, const Vocab &vocab,
                               std::span<const int> source, int max_target_len) {
  return WaitkDecode(scorer, vocab, source,
                     std::max<int>(1, static_cast<int>(source.size())),
                     max_target_len);
}

DecodeTrace Decode(const ActionScorer &scorer, const Vocab &vocab,
                   std::span<const int> source, const DecodeConfig &cfg) {
  switch (cfg.mode.kind) {
    case Policy::kWaitk:
      return WaitkDecode(scorer, vocab, source, cfg.mode.k, cfg.max_target_len);
    case Policy::kFullSentence:
      return FullSentenceDecode(scorer, vocab, source, cfg.max_target_len);
    default:
      return AdaptiveDecode(scorer, vocab, source, cfg);
  }
}

std::string FormatTraceLine(const DecodeTrace &trace, const Vocab &vocab) {
  std::string out = vocab.Decode(trace.words);
  out += '\t';
  for (size_t j = 0; j < trace.g.size(); ++j) {
    if (j) out += ',';
    out += std::to_string(trace.g[j]);
  }
  out += '\t';
  out += ActionsToString(trace.actions, vocab);
  return out;
}

}  // namespace simul
