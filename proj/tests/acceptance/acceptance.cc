// tests/acceptance/acceptance.cc

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

// Acceptance run: prints one "criterion N: PASS|FAIL  details" line per
// criterion, followed by diagnostics.  The checks below recompute every
// reference value on their own (band rules, lags, wait-k schedules, read
// counts) rather than trusting the library's helpers.
//
// Usage: acceptance [--only=N,M,...] [--expect-fail=N,...]
// The exit status is the number of failed criteria not listed in
// --expect-fail.  An expected failure still prints FAIL.

#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "common/model-fixtures.h"
#include "data/synthetic-corpus.h"
#include "decoder/simul-decoder.h"
#include "eval/bleu.h"
#include "eval/latency-metrics.h"
#include "eval/sweep.h"
#include "training/trainer.h"

using namespace simul;
using namespace simul::testing;

namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

std::string Fmt(const char *format, ...) __attribute__((format(printf, 1, 2)));
std::string Fmt(const char *format, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, format);
  std::vsnprintf(buf, sizeof(buf), format, ap);
  va_end(ap);
  return buf;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

// ---------------------------------------------------------------------------
// Reference band arithmetic, kept separate from the oracle module.

struct RefBand {
  int alpha, beta;
  int64_t num, den;  // gamma = num / den
};

// Sign of (s - gamma t - bound).
int RefCompare(const RefBand &b, int s, int t, int bound) {
  const __int128 v = static_cast<__int128>(s) * b.den -
                     static_cast<__int128>(b.num) * t -
                     static_cast<__int128>(bound) * b.den;
  return (v > 0) - (v < 0);
}

double RefLag(const RefBand &b, int s, int t) {
  return s - static_cast<double>(b.num) / b.den * t;
}

OracleConfig ToOracle(const RefBand &b) {
  OracleConfig c;
  c.alpha = b.alpha;
  c.beta = b.beta;
  c.gamma = LengthRatio::Exact(b.num, b.den);
  return c;
}

// Empty string if `path` is a band-respecting walk that writes exactly y.
std::string RefCheckWalk(const ActionSequence &path, const std::vector<int> &x,
                         const std::vector<int> &y, const RefBand &b) {
  const int n = static_cast<int>(x.size()), m = static_cast<int>(y.size());
  int s = 0, t = 0;
  for (size_t i = 0; i < path.size(); ++i) {
    if (t == m) return Fmt("step %zu: action after the target is complete", i);
    const bool must_read = s < n && RefCompare(b, s, t, b.alpha) <= 0;
    const bool must_write = s == n || RefCompare(b, s, t, b.beta) >= 0;
    if (path[i].IsDelay()) {
      if (must_write) return Fmt("step %zu: read where a write is forced", i);
      ++s;
    } else {
      if (must_read) return Fmt("step %zu: write where a read is forced", i);
      if (path[i].WordId() != y[t]) return Fmt("step %zu: wrong word", i);
      ++t;
    }
  }
  if (t != m) return "walk ends before the target is complete";
  return "";
}

double RefCumulativeLag(const ActionSequence &path, const RefBand &b) {
  double sum = 0;
  int s = 0, t = 0;
  for (const Action &a : path) {
    sum += RefLag(b, s, t);
    a.IsDelay() ? ++s : ++t;
  }
  return sum;
}

// Number of band-respecting walks from (s, t) to (n, m).
double RefCountWalks(const RefBand &b, int n, int m, int s, int t,
                     std::map<std::pair<int, int>, double> *memo) {
  if (t == m) return 1;
  const auto key = std::make_pair(s, t);
  if (auto it = memo->find(key); it != memo->end()) return it->second;
  const bool must_read = s < n && RefCompare(b, s, t, b.alpha) <= 0;
  const bool must_write = s == n || RefCompare(b, s, t, b.beta) >= 0;
  double total = 0;
  if (!must_write) total += RefCountWalks(b, n, m, s + 1, t, memo);
  if (!must_read) total += RefCountWalks(b, n, m, s, t + 1, memo);
  return (*memo)[key] = total;
}

// Wait-k schedule: read min(k, n), then write/read alternately, then the
// remaining writes; nothing after the last word.
ActionSequence RefWaitk(const std::vector<int> &x, const std::vector<int> &y,
                        int k) {
  const int n = static_cast<int>(x.size());
  ActionSequence out;
  int s = 0;
  for (; s < std::min(k, n); ++s) out.push_back(Action::Delay());
  for (size_t j = 0; j < y.size(); ++j) {
    out.push_back(Action::Word(y[j]));
    if (j + 1 < y.size() && s < n) {
      out.push_back(Action::Delay());
      ++s;
    }
  }
  return out;
}

// g(j) for each written word, eos excluded when `eos` >= 0.
std::vector<int> RefReadCounts(const ActionSequence &path, int eos = -1) {
  std::vector<int> g;
  int s = 0;
  for (const Action &a : path) {
    if (a.IsDelay())
      ++s;
    else if (a.WordId() != eos)
      g.push_back(s);
  }
  return g;
}

std::vector<int> RandomSentence(int n, int vocab_words, Rng *rng) {
  std::uniform_int_distribution<int> pick(2, vocab_words + 1);
  std::vector<int> out(n);
  for (int &w : out) w = pick(*rng);
  return out;
}

RefBand RandomBand(Rng *rng, int64_t num, int64_t den) {
  std::uniform_int_distribution<int> a(0, 2), w(1, 4);
  RefBand b;
  b.alpha = a(*rng);
  b.beta = b.alpha + w(*rng);
  b.num = num;
  b.den = den;
  return b;
}

// ---------------------------------------------------------------------------
// 1. Oracle completeness.

Outcome OracleCompleteness() {
  const auto t0 = Clock::now();
  Rng rng = MakeRng(101, "accept-oracle");
  std::uniform_int_distribution<int> len(1, 10), coin(0, 1);
  size_t pairs = 0, walks = 0;
  for (int i = 0; i < 500; ++i) {
    const std::vector<int> x = RandomSentence(len(rng), 20, &rng);
    const std::vector<int> y = RandomSentence(len(rng), 20, &rng);
    const bool measured = coin(rng);
    const RefBand b =
        RandomBand(&rng, measured ? x.size() : 1, measured ? y.size() : 1);
    const OraclePathSet set = EnumerateOraclePaths(x, y, ToOracle(b), 5000000);
    if (set.truncated) return {false, Fmt("pair %d: enumeration truncated", i)};
    std::map<std::pair<int, int>, double> memo;
    const double expect = RefCountWalks(b, x.size(), y.size(), 0, 0, &memo);
    if (static_cast<double>(set.paths.size()) != expect)
      return {false, Fmt("pair %d: %zu paths enumerated, %.0f walks exist", i,
                         set.paths.size(), expect)};
    std::set<ActionSequence> distinct(set.paths.begin(), set.paths.end());
    if (distinct.size() != set.paths.size())
      return {false, Fmt("pair %d: duplicate paths", i)};
    for (const ActionSequence &p : set.paths) {
      const std::string err = RefCheckWalk(p, x, y, b);
      if (!err.empty()) return {false, Fmt("pair %d: %s", i, err.c_str())};
    }
    ++pairs;
    walks += set.paths.size();
  }
  const double secs = Seconds(t0);
  return {secs < 60, Fmt("%zu pairs, %zu paths, all complete and in band, %.2f s",
                         pairs, walks, secs)};
}

// ---------------------------------------------------------------------------
// 2. Extremality.

Outcome Extremality() {
  Rng rng = MakeRng(102, "accept-extreme");
  std::uniform_int_distribution<int> len(1, 10), coin(0, 1);
  int checked = 0;
  for (int i = 0; i < 500; ++i) {
    const std::vector<int> x = RandomSentence(len(rng), 20, &rng);
    const std::vector<int> y = RandomSentence(len(rng), 20, &rng);
    const bool measured = coin(rng);
    const RefBand b =
        RandomBand(&rng, measured ? x.size() : 1, measured ? y.size() : 1);
    const OracleConfig cfg = ToOracle(b);
    const OraclePathSet set = EnumerateOraclePaths(x, y, cfg, 5000000);
    double lo = INFINITY, hi = -INFINITY;
    for (const auto &p : set.paths) {
      lo = std::min(lo, RefCumulativeLag(p, b));
      hi = std::max(hi, RefCumulativeLag(p, b));
    }
    const std::set<ActionSequence> members(set.paths.begin(), set.paths.end());
    const ActionSequence agg = ExtremePath(x, y, cfg, PathSide::kAggressive);
    const ActionSequence con = ExtremePath(x, y, cfg, PathSide::kConservative);
    if (!members.count(agg) || !members.count(con))
      return {false, Fmt("pair %d: extreme path not an oracle walk", i)};
    if (RefCumulativeLag(agg, b) != lo || RefCumulativeLag(con, b) != hi)
      return {false, Fmt("pair %d: lag %g/%g, extremes of set %g/%g", i,
                         RefCumulativeLag(agg, b), RefCumulativeLag(con, b), lo, hi)};
    ++checked;
  }
  int waitk = 0;
  for (int n = 1; n <= 12; ++n) {
    for (int alpha = 0; alpha <= 2; ++alpha) {
      for (int beta = alpha + 1; beta <= alpha + 4; ++beta) {
        const std::vector<int> x = RandomSentence(n, 20, &rng);
        const std::vector<int> y = RandomSentence(n, 20, &rng);
        const RefBand b{alpha, beta, 1, 1};
        const ActionSequence con =
            ExtremePath(x, y, ToOracle(b), PathSide::kConservative);
        if (con != WaitkPath(x, y, beta) || con != RefWaitk(x, y, beta))
          return {false, Fmt("n=%d band (%d,%d): conservative path is not wait-%d",
                             n, alpha, beta, beta)};
        ++waitk;
      }
    }
  }
  return {true, Fmt("%d random pairs attain the lag extremes; %d wait-k identities",
                    checked, waitk)};
}

// ---------------------------------------------------------------------------
// 3. Metric identities.

Outcome MetricIdentities() {
  Rng rng = MakeRng(103, "accept-metrics");
  int al_cases = 0;
  for (int k = 1; k <= 19; ++k) {
    for (int n = k + 1; n <= 20; ++n) {
      const std::vector<int> x = RandomSentence(n, 20, &rng);
      const std::vector<int> y = RandomSentence(n, 20, &rng);
      const std::vector<int> g = RefReadCounts(RefWaitk(x, y, k));
      const double al = AverageLagging(g, n).value;
      if (al != k) return {false, Fmt("AL(wait-%d, n=%d) = %.17g", k, n, al)};
      ++al_cases;
    }
  }
  for (int n = 1; n <= 20; ++n) {
    for (int m = 1; m <= 20; ++m) {
      const std::vector<int> full(m, n);
      if (AverageProportion(full, n) != 1.0)
        return {false, Fmt("AP(full, n=%d, m=%d) != 1", n, m)};
    }
    const std::vector<int> x = RandomSentence(n, 20, &rng);
    const CwResult cw = ConsecutiveWait(RefReadCounts(RefWaitk(x, x, 1)));
    if (!cw.defined || cw.value != 1.0)
      return {false, Fmt("CW(wait-1, n=%d) = %.17g", n, cw.value)};
  }
  std::vector<std::vector<int>> corpus;
  for (int i = 0; i < 50; ++i)
    corpus.push_back(RandomSentence(1 + i % 20, 20, &rng));
  const double bleu = CorpusBleu(corpus, corpus).bleu;
  if (Fmt("%.4f", bleu) != "100.0000") return {false, Fmt("BLEU = %.6f", bleu)};
  return {true, Fmt("AL exact on %d wait-k traces; AP(full)=1; CW(wait-1)=1; "
                    "BLEU=%.4f", al_cases, bleu)};
}

// ---------------------------------------------------------------------------
// 4. Gradients.

template <typename Real>
double WorstGradientError(int points, double *consistency) {
  const Vocab vocab = TinyVocab(6);
  const OracleImitationLoss loss(vocab.DelayId(), NegativeTerm::kNone);
  Rng rng = MakeRng(104, "accept-grad");
  std::uniform_int_distribution<int> len(1, 4);
  double worst = 0;
  *consistency = 0;
  for (int i = 0; i < points; ++i) {
    ScorerModel<Real> model(TinyConfig(8, 1, 40 + i), vocab);
    RandomizeParams(&model.params(), 500 + i);
    std::vector<int> x = RandomWords(vocab, len(rng), &rng);
    std::vector<int> y = RandomWords(vocab, len(rng), &rng);
    y.push_back(vocab.EosId());
    const RefBand b = RandomBand(&rng, 1, 1);
    const auto batch = BuildTrainingPaths(x, y, vocab, ToOracle(b), Policy::Adaptive());
    worst = std::max(worst, GradientCheck(model, std::span(batch), loss));
    // The batch objective is the two-path loss.
    const NeuralScorer<Real> scorer(model);
    const double direct = TwoPathLoss(scorer, vocab, x, y, ToOracle(b));
    const double batched = model.LossAndGradients(std::span(batch), loss, nullptr);
    *consistency = std::max(*consistency,
                            std::abs(direct - batched) / std::max(1.0, std::abs(direct)));
  }
  return worst;
}

Outcome Gradients() {
  const auto t0 = Clock::now();
  double c32 = 0, c64 = 0;
  const double e32 = WorstGradientError<float>(20, &c32);
  const double e64 = WorstGradientError<double>(20, &c64);
  const double secs = Seconds(t0);
  const bool pass = e32 < 1e-3 && e64 < 1e-6 && c32 < 1e-4 && c64 < 1e-9 && secs < 120;
  return {pass, Fmt("max rel err f32 %.2e, f64 %.2e (20 points each); "
                    "batch vs two-path loss %.1e/%.1e; %.1f s",
                    e32, e64, c32, c64, secs)};
}

// ---------------------------------------------------------------------------
// 5. Canonical-state invariance.

// A history with the given words, `delays` reads spread at random, and a
// final action of the requested kind.
ActionSequence RandomHistory(const std::vector<int> &words, int delays,
                             bool last_delay, Rng *rng) {
  ActionSequence h;
  int d = delays - (last_delay ? 1 : 0);
  std::vector<int> slots(words.size() + 1, 0);
  // Reads before the last word must leave the final action a word.
  const size_t free_slots = last_delay || words.empty() ? slots.size() : words.size();
  std::uniform_int_distribution<size_t> where(0, free_slots - 1);
  for (int i = 0; i < d; ++i) ++slots[where(*rng)];
  for (size_t j = 0; j <= words.size(); ++j) {
    for (int r = 0; r < slots[j]; ++r) h.push_back(Action::Delay());
    if (j < words.size()) h.push_back(Action::Word(words[j]));
  }
  if (last_delay) h.push_back(Action::Delay());
  return h;
}

double MaxScoreDiff(const ScoreVector &a, const ScoreVector &b) {
  double d = 0;
  for (size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a.scores[i] - b.scores[i]));
  return d;
}

Outcome CanonicalInvariance() {
  const Vocab vocab = TinyVocab(6);
  Rng rng = MakeRng(105, "accept-canon");
  std::uniform_int_distribution<int> nwords(0, 4), ndelay(1, 8), coin(0, 1);
  ModelConfig cfg = TinyConfig(16, 2, 7);
  cfg.max_delay_count = 4;
  ScorerModel<double> model(cfg, vocab);
  RandomizeParams(&model.params(), 77);
  ModelConfig keep_cfg = cfg;
  keep_cfg.keep_delay_in_attention = true;
  ScorerModel<double> keep(keep_cfg, vocab);
  keep.params() = model.params();

  double worst = 0, witness = 0;
  int clamped = 0;
  for (int i = 0; i < 200; ++i) {
    const std::vector<int> words = RandomWords(vocab, nwords(rng), &rng);
    const bool last_delay = words.empty() || coin(rng);
    int da = ndelay(rng), db = da;
    // Some pairs differ in raw count but agree once clamped.
    if (i % 4 == 3) {
      da = cfg.max_delay_count + ndelay(rng) % 3;
      db = cfg.max_delay_count + ndelay(rng) % 3;
      ++clamped;
    }
    const ActionSequence ha = RandomHistory(words, da, last_delay, &rng);
    const ActionSequence hb = RandomHistory(words, db, last_delay, &rng);
    const std::vector<int> src = RandomWords(vocab, 1 + ndelay(rng) % 6, &rng);
    const Matrix<double> mem = model.Encode(src);
    worst = std::max(worst, MaxScoreDiff(model.ScoreActions(mem, ha),
                                         model.ScoreActions(mem, hb)));
    witness = std::max(witness, MaxScoreDiff(keep.ScoreActions(mem, ha),
                                             keep.ScoreActions(mem, hb)));
  }
  return {worst <= 1e-6 && witness > 1e-3,
          Fmt("200 pairs (%d clamped): max diff %.2e; keep_delay_in_attention "
              "witness %.2e", clamped, worst, witness)};
}

// ---------------------------------------------------------------------------
// 6. Band soundness of adaptive decoding.

std::string RefCheckDecode(const DecodeTrace &tr, int n, const RefBand &b,
                           const Vocab &vocab, size_t *free_choices) {
  int s = 0, t = 0;
  for (size_t i = 0; i < tr.actions.size(); ++i) {
    const Action &a = tr.actions[i];
    if (i == 0 && !a.IsDelay()) return "first action is not a read";
    const bool must_read = s < n && RefCompare(b, s, t, b.alpha) <= 0;
    const bool must_write = s == n || RefCompare(b, s, t, b.beta) >= 0;
    if (i > 0 && !must_read && !must_write) ++*free_choices;
    if (a.IsDelay()) {
      if (must_write) return Fmt("step %zu: read where a write is forced", i);
      ++s;
    } else {
      if (must_read) return Fmt("step %zu: write where a read is forced", i);
      ++t;
      if (a.WordId() == vocab.EosId() && i + 1 != tr.actions.size())
        return "actions after eos";
    }
  }
  if (!tr.finished && !tr.truncated) return "stopped without eos or truncation";
  if (RefReadCounts(tr.actions, vocab.EosId()) != tr.g) return "g disagrees with actions";
  return "";
}

Outcome DecodeBandSoundness() {
  const Vocab vocab = TinyVocab(6);
  Rng rng = MakeRng(106, "accept-decode");
  std::uniform_int_distribution<int> len(1, 10), gam(0, 2);
  std::uniform_real_distribution<double> temp(-3, 3);
  size_t free_choices = 0, reads = 0, words = 0;
  for (int model_i = 0; model_i < 20; ++model_i) {
    ScorerModel<float> model(TinyConfig(8, 1, 900 + model_i), vocab);
    RandomizeParams(&model.params(), 1900 + model_i, 1.0);
    const NeuralScorer<float> scorer(model);
    for (int i = 0; i < 50; ++i) {
      const int64_t nums[] = {1, 5, 4}, dens[] = {1, 4, 5};
      const int g = gam(rng);
      const RefBand b = RandomBand(&rng, nums[g], dens[g]);
      DecodeConfig cfg;
      cfg.band = ToOracle(b);
      cfg.temperature = temp(rng);
      cfg.max_target_len = 30;
      const std::vector<int> x = RandomWords(vocab, len(rng), &rng);
      const DecodeTrace tr = AdaptiveDecode(scorer, vocab, x, cfg);
      const std::string err = RefCheckDecode(tr, x.size(), b, vocab, &free_choices);
      if (!err.empty())
        return {false, Fmt("model %d decode %d: %s", model_i, i, err.c_str())};
      const size_t d = CountDelays(tr.actions);
      reads += d;
      words += tr.actions.size() - d;
    }
  }
  return {true, Fmt("1000 decodes, 0 violations (%zu reads, %zu writes, %zu "
                    "unforced choices)", reads, words, free_choices)};
}

// ---------------------------------------------------------------------------
// Training helpers for the task criteria.

struct TaskSetup {
  ModelConfig model;
  TrainConfig train;
};

// Sigmoid scorer, one layer of width 32, every non-oracle action penalised.
TaskSetup DefaultSetup(int alpha, int beta, int steps, uint64_t seed) {
  TaskSetup s;
  s.model.d_model = 32;
  s.model.n_layers = 1;
  s.model.n_heads = 2;
  s.model.ffn_width = 64;
  s.model.seed = seed;
  s.train.oracle.alpha = alpha;
  s.train.oracle.beta = beta;
  s.train.learning_rate = 3e-3;
  s.train.batch_size = 16;
  s.train.max_steps = steps;
  s.train.negative_term = NegativeTerm::kAll;
  s.train.seed = seed;
  return s;
}

struct Trained {
  std::unique_ptr<ScorerModel<float>> model;
  double seconds = 0;
  double final_loss = 0;
};

Trained Train(const ParallelCorpus &corpus, TaskSetup setup) {
  setup.train.oracle.gamma = MeasuredGamma(corpus.train);
  std::vector<TrainingPair> data;
  for (const auto &p : corpus.train) data.push_back({p.source, p.target});
  Trained out;
  out.model = std::make_unique<ScorerModel<float>>(setup.model, corpus.vocab);
  Trainer<float> trainer(out.model.get(), setup.train, data);
  const auto t0 = Clock::now();
  for (int i = 0; i < setup.train.max_steps; ++i) out.final_loss = trainer.Step().loss;
  out.seconds = Seconds(t0);
  return out;
}

struct HeldOut {
  std::vector<std::vector<int>> sources, references;
};

HeldOut TestSet(const ParallelCorpus &corpus) {
  HeldOut h;
  for (const auto &p : corpus.test) {
    h.sources.push_back(p.source);
    h.references.emplace_back(p.target.begin(), p.target.end() - 1);
  }
  return h;
}

DecodedCorpus Evaluate(const ScorerModel<float> &model, const ParallelCorpus &corpus,
                       const HeldOut &data, int alpha, int beta, Policy mode,
                       double t = 0) {
  DecodeConfig cfg;
  cfg.band.alpha = alpha;
  cfg.band.beta = beta;
  cfg.band.gamma = MeasuredGamma(corpus.train);
  cfg.mode = mode;
  cfg.temperature = t;
  cfg.max_target_len = 64;
  return DecodeCorpus(NeuralScorer<float>(model), corpus.vocab, data.sources,
                      data.references, cfg);
}

std::vector<std::vector<int>> Hypotheses(const DecodedCorpus &d) {
  std::vector<std::vector<int>> h;
  for (const auto &tr : d.traces) h.push_back(tr.words);
  return h;
}

CorpusSpec CopySpec() {
  CorpusSpec spec;
  spec.task = CorpusSpec::kCopy;
  spec.vocab_size = 20;
  spec.min_len = 5;
  spec.max_len = 15;
  spec.train = 2000;
  spec.dev = 200;
  spec.test = 200;
  spec.seed = 1;
  return spec;
}

constexpr int kCopySteps = 2000;

// The copy model is shared by criteria 7 and 9.
struct CopyRun {
  ParallelCorpus corpus;
  HeldOut test;
  Trained trained;
};

const CopyRun &CopyModel() {
  static const CopyRun run = [] {
    CopyRun r;
    r.corpus = GenerateCorpus(CopySpec());
    r.test = TestSet(r.corpus);
    r.trained = Train(r.corpus, DefaultSetup(1, 5, kCopySteps, 1));
    return r;
  }();
  return run;
}

// ---------------------------------------------------------------------------
// 7. Copy task.

Outcome CopyTask() {
  const CopyRun &run = CopyModel();
  const DecodedCorpus d =
      Evaluate(*run.trained.model, run.corpus, run.test, 1, 5, Policy::Adaptive());
  const bool pass = d.token_accuracy >= 0.95 && d.latency.al <= 3.5 &&
                    run.trained.seconds <= 600;
  return {pass, Fmt("%d steps in %.1f s: token accuracy %.4f, AL %.3f, BLEU %.2f "
                    "(t=0, %zu held-out pairs)", kCopySteps, run.trained.seconds,
                    d.token_accuracy, d.latency.al, d.bleu.bleu, run.test.sources.size())};
}

// ---------------------------------------------------------------------------
// 8. Reorder task.

Outcome ReorderTask(std::vector<std::string> *notes) {
  constexpr int kSteps = 2000;
  int passed = 0;
  std::string per_seed;
  for (uint64_t seed = 1; seed <= 3; ++seed) {
    CorpusSpec spec;
    spec.task = CorpusSpec::kReorder;
    spec.min_len = 4;
    spec.max_len = 8;
    spec.seed = seed;
    const ParallelCorpus corpus = GenerateCorpus(spec);
    const HeldOut test = TestSet(corpus);

    TaskSetup adaptive = DefaultSetup(1, 7, kSteps, seed);
    TaskSetup wait1 = adaptive, wait7 = adaptive;
    wait1.train.mode = Policy::Waitk(1);
    wait7.train.mode = Policy::Waitk(7);
    const Trained ma = Train(corpus, adaptive);
    const Trained m1 = Train(corpus, wait1);
    const Trained m7 = Train(corpus, wait7);
    const DecodedCorpus da = Evaluate(*ma.model, corpus, test, 1, 7, Policy::Adaptive());
    const DecodedCorpus d1 = Evaluate(*m1.model, corpus, test, 1, 7, Policy::Waitk(1));
    const DecodedCorpus d7 = Evaluate(*m7.model, corpus, test, 1, 7, Policy::Waitk(7));
    const double pa = PositionAccuracy(Hypotheses(da), test.references, 1);
    const double p1 = PositionAccuracy(Hypotheses(d1), test.references, 1);
    const double p7 = PositionAccuracy(Hypotheses(d7), test.references, 1);
    const bool ok = pa - p1 >= 0.2 && da.latency.al <= d7.latency.al - 1.0;
    passed += ok;
    per_seed += Fmt("%sseed %d %s: payload acc adaptive %.3f / wait-1 %.3f / "
                    "wait-7 %.3f, AL %.2f / %.2f / %.2f",
                    per_seed.empty() ? "" : "; ", static_cast<int>(seed),
                    ok ? "ok" : "miss", pa, p1, p7, da.latency.al,
                    d1.latency.al, d7.latency.al);

    // Where the adaptive model sits on its own temperature curve.
    std::string curve;
    for (double t : {-2.0, -1.0, -0.5, 0.0, 4.5}) {
      const DecodedCorpus dt = Evaluate(*ma.model, corpus, test, 1, 7, Policy::Adaptive(), t);
      curve += Fmt(" t=%g:AL %.2f/payload %.3f", t, dt.latency.al,
                   PositionAccuracy(Hypotheses(dt), test.references, 1));
    }
    notes->push_back(Fmt("reorder seed %d adaptive temperature curve:%s",
                         static_cast<int>(seed), curve.c_str()));
  }
  return {passed >= 2, Fmt("%d/3 seeds pass (%s)", passed, per_seed.c_str())};
}

// ---------------------------------------------------------------------------
// 9. Temperature control.

Outcome TemperatureControl() {
  // Per-state monotonicity over random models and random reachable states.
  const Vocab vocab = TinyVocab(6);
  Rng rng = MakeRng(109, "accept-temp");
  std::uniform_int_distribution<int> len(1, 8), coin(0, 1);
  std::vector<double> grid;
  for (double t = -12; t <= 12; t += 0.125) grid.push_back(t);
  int states = 0, switching = 0;
  for (int model_i = 0; model_i < 10 && states < 1000; ++model_i) {
    ModelConfig cfg = TinyConfig(8, 1, 300 + model_i);
    if (model_i % 2) cfg.scoring = ScoringMode::kSoftmax;
    ScorerModel<double> model(cfg, vocab);
    RandomizeParams(&model.params(), 1300 + model_i, 1.5);
    const NeuralScorer<double> scorer(model);
    for (int i = 0; i < 100; ++i, ++states) {
      const std::vector<int> x = RandomWords(vocab, len(rng), &rng);
      ActionSequence hist = {Action::Delay()};
      int s = 1;
      for (int step = len(rng); step > 0; --step) {
        if (s < static_cast<int>(x.size()) && coin(rng)) {
          hist.push_back(Action::Delay());
          ++s;
        } else {
          hist.push_back(Action::Word(RandomWords(vocab, 1, &rng)[0]));
        }
      }
      const ScoreVector sv = scorer.Score(std::span(x).first(s), hist);
      bool seen_delay = false, changed = false;
      for (double t : grid) {
        const bool d = PrefersDelay(sv, vocab, t);
        if (seen_delay && !d)
          return {false, Fmt("state %d: Delay at a lower t but not at t=%g", states, t)};
        changed |= d != seen_delay && t != grid.front();
        seen_delay |= d;
      }
      switching += changed;
    }
  }

  // Corpus AL over the sweep grid, on the trained copy model.
  const CopyRun &run = CopyModel();
  DecodeConfig base;
  base.band.alpha = 1;
  base.band.beta = 5;
  base.band.gamma = MeasuredGamma(run.corpus.train);
  base.max_target_len = 64;
  const std::vector<SweepRow> rows =
      Sweep(NeuralScorer<float>(*run.trained.model), run.corpus.vocab,
            run.test.sources, run.test.references, base, {-2, -0.5, 0, 4.5, 9});
  int violations = 0;
  double worst_drop = 0;
  std::string als;
  for (size_t i = 0; i < rows.size(); ++i) {
    als += Fmt("%s%.3f", i ? " " : "", rows[i].al);
    if (i && rows[i].al < rows[i - 1].al) {
      ++violations;
      worst_drop = std::max(worst_drop, rows[i - 1].al - rows[i].al);
    }
  }
  const bool pass = violations <= 1 && worst_drop <= 0.2;
  return {pass, Fmt("%d states monotone (%d switch inside the grid); sweep AL at "
                    "t=-2,-0.5,0,4.5,9: %s (%d decreases)",
                    states, switching, als.c_str(), violations)};
}

// ---------------------------------------------------------------------------
// 10. Ablations.

Outcome Ablations(std::vector<std::string> *notes) {
  constexpr int kSteps = 800;
  const ParallelCorpus corpus = GenerateCorpus(CopySpec());
  const HeldOut test = TestSet(corpus);
  struct Variant {
    const char *name;
    std::function<void(ModelConfig *)> apply;
  };
  const std::vector<Variant> variants = {
      {"default", [](ModelConfig *) {}},
      {"keep_delay_in_attention", [](ModelConfig *c) { c->keep_delay_in_attention = true; }},
      {"no_count_embedding", [](ModelConfig *c) { c->use_count_embedding = false; }},
      {"softmax", [](ModelConfig *c) { c->scoring = ScoringMode::kSoftmax; }},
  };
  notes->push_back(Fmt("ablations (copy, %d steps): variant,loss,acc,AL,AP,CW,BLEU,seconds",
                       kSteps));
  int rows = 0;
  for (const Variant &v : variants) {
    TaskSetup setup = DefaultSetup(1, 5, kSteps, 1);
    v.apply(&setup.model);
    const Trained t = Train(corpus, setup);
    const DecodedCorpus d = Evaluate(*t.model, corpus, test, 1, 5, Policy::Adaptive());
    if (!std::isfinite(t.final_loss)) continue;
    notes->push_back(Fmt("  %s,%.4f,%.4f,%.3f,%.3f,%.3f,%.2f,%.1f", v.name,
                         t.final_loss, d.token_accuracy, d.latency.al,
                         d.latency.ap, d.latency.cw, d.bleu.bleu, t.seconds));
    ++rows;
  }
  return {rows == 4, Fmt("%d/4 variants trained and evaluated (rows below)", rows)};
}

std::set<int> ParseList(const char *text) {
  std::set<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.insert(std::stoi(item));
  return out;
}

}  // namespace

int main(int argc, char **argv) {
  std::set<int> only, expect_fail;
  for (int i = 1; i < argc; ++i) {
    if (std::strncmp(argv[i], "--only=", 7) == 0) {
      only = ParseList(argv[i] + 7);
    } else if (std::strncmp(argv[i], "--expect-fail=", 14) == 0) {
      expect_fail = ParseList(argv[i] + 14);
    } else {
      std::cerr << "usage: acceptance [--only=N,...] [--expect-fail=N,...]\n";
      return 2;
    }
  }
  std::vector<std::string> notes;
  const std::vector<std::pair<int, std::function<Outcome()>>> criteria = {
      {1, OracleCompleteness},
      {2, Extremality},
      {3, MetricIdentities},
      {4, Gradients},
      {5, CanonicalInvariance},
      {6, DecodeBandSoundness},
      {7, CopyTask},
      {8, [&] { return ReorderTask(&notes); }},
      {9, TemperatureControl},
      {10, [&] { return Ablations(&notes); }},
  };
  int unexpected = 0;
  for (const auto &[id, run] : criteria) {
    if (!only.empty() && !only.count(id)) continue;
    Outcome o;
    try {
      o = run();
    } catch (const std::exception &e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const bool expected = expect_fail.count(id) > 0;
    if (!o.pass && !expected) ++unexpected;
    std::cout << "criterion " << id << ": " << (o.pass ? "PASS" : "FAIL") << "  "
              << o.detail << (!o.pass && expected ? "  [known failure]" : "")
              << std::endl;
  }
  for (const std::string &n : notes) std::cout << n << "\n";
  return unexpected;
}
