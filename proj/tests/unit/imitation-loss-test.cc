// tests/unit/imitation-loss-test.cc

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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <functional>

#include "base/random.h"
#include "base/simul-error.h"
#include "common/model-fixtures.h"
#include "training/imitation-loss.h"

using namespace simul;
using namespace simul::testing;

namespace {

// Scores chosen by a callback of (state, token id).
class FunctionScorer : public ActionScorer {
 public:
  using Fn = std::function<double(const PrefixState &, int)>;
  FunctionScorer(const Vocab &v, Fn fn) : vocab_(v), fn_(std::move(fn)) {}
  ScoreVector Score(std::span<const int> source_prefix,
                    const ActionSequence &history) const override {
    TransitionSystem ts(vocab_);
    // The source prefix length is all the replay needs.
    const PrefixState s = ts.Replay(history, source_prefix.size() + 64);
    ScoreVector sv;
    for (int id = 0; id < vocab_.Size(); ++id) {
      const double p = fn_(s, id);
      sv.scores.push_back(p);
      sv.log_scores.push_back(std::log(p));
    }
    return sv;
  }

 private:
  const Vocab &vocab_;
  Fn fn_;
};

OracleConfig Band(int alpha, int beta) {
  OracleConfig c;
  c.alpha = alpha;
  c.beta = beta;
  return c;
}

std::vector<int> Words(const Vocab &v, std::initializer_list<const char *> w) {
  std::vector<int> out;
  for (const char *s : w) out.push_back(v.Id(s));
  return out;
}

}  // namespace

TEST_CASE("step probability averages the oracle set") {
  Vocab v = TinyVocab();
  const auto x = Words(v, {"w0", "w1", "w2"});
  auto y = x;
  y.push_back(v.EosId());
  FunctionScorer half(v, [](const PrefixState &, int) { return 0.5; });
  // Empty state: lag 0 forces a read.
  CHECK(OracleStepProbability(half, v, {}, x, y, Band(1, 3)) == 0.5);

  FunctionScorer two(v, [&](const PrefixState &, int id) {
    return id == v.DelayId() ? 0.2 : 0.6;
  });
  const ActionSequence one_read = {Action::Delay()};
  REQUIRE(OracleActions(PrefixState{1, {}, 1, Action::Delay()}, x, y, Band(0, 3))
              .size() == 2);
  CHECK(OracleStepProbability(two, v, one_read, x, y, Band(0, 3)) ==
        doctest::Approx(0.4).epsilon(1e-15));
}

TEST_CASE("exhausted source averages over the single word") {
  Vocab v = TinyVocab();
  const auto x = Words(v, {"w0"});
  const std::vector<int> y = {v.Id("w0"), v.Id("w1"), v.EosId()};
  FunctionScorer two(v, [&](const PrefixState &, int id) {
    return id == v.DelayId() ? 0.2 : 0.6;
  });
  const OracleConfig cfg = Band(0, 5);
  // Every enumerated path continues from (1, 0) with a word only.
  for (const auto &p : EnumerateOraclePaths(x, y, cfg, 100).paths) {
    REQUIRE(p.size() >= 2);
    CHECK(p[1].IsWord());
  }
  CHECK(OracleStepProbability(two, v, {Action::Delay()}, x, y, cfg) == 0.6);
}

TEST_CASE("path loss examples") {
  Vocab v = TinyVocab();
  const auto x = Words(v, {"w0", "w1"});
  const std::vector<int> y = {v.Id("w0"), v.Id("w1"), v.Id("w2"), v.EosId()};
  const OracleConfig cfg = Band(1, 3);
  const ActionSequence a = ExtremePath(x, y, cfg, PathSide::kAggressive);
  REQUIRE(a.size() == 6);
  FunctionScorer half(v, [](const PrefixState &, int) { return 0.5; });
  CHECK(PathLoss(half, v, a, x, y, cfg) == doctest::Approx(6 * std::log(2.0)));

  // Scores 1 exactly on the oracle actions.
  FunctionScorer perfect(v, [&](const PrefixState &s, int id) {
    for (const Action &o : OracleActions(s, x, y, cfg))
      if (o.TokenId(v) == id) return 1.0;
    return 1e-3;
  });
  for (PathSide side : {PathSide::kAggressive, PathSide::kConservative})
    CHECK(PathLoss(perfect, v, ExtremePath(x, y, cfg, side), x, y, cfg) == 0.0);
  CHECK(TwoPathLoss(perfect, v, x, y, cfg) == 0.0);

  // Two steps by hand: forced read scored 0.8, then mean(0.5, 0.3).
  const auto x3 = Words(v, {"w0", "w1", "w2"});
  std::vector<int> y3 = x3;
  y3.push_back(v.EosId());
  FunctionScorer hand(v, [&](const PrefixState &s, int id) {
    if (s.src_len == 0) return id == v.DelayId() ? 0.8 : 0.1;
    if (id == v.DelayId()) return 0.5;
    return id == v.Id("w0") ? 0.3 : 0.1;
  });
  const ActionSequence two = {Action::Delay(), Action::Delay()};
  CHECK(PathLoss(hand, v, two, x3, y3, Band(0, 3)) ==
        doctest::Approx(-(std::log(0.8) + std::log(0.4))).epsilon(1e-14));
}

TEST_CASE("two-path loss") {
  Vocab v = TinyVocab();
  FunctionScorer half(v, [](const PrefixState &, int) { return 0.5; });
  const OracleConfig cfg = Band(1, 3);

  // One source word: both extreme paths coincide.
  const std::vector<int> x1 = {v.Id("w3")};
  const std::vector<int> y1 = {v.Id("w3"), v.EosId()};
  const ActionSequence agg = ExtremePath(x1, y1, cfg, PathSide::kAggressive);
  REQUIRE(agg == ExtremePath(x1, y1, cfg, PathSide::kConservative));
  Rng rng = MakeRng(3, "two-path");
  ScorerModel<double> m(TinyConfig(8, 1), v);
  RandomizeParams(&m.params(), 5);
  NeuralScorer<double> scorer(m);
  CHECK(TwoPathLoss(scorer, v, x1, y1, cfg) ==
        doctest::Approx(PathLoss(scorer, v, agg, x1, y1, cfg)).epsilon(1e-14));

  // Equal per-step probabilities: equal to either path's loss.
  const auto x = Words(v, {"w0", "w1", "w2"});
  auto y = x;
  y.push_back(v.EosId());
  const double l = PathLoss(half, v, ExtremePath(x, y, cfg, PathSide::kAggressive),
                            x, y, cfg);
  CHECK(TwoPathLoss(half, v, x, y, cfg) == doctest::Approx(l));

  // Random model: average recomposed step by step.
  for (int trial = 0; trial < 5; ++trial) {
    const auto xs = RandomWords(v, 3, &rng);
    auto ys = RandomWords(v, 3, &rng);
    ys.push_back(v.EosId());
    double sum = 0.0;
    for (PathSide side : {PathSide::kAggressive, PathSide::kConservative}) {
      const ActionSequence p = ExtremePath(xs, ys, cfg, side);
      ActionSequence prefix;
      for (const Action &a : p) {
        sum -= std::log(OracleStepProbability(scorer, v, prefix, xs, ys, cfg));
        prefix.push_back(a);
      }
    }
    CHECK(TwoPathLoss(scorer, v, xs, ys, cfg) ==
          doctest::Approx(sum / 2).epsilon(1e-12));
  }
}

TEST_CASE("step loss values, gradients and floor") {
  const int delay = 0;
  const std::vector<double> logits = {0.3, -1.2, 2.0, 0.5, -0.1};
  std::vector<double> p(logits.size());
  for (size_t j = 0; j < p.size(); ++j) p[j] = 1 / (1 + std::exp(-logits[j]));
  const std::vector<int> targets = {0, 3};
  std::vector<double> d(logits.size());

  OracleImitationLoss plain(delay, NegativeTerm::kNone);
  const double base = -std::log((p[0] + p[3]) / 2);
  CHECK(plain.Compute(logits, targets, ScoringMode::kSigmoid, d) ==
        doctest::Approx(base).epsilon(1e-14));
  // Both labels of a two-action step receive gradient.
  CHECK(d[0] < 0);
  CHECK(d[3] < 0);
  CHECK(d[1] == 0);

  // Competitor: highest non-target word is id 2.
  OracleImitationLoss comp(delay, NegativeTerm::kCompetitor);
  CHECK(comp.Compute(logits, targets, ScoringMode::kSigmoid, {}) ==
        doctest::Approx(base - std::log(1 - p[2])).epsilon(1e-14));
  const std::vector<int> word_only = {3};
  CHECK(comp.Compute(logits, word_only, ScoringMode::kSigmoid, {}) ==
        doctest::Approx(-std::log(p[3]) - std::log(1 - p[0]) - std::log(1 - p[2]))
            .epsilon(1e-14));

  OracleImitationLoss all(delay, NegativeTerm::kAll);
  CHECK(all.Compute(logits, targets, ScoringMode::kSigmoid, {}) ==
        doctest::Approx(base - std::log(1 - p[1]) - std::log(1 - p[2]) -
                        std::log(1 - p[4]))
            .epsilon(1e-14));

  // Finite differences on the raw step loss.
  for (const OracleImitationLoss *loss : {&plain, &comp, &all}) {
    for (ScoringMode mode : {ScoringMode::kSigmoid, ScoringMode::kSoftmax}) {
      loss->Compute(logits, targets, mode, d);
      for (size_t j = 0; j < logits.size(); ++j) {
        auto l = logits;
        const double h = 1e-6;
        l[j] += h;
        const double up = loss->Compute(l, targets, mode, {});
        l[j] -= 2 * h;
        const double down = loss->Compute(l, targets, mode, {});
        CHECK(d[j] == doctest::Approx((up - down) / (2 * h)).epsilon(1e-6));
      }
    }
  }

  const std::vector<double> hopeless = {100.0, -100.0, 100.0};
  const std::vector<int> t1 = {1};
  plain.ResetFloorHits();
  CHECK(plain.Compute(hopeless, t1, ScoringMode::kSoftmax, {}) ==
        doctest::Approx(-std::log(kProbabilityFloor)));
  CHECK(plain.floor_hits() == 1);
  CHECK_THROWS_AS(plain.Compute(logits, {}, ScoringMode::kSigmoid, {}), SimulError);
}

TEST_CASE("negative term names") {
  CHECK(ParseNegativeTerm("none") == NegativeTerm::kNone);
  CHECK(ParseNegativeTerm("false") == NegativeTerm::kNone);
  CHECK(ParseNegativeTerm("true") == NegativeTerm::kCompetitor);
  CHECK(ParseNegativeTerm("all") == NegativeTerm::kAll);
  CHECK_THROWS_AS(ParseNegativeTerm("some"), ConfigError);
  for (NegativeTerm n : {NegativeTerm::kNone, NegativeTerm::kCompetitor, NegativeTerm::kAll})
    CHECK(ParseNegativeTerm(NegativeTermName(n)) == n);
}

TEST_CASE("training paths per policy") {
  Vocab v = TinyVocab();
  Rng rng = MakeRng(9, "paths");
  const OracleConfig cfg = Band(1, 4);
  for (int trial = 0; trial < 20; ++trial) {
    const auto x = RandomWords(v, 1 + trial % 6, &rng);
    auto y = RandomWords(v, 1 + (trial * 7) % 5, &rng);
    y.push_back(v.EosId());

    const auto adaptive = BuildTrainingPaths(x, y, v, cfg, Policy::Adaptive());
    REQUIRE(adaptive.size() == 2);
    CHECK(adaptive[0].actions == ExtremePath(x, y, cfg, PathSide::kAggressive));
    CHECK(adaptive[1].actions == ExtremePath(x, y, cfg, PathSide::kConservative));
    TransitionSystem ts(v);
    for (const auto &p : adaptive) {
      CHECK(p.weight == 0.5);
      const auto states = ts.ReplayStates(p.actions, x.size());
      for (size_t i = 0; i < p.actions.size(); ++i) {
        std::vector<int> want;
        for (const Action &a : OracleActions(states[i], x, y, cfg))
          want.push_back(a.TokenId(v));
        CHECK(p.targets[i] == want);
      }
    }

    const int n = static_cast<int>(x.size());
    const auto full = BuildTrainingPaths(x, y, v, cfg, Policy::FullSentence());
    for (int k = n; k <= n + 2; ++k) {
      const auto wk = BuildTrainingPaths(x, y, v, cfg, Policy::Waitk(k));
      REQUIRE(wk.size() == 1);
      CHECK(wk[0].actions == full[0].actions);
      CHECK(wk[0].targets == full[0].targets);
    }
    // Only word steps are supervised, each by its own word.
    for (size_t i = 0; i < full[0].actions.size(); ++i) {
      const Action &a = full[0].actions[i];
      if (a.IsDelay())
        CHECK(full[0].targets[i].empty());
      else
        CHECK(full[0].targets[i] == std::vector<int>{a.WordId()});
    }
  }
}
