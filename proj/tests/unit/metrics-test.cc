// tests/unit/metrics-test.cc

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

#include "base/simul-error.h"
#include "eval/bleu.h"
#include "eval/latency-metrics.h"
#include "eval/sweep.h"

using namespace simul;

namespace {

std::vector<int> WaitkG(int k, int n, int m) {
  std::vector<int> g;
  for (int j = 0; j < m; ++j) g.push_back(std::min(k + j, n));
  return g;
}

}  // namespace

TEST_CASE("average lagging") {
  const std::vector<int> g = {3, 4, 5, 6, 6, 6};
  const AlResult r = AverageLagging(g, 6);
  CHECK(r.value == 3.0);
  CHECK(r.tau == 4);
  CHECK(r.reached_end);
  for (int k = 1; k <= 8; ++k)
    for (int n = k + 1; n <= 20; ++n) CHECK(AverageLagging(WaitkG(k, n, n), n).value == k);
  CHECK(AverageLagging(std::vector<int>(7, 7), 7).value == 7.0);
  CHECK(AverageLagging(std::vector<int>{1}, 1).value == 1.0);

  // Never reaches the end: tau = m, flagged.  g = (1, 2), n = 4, r = 1/2:
  // AL = ((1 - 0) + (2 - 2)) / 2.
  const AlResult u = AverageLagging(std::vector<int>{1, 2}, 4);
  CHECK_FALSE(u.reached_end);
  CHECK(u.tau == 2);
  CHECK(u.value == 0.5);

  // Unequal lengths: g = (2, 4), n = 4, m = 2 -> tau = 2,
  // AL = ((2 - 0) + (4 - 1 * 4/2)) / 2 = 2.
  CHECK(AverageLagging(std::vector<int>{2, 4}, 4).value == 2.0);
  CHECK_THROWS_AS(AverageLagging(std::vector<int>{}, 3), SimulError);
}

TEST_CASE("average proportion and consecutive wait") {
  CHECK(AverageProportion(std::vector<int>{1, 2}, 2) == 0.75);
  CHECK(AverageProportion(std::vector<int>(5, 5), 5) == 1.0);
  CHECK(AverageProportion(WaitkG(2, 9, 9), 9) <= 1.0);

  CHECK(ConsecutiveWait(WaitkG(1, 10, 10)).value == 1.0);
  CHECK(ConsecutiveWait(std::vector<int>(6, 6)).value == 6.0);
  // Wait-5 on 40 words: 36 read gaps holding 40 reads.
  CHECK(ConsecutiveWait(WaitkG(5, 40, 40)).value == doctest::Approx(40.0 / 36));
  const CwResult none = ConsecutiveWait(std::vector<int>{0, 0});
  CHECK_FALSE(none.defined);
  CHECK(none.value == 0.0);
}

TEST_CASE("corpus latency skips empty outputs") {
  const LatencyReport r =
      CorpusLatency({{3, 4, 5, 6, 6, 6}, {}, {2, 2}}, {6, 4, 2});
  CHECK(r.sentences == 2);
  CHECK(r.empty_outputs == 1);
  CHECK(r.al == doctest::Approx((3.0 + 2.0) / 2));
  CHECK(r.ap == doctest::Approx((30.0 / 36 + 1.0) / 2));
  CHECK(r.cw == doctest::Approx((6.0 / 4 + 2.0) / 2));
}

TEST_CASE("bleu") {
  const std::vector<std::vector<int>> ref = {{1, 2, 3, 4}, {5, 6, 7, 8, 9}};
  CHECK(CorpusBleu(ref, ref).bleu == 100.0);

  // hyp "a b c d", ref "a b c e": p1 = 3/4, p2 = (2+1)/(3+1),
  // p3 = (1+1)/(2+1), p4 = (0+1)/(1+1), BP = 1.
  const BleuReport b = CorpusBleu({{1, 2, 3, 4}}, {{1, 2, 3, 5}});
  const double want = 100.0 * std::pow(0.75 * 0.75 * (2.0 / 3) * 0.5, 0.25);
  CHECK(b.bleu == doctest::Approx(want).epsilon(1e-12));
  CHECK(b.raw_precisions[0] == 0.75);
  CHECK(b.raw_precisions[3] == 0.0);
  CHECK(b.brevity_penalty == 1.0);

  CHECK(CorpusBleu({{7, 7, 7}}, {{1, 2, 3}}).bleu == 0.0);

  // Short hypothesis: BP = exp(1 - 4/2).
  const BleuReport s = CorpusBleu({{1, 2}}, {{1, 2, 3, 4}});
  CHECK(s.brevity_penalty == doctest::Approx(std::exp(-1.0)));
  CHECK_THROWS_AS(CorpusBleu({}, {}), SimulError);
  CHECK_THROWS_AS(CorpusBleu({{1}}, {{1}, {2}}), SimulError);
}

TEST_CASE("sweep csv") {
  const std::vector<SweepRow> rows = {{-2, 1.5, 0.625, 1.25, 88.125},
                                      {0, 3, 0.75, 2, 100},
                                      {4.5, 6.0625, 1, 6, 0}};
  const std::string csv = SweepToCsv(rows);
  CHECK(csv.rfind("t,AL,AP,CW,BLEU\n-2.0000,1.5000,0.6250,1.2500,88.1250\n", 0) == 0);
  CHECK(ParseSweepCsv(csv) == rows);
  CHECK_THROWS_AS(ParseSweepCsv("t,AL\n1,2\n"), FormatError);
  CHECK_THROWS_AS(ParseSweepCsv("t,AL,AP,CW,BLEU\n1,2,x,4,5\n"), FormatError);
  CHECK(ParseRealList("-2,-0.5,0,4.5,9") == std::vector<double>{-2, -0.5, 0, 4.5, 9});
  CHECK_THROWS_AS(ParseRealList("1,,2"), FormatError);

  CHECK(TokenAccuracy({{1, 2, 3}, {4}}, {{1, 2, 4}, {4, 5}}) == 3.0 / 5);
  CHECK(PositionAccuracy({{1, 2}, {1}}, {{1, 2}, {1, 3}}, 1) == 0.5);
}
