// tests/unit/eval_test.cc

// Copyright 2026  The nlsd Authors
//
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

#include <cmath>
#include <sstream>

#include "doctest.h"
#include "nlsd/eval.h"
#include "nlsd/sim.h"
#include "oracles.h"
#include "test_util.h"

using namespace nlsd;
using nlsd::test::Lv;

TEST_CASE("exhaustive trials") {
  const std::vector<std::string> spk{"A", "B"};
  const VectorSet t{Lv("a1", "A", {0}), Lv("a2", "A", {0}), Lv("b1", "B", {0}), Lv("b2", "B", {0})};
  const auto trials = BuildTrials(spk, t);
  CHECK(trials.size() == 8);
  int targets = 0;
  for (const auto &x : trials) targets += x.is_target;
  CHECK(targets == 4);
  CHECK(trials[0].enroll_speaker == "A");
  CHECK(trials[0].test_utt == "a1");
  CHECK(trials[0].is_target);
}

TEST_CASE("sampled trials") {
  const SimData d = Generate(IsotropicSpec(2, 30, 1, 5, 1.0, 1.0, 1));
  std::vector<std::string> spk;
  for (const auto &[s, i] : GroupBySpeaker(d.test)) spk.push_back(s);
  const auto all = BuildTrials(spk, d.test);

  const auto big = BuildTrials(spk, d.test, TrialSampling{all.size() + 5, 1});
  REQUIRE(big.size() == all.size());
  for (std::size_t i = 0; i < all.size(); ++i) CHECK(big[i].test_utt == all[i].test_utt);

  const auto a = BuildTrials(spk, d.test, TrialSampling{100, 7});
  const auto b = BuildTrials(spk, d.test, TrialSampling{100, 7});
  CHECK(a.size() == 100);
  bool same = true;
  for (std::size_t i = 0; i < a.size(); ++i)
    same = same && a[i].enroll_speaker == b[i].enroll_speaker && a[i].test_utt == b[i].test_utt;
  CHECK(same);
  for (const auto &s : spk) {
    bool has_target = false;
    for (const auto &t : a) has_target = has_target || (t.enroll_speaker == s && t.is_target);
    CHECK(has_target);
  }

  std::vector<std::string> with_stranger = spk;
  with_stranger.push_back("stranger");
  CHECK_THROWS_WITH(BuildTrials(with_stranger, d.test, TrialSampling{100, 1}), doctest::Contains("stranger"));
  CHECK_THROWS_AS(BuildTrials(spk, d.test, TrialSampling{10, 1}), Error);
  CHECK_THROWS_AS(BuildTrials({}, d.test), Error);
  CHECK_THROWS_AS(BuildTrials(spk, VectorSet{}), Error);
}

TEST_CASE("EER worked examples") {
  CHECK(ComputeEer(std::vector{2.0, 3.0}, std::vector{0.0, 1.0}) == 0.0);
  CHECK(ComputeEer(std::vector{0.9, 0.8, 0.2}, std::vector{0.7, 0.1, 0.0}) ==
        doctest::Approx(1.0 / 3.0));
  CHECK(ComputeEer(std::vector{0.0, 1.0}, std::vector{2.0, 3.0}) == 1.0);
  CHECK(ComputeEer(std::vector{5.0}, std::vector{5.0}) == 0.5);
  CHECK_THROWS_AS(ComputeEer(std::vector<double>{}, std::vector{1.0}), Error);
  CHECK_THROWS_AS(ComputeEer(std::vector{1.0}, std::vector<double>{}), Error);
}

TEST_CASE("EER equals the exhaustive threshold sweep") {
  std::mt19937_64 rng(55);
  std::uniform_int_distribution<int> count(1, 100), grid(0, 20);
  std::normal_distribution<double> normal;
  for (int rep = 0; rep < 300; ++rep) {
    std::vector<double> tar(static_cast<std::size_t>(count(rng))), non(static_cast<std::size_t>(count(rng)));
    const bool ties = rep % 2 == 0;
    for (auto &s : tar) s = ties ? grid(rng) * 0.5 + 1.0 : normal(rng) + 1.0;
    for (auto &s : non) s = ties ? grid(rng) * 0.5 : normal(rng);
    const double eer = ComputeEer(tar, non);
    CHECK(eer == oracle::BruteForceEer(tar, non));
    // strictly increasing transform
    std::vector<double> t2(tar), n2(non);
    for (auto &s : t2) s = std::exp(s);
    for (auto &s : n2) s = std::exp(s);
    CHECK(ComputeEer(t2, n2) == eer);
    CHECK(eer >= 0.0);
    CHECK(eer <= 1.0);
  }
}

TEST_CASE("EER under sign reversal with swapped labels") {
  // The swapped problem crosses over on the other side of the same gap, so
  // the two rates agree to within one step of either error rate.
  std::mt19937_64 rng(56);
  std::normal_distribution<double> normal;
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<double> tar(40), non(60);
    for (auto &s : tar) s = normal(rng) + 0.7;
    for (auto &s : non) s = normal(rng);
    std::vector<double> ntar, nnon;
    for (double s : non) ntar.push_back(-s);
    for (double s : tar) nnon.push_back(-s);
    CHECK(std::abs(ComputeEer(ntar, nnon) - ComputeEer(tar, non)) <= 1.0 / 40.0 + 1e-12);
  }
}

TEST_CASE("scores joined to labels") {
  const std::vector<Trial> trials{{"A", "u1", true}, {"A", "u2", false}};
  const std::vector<ScoreRecord> scores{{"A", "u2", 1.0}, {"A", "u1", 2.0}};
  const auto [tar, non] = SplitByLabel(scores, trials);
  CHECK(tar == std::vector{2.0});
  CHECK(non == std::vector{1.0});
  const std::vector<ScoreRecord> stray{{"B", "u1", 0.0}};
  CHECK_THROWS_AS(SplitByLabel(stray, trials), Error);
}

namespace {

struct Scenario {
  ConditionData enroll;
  std::vector<ConditionData> tests;
};

Scenario MakeScenario(std::uint64_t seed) {
  SimSpec spec = IsotropicSpec(8, 250, 5, 10, 0.5, 1.0, seed);
  spec.offset = RandomShift(8, 2.0, seed + 1);
  const SimData base = Generate(spec);
  auto split = [&](const VectorSet &v) { return SplitParallel(v, 0.8, seed, SplitMode::kSpeakerDisjoint); };
  Scenario s;
  const Split e = split(base.enroll);
  s.enroll = {"enroll", e.dev, e.eval};
  SimSpec shifted = spec;
  shifted.mismatch = ShiftMismatch(RandomShift(8, 3.0, seed + 2));
  shifted.test_condition = "shift";
  SimSpec scaled = spec;
  scaled.mismatch = WithinScaleMismatch(Vector::Constant(8, 3.0));
  scaled.test_condition = "scale";
  for (const auto &sp : {shifted, scaled}) {
    const Split t = split(Generate(sp).test);
    s.tests.push_back({sp.test_condition, t.dev, t.eval});
  }
  return s;
}

}  // namespace

TEST_CASE("grid of conditions and scorers") {
  const Scenario s = MakeScenario(3);
  const std::vector<Variant> variants{Variant::kBaseline, Variant::kGsc, Variant::kWva, Variant::kSdlt};
  std::vector<ConditionData> tests = s.tests;
  SimSpec same = IsotropicSpec(8, 250, 5, 10, 0.5, 1.0, 3);
  same.offset = RandomShift(8, 2.0, 4);
  same.test_condition = "enroll";
  const Split m = SplitParallel(Generate(same).test, 0.8, 3, SplitMode::kSpeakerDisjoint);
  tests.push_back({"enroll", m.dev, m.eval});

  const EvalReport r = RunMatrix(s.enroll, tests, variants);
  CHECK(r.cells.size() == 2 * variants.size() + 1);
  CHECK(r.At("enroll", "enroll", Variant::kBaseline).eer > 0.0);
  CHECK_THROWS_AS(r.At("enroll", "enroll", Variant::kGsc), Error);
  for (const auto &c : r.cells) {
    CHECK(c.eer >= 0.0);
    CHECK(c.eer <= 1.0);
    CHECK(c.n_target == 50 * 10);
  }

  // shift: GSC restores, WVA does not help much; scale: WVA helps.
  // Tolerances absorb Monte-Carlo noise at this size.
  const double noise = 0.01;
  const auto eer = [&](const char *t, Variant v) { return r.At("enroll", t, v).eer; };
  CHECK(eer("shift", Variant::kBaseline) >= eer("shift", Variant::kGsc) - noise);
  CHECK(eer("shift", Variant::kGsc) >= eer("shift", Variant::kSdlt) - noise);
  CHECK(eer("scale", Variant::kBaseline) >= eer("scale", Variant::kWva) - noise);
  CHECK(eer("scale", Variant::kWva) >= eer("scale", Variant::kSdlt) - noise);

  // A single cell equals the direct pipeline call.
  std::vector<std::string> speakers;
  for (const auto &[spk, idx] : GroupBySpeaker(s.enroll.eval)) speakers.push_back(spk);
  const auto trials = BuildTrials(speakers, s.tests[0].eval);
  const auto configs = BuildScorers(std::vector{Variant::kGsc}, s.enroll.dev, s.tests[0].dev);
  const EvalCell direct = EvaluateScorer(configs[0], s.enroll.eval, s.tests[0].eval, trials);
  CHECK(direct.eer == eer("shift", Variant::kGsc));

  // deterministic
  const EvalReport again = RunMatrix(s.enroll, tests, variants);
  std::ostringstream a, b;
  WriteEvalReport(a, r);
  WriteEvalReport(b, again);
  CHECK(a.str() == b.str());
  CHECK(a.str().find(kEerConvention) != std::string::npos);
}

TEST_CASE("scorer construction for every variant") {
  const Scenario s = MakeScenario(5);
  const auto configs = BuildScorers(AllVariants(), s.enroll.dev, s.tests[0].dev);
  REQUIRE(configs.size() == AllVariants().size());
  for (const auto &c : configs) {
    CHECK_NOTHROW(c.Validate());
    if (c.variant == Variant::kMct) CHECK(c.enroll_stats.n_vectors == s.enroll.dev.size() + s.tests[0].dev.size());
    if (c.variant == Variant::kSdlt) CHECK(c.transform->source_condition == "shift");
  }
}
