// tests/unit/scoring_test.cc

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

#include "doctest.h"
#include "nlsd/scoring.h"
#include "nlsd/sim.h"
#include "oracles.h"
#include "test_util.h"

using namespace nlsd;

namespace {

ConditionStats DiagStats(const Vector &eps, const Vector &sigma, std::string cond = "e") {
  ConditionStats s;
  s.condition = cond;
  s.mean = Vector::Zero(eps.size());
  s.between = eps;
  s.within = sigma;
  s.n_speakers = 10;
  s.n_vectors = 100;
  s.frame = Projection::Identity(static_cast<std::size_t>(eps.size()), cond);
  return s;
}

Vector V1(double x) { return Vector::Constant(1, x); }

}  // namespace

TEST_CASE("enrollment posterior by hand") {
  SUBCASE("one vector") {
    const auto s = DiagStats(V1(1), V1(1));
    const auto m = EnrollFromAverage("k", V1(2), 1, s);
    // gain 1 / (1 + 1), posterior variance 1 / 2
    CHECK(m.mu_tilde[0] == doctest::Approx(1.0));
    CHECK(m.pred_var[0] == doctest::Approx(1.5));
  }
  SUBCASE("four vectors") {
    const auto s = DiagStats(V1(2), V1(1));
    const auto m = EnrollFromAverage("k", V1(1), 4, s);
    CHECK(m.mu_tilde[0] == doctest::Approx(8.0 / 9.0));
    CHECK(m.pred_var[0] == doctest::Approx(1.0 + 2.0 / 9.0));
  }
  SUBCASE("zero average") {
    const auto s = DiagStats(V1(2), V1(1));
    for (std::size_t n : {1u, 3u, 50u}) CHECK(EnrollFromAverage("k", V1(0), n, s).mu_tilde[0] == 0.0);
  }
  SUBCASE("empty set") {
    const auto s = DiagStats(V1(2), V1(1));
    CHECK_THROWS_AS(Enroll(VectorSet{}, s), Error);
  }
}

TEST_CASE("predictive variance bounds and large-n limit") {
  const auto s = DiagStats(Eigen::Vector3d(0.3, 2.0, 7.0), Eigen::Vector3d(1.0, 0.5, 3.0));
  const Vector avg = Eigen::Vector3d(0.4, -1.0, 2.0);
  for (std::size_t n = 1; n <= 20; ++n) {
    const auto m = EnrollFromAverage("k", avg, n, s);
    CHECK((m.pred_var.array() > s.within.array()).all());
    CHECK((m.pred_var.array() <= (s.within + s.between).array() + 1e-15).all());
  }
  const auto big = EnrollFromAverage("k", avg, 1000000, s);
  CHECK((big.mu_tilde - avg).cwiseAbs().maxCoeff() < 1e-4);
  CHECK((big.pred_var - s.within).cwiseAbs().maxCoeff() < 1e-4);
}

TEST_CASE("matched score by direct density evaluation") {
  const auto s = DiagStats(V1(1), V1(1));
  const auto m = EnrollFromAverage("k", V1(0), 1, s);
  CHECK(LogNlMatched(m, V1(0), s) == doctest::Approx(0.5 * std::log(2.0 / 1.5)).epsilon(1e-12));
  CHECK(LogNlMatched(m, V1(0), s) == doctest::Approx(0.143841).epsilon(1e-6));
  CHECK_THROWS_AS(LogNlMatched(m, Vector::Zero(2), s), Error);
}

TEST_CASE("matched score equals the joint Gaussian likelihood ratio") {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> var(0.1, 10.0);
  std::uniform_int_distribution<int> dim(1, 4), count(1, 5);
  for (int rep = 0; rep < 100; ++rep) {
    const int d = dim(rng), n = count(rng);
    const Vector eps = Vector::Constant(d, var(rng));
    const Vector sigma = Vector::Constant(d, var(rng));
    const auto s = DiagStats(eps, sigma);
    std::vector<Vector> enroll;
    Vector sum = Vector::Zero(d);
    for (int i = 0; i < n; ++i) {
      enroll.push_back(test::RandomVector(rng, d, -3, 3));
      sum += enroll.back();
    }
    const Vector x = test::RandomVector(rng, d, -3, 3);
    const auto m = EnrollFromAverage("k", sum / n, static_cast<std::size_t>(n), s);
    CHECK(std::abs(LogNlMatched(m, x, s) - oracle::JointGaussianLogLr(x, enroll, eps, sigma)) < 1e-8);
  }
}

TEST_CASE("matched score decreases away from the posterior mean") {
  const auto s = DiagStats(Eigen::Vector2d(1.0, 2.0), Eigen::Vector2d(1.0, 0.5));
  const auto m = EnrollFromAverage("k", Eigen::Vector2d(0.3, -0.2), 2, s);
  const Vector dir = Eigen::Vector2d(0.6, -0.8);
  double prev = LogNlMatched(m, m.mu_tilde, s);
  for (int i = 1; i <= 30; ++i) {
    const double cur = LogNlMatched(m, m.mu_tilde + 0.5 * i * dir, s);
    CHECK(cur < prev);
    prev = cur;
  }
}

TEST_CASE("global shift compensation") {
  std::mt19937_64 rng(5);
  const auto s0 = DiagStats(Eigen::Vector3d(1.0, 2.0, 0.5), Eigen::Vector3d(1.0, 1.0, 2.0));
  auto s = s0;
  s.mean = Eigen::Vector3d(0.5, -1.0, 2.0);
  const auto m = EnrollFromAverage("k", Eigen::Vector3d(0.2, 0.1, -0.3), 3, s);
  const Vector b = Eigen::Vector3d(1.5, -2.0, 0.25);
  for (int i = 0; i < 20; ++i) {
    const Vector raw = test::RandomVector(rng, 3, -4, 4);
    const double matched = LogNlMatched(m, raw - s.mean, s);
    CHECK(LogNlGsc(m, raw - b, s, b) == doctest::Approx(matched).epsilon(1e-12));
    CHECK(LogNlGsc(m, raw, s, Vector::Zero(3)) == matched);
  }
  CHECK_THROWS_AS(LogNlGsc(m, Vector::Zero(3), s, Vector::Zero(2)), Error);
}

TEST_CASE("within variance adaptation") {
  const auto s = DiagStats(V1(1), V1(1));
  const auto m = EnrollFromAverage("k", V1(0), 1, s);
  CHECK(LogNlWva(m, V1(0), s, V1(2)) == doctest::Approx(0.5 * std::log(3.0 / 2.5)).epsilon(1e-12));
  CHECK(LogNlWva(m, V1(0), s, V1(2)) == doctest::Approx(0.091161).epsilon(1e-5));
  std::mt19937_64 rng(8);
  for (int i = 0; i < 10; ++i) {
    const Vector x = test::RandomVector(rng, 1, -3, 3);
    CHECK(LogNlWva(m, x, s, s.within) == doctest::Approx(LogNlMatched(m, x, s)).epsilon(1e-14));
  }
  CHECK_THROWS_AS(LogNlWva(m, V1(0), s, V1(0)), Error);
}

TEST_CASE("decomposed scorers reduce to the matched scorer") {
  std::mt19937_64 rng(13);
  const auto s = DiagStats(Eigen::Vector3d(2.0, 1.0, 0.5), Eigen::Vector3d(1.0, 1.0, 1.0));
  const auto m = EnrollFromAverage("k", Eigen::Vector3d(0.5, -0.5, 1.0), 4, s);
  const AffineTransform id = AffineTransform::Identity(3);
  for (int i = 0; i < 10; ++i) {
    const Vector x = test::RandomVector(rng, 3, -3, 3);
    const double matched = LogNlMatched(m, x, s);
    CHECK(LogNlSdlt(m, x, s, s, id) == doctest::Approx(matched).epsilon(1e-14));
    CHECK(LogNlCat(m, x, s, id) == doctest::Approx(matched).epsilon(1e-14));
  }
}

TEST_CASE("SD/LT with the true shift against GSC") {
  // Test vectors are enrollment-frame vectors displaced by -b. With M = I
  // and the true b, SD/LT differs from GSC only in its normalization term,
  // which uses the test statistics on the unshifted vector.
  std::mt19937_64 rng(21);
  const auto e = DiagStats(Eigen::Vector2d(1.0, 3.0), Eigen::Vector2d(1.0, 1.0), "e");
  const auto t = DiagStats(Eigen::Vector2d(1.0, 3.0), Eigen::Vector2d(1.0, 1.0), "t");
  const auto m = EnrollFromAverage("k", Eigen::Vector2d(0.7, -1.1), 2, e);
  const Vector b = Eigen::Vector2d(2.0, -1.0);
  AffineTransform tr = AffineTransform::Identity(2);
  tr.b = b;
  for (int i = 0; i < 10; ++i) {
    const Vector x_hat = test::RandomVector(rng, 2, -3, 3);
    const double sdlt = LogNlSdlt(m, x_hat, e, t, tr);
    const double gsc = LogNlGsc(m, x_hat, e, b);
    const Vector marg = e.between + e.within;
    const double expected_gap = LogGaussianDiag(x_hat + b, marg) - LogGaussianDiag(x_hat, marg);
    CHECK(sdlt - gsc == doctest::Approx(expected_gap).epsilon(1e-12));
  }
}

TEST_CASE("SD/LT and CAT share the likelihood term") {
  std::mt19937_64 rng(34);
  const auto e = DiagStats(Eigen::Vector3d(2.0, 1.0, 0.5), Eigen::Vector3d(1.0, 0.8, 1.2), "e");
  const auto t = DiagStats(Eigen::Vector3d(1.0, 1.5, 0.7), Eigen::Vector3d(2.0, 1.0, 1.0), "t");
  AffineTransform tr;
  tr.m = test::RandomMatrix(rng, 3, 3);
  tr.b = test::RandomVector(rng, 3);
  std::vector<EnrollmentModel> models;
  for (int k = 0; k < 4; ++k)
    models.push_back(EnrollFromAverage("k" + std::to_string(k), test::RandomVector(rng, 3), 1 + k, e));
  for (int i = 0; i < 5; ++i) {
    const Vector x = test::RandomVector(rng, 3, -2, 2);
    double gap0 = 0.0;
    for (std::size_t k = 0; k < models.size(); ++k) {
      const NlTerms sd = SdltTerms(models[k], x, e, t, tr);
      const NlTerms cat = CatTerms(models[k], x, e, tr);
      CHECK(sd.likelihood == cat.likelihood);
      CHECK(sd.normalization != cat.normalization);
      const double gap = sd.Score() - cat.Score();
      if (k == 0) gap0 = gap;
      CHECK(gap == doctest::Approx(gap0).epsilon(1e-12));
    }
  }
}

TEST_CASE("scorer configuration requirements") {
  const auto e = DiagStats(Eigen::Vector2d(1.0, 1.0), Eigen::Vector2d(1.0, 1.0), "e");
  ScorerConfig c;
  c.enroll_stats = e;
  c.variant = Variant::kBaseline;
  CHECK_NOTHROW(c.Validate());
  c.variant = Variant::kGsc;
  CHECK_THROWS_WITH(c.Validate(), doctest::Contains("shift"));
  c.variant = Variant::kWva;
  CHECK_THROWS_AS(c.Validate(), Error);
  c.variant = Variant::kSdlt;
  c.test_stats = e;
  CHECK_THROWS_WITH(c.Validate(), doctest::Contains("transform"));
  c.variant = Variant::kCat;
  CHECK_THROWS_WITH(c.Validate(), doctest::Contains("transform"));
  c.transform = AffineTransform::Identity(3);
  CHECK_THROWS_AS(c.Validate(), Error);
  c.transform = AffineTransform::Identity(2);
  CHECK_NOTHROW(c.Validate());

  for (Variant v : AllVariants()) CHECK(ParseVariant(VariantName(v)) == v);
  CHECK_THROWS_AS(ParseVariant("plda"), Error);
}

TEST_CASE("score differences are invariant to a shared linear map") {
  SimSpec spec = IsotropicSpec(4, 80, 4, 3, 1.5, 1.0, 17);
  const SimData data = Generate(spec);
  std::mt19937_64 rng(4);
  const Matrix a = test::RandomMatrix(rng, 4, 4) + 3.0 * Matrix::Identity(4, 4);
  auto mapped = [&](VectorSet v) {
    for (auto &x : v) x.vec = a * x.vec;
    return v;
  };
  auto scores = [](const VectorSet &enroll, const VectorSet &test) {
    const ConditionStats s = FitConditionStats(enroll, "");
    const auto models = EnrollAll(enroll, s);
    std::vector<double> out;
    for (const auto &m : models)
      for (std::size_t i = 0; i < 20; ++i) out.push_back(LogNlMatched(m, s.Center(test[i].vec), s));
    return out;
  };
  const auto plain = scores(data.enroll, data.test);
  const auto moved = scores(mapped(data.enroll), mapped(data.test));
  REQUIRE(plain.size() == moved.size());
  for (std::size_t i = 1; i < plain.size(); ++i)
    CHECK(std::abs((plain[i] - plain[0]) - (moved[i] - moved[0])) < 1e-6);
}

TEST_CASE("trial scoring") {
  SimSpec spec = IsotropicSpec(5, 50, 3, 4, 1.0, 1.0, 23);
  const SimData data = Generate(spec);
  ScorerConfig c;
  c.variant = Variant::kBaseline;
  c.enroll_stats = FitConditionStats(data.enroll, "");
  const auto models = EnrollAll(data.enroll, c.enroll_stats);

  std::vector<Trial> trials;
  for (const auto &m : models)
    for (const auto &t : data.test) trials.push_back({m.speaker, t.utt_id, m.speaker == t.speaker});
  REQUIRE(trials.size() == 10000);

  SUBCASE("parallel equals serial bit for bit") {
    const auto serial = ScoreTrials(c, models, trials, data.test, 1);
    const auto parallel = ScoreTrials(c, models, trials, data.test, 4);
    REQUIRE(serial.size() == parallel.size());
    bool same = true;
    for (std::size_t i = 0; i < serial.size(); ++i)
      same = same && serial[i].score == parallel[i].score &&
             serial[i].test_utt == parallel[i].test_utt;
    CHECK(same);
  }
  SUBCASE("empty and single trial") {
    CHECK(ScoreTrials(c, models, std::span<const Trial>{}, data.test, 2).empty());
    const auto one = ScoreTrials(c, models, std::span(trials).first(1), data.test, 1);
    REQUIRE(one.size() == 1);
    CHECK(one[0].score == LogNlMatched(models[0], c.enroll_stats.Center(data.test[0].vec), c.enroll_stats));
  }
  SUBCASE("dangling references") {
    std::vector<Trial> bad{{"nobody", data.test[0].utt_id, false}};
    CHECK_THROWS_AS(ScoreTrials(c, models, bad, data.test, 1), Error);
    bad = {{models[0].speaker, "no-such-utt", false}};
    CHECK_THROWS_AS(ScoreTrials(c, models, bad, data.test, 1), Error);
  }
  SUBCASE("non-finite score names the trial") {
    VectorSet test = data.test;
    test[3].vec[0] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_WITH(ScoreTrials(c, models, trials, test, 3), doctest::Contains(test[3].utt_id.c_str()));
  }
}
