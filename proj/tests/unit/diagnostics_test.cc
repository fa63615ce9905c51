// tests/unit/diagnostics_test.cc

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
#include "nlsd/diagnostics.h"
#include "nlsd/sim.h"
#include "test_util.h"

using namespace nlsd;

TEST_CASE("angle metric") {
  const Vector a = Eigen::Vector2d(1, 1), b = Eigen::Vector2d(1, 0), c = Eigen::Vector2d(0, 1);
  CHECK(AngleMetric(a, a) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(AngleMetric(b, c) == doctest::Approx(1000.0));
  CHECK(AngleMetric(a, b) == doctest::Approx((1.0 - 1.0 / std::sqrt(2.0)) * 1e3));
  CHECK(AngleMetric(a, b) == doctest::Approx(292.893).epsilon(1e-6));
  CHECK(AngleMetric(b, -b) == doctest::Approx(2000.0));
  CHECK_THROWS_AS(AngleMetric(Vector::Zero(2), b), Error);
  CHECK_THROWS_AS(AngleMetric(a, Vector::Zero(3)), Error);

  std::mt19937_64 rng(2);
  for (int i = 0; i < 20; ++i) {
    const Vector x = test::RandomVector(rng, 5), y = test::RandomVector(rng, 5);
    CHECK(AngleMetric(x, y) == doctest::Approx(AngleMetric(y, x)).epsilon(1e-12));
    CHECK(AngleMetric(3.5 * x, y) == doctest::Approx(AngleMetric(x, y)).epsilon(1e-9));
    CHECK(AngleMetric(x, y) >= 0.0);
    CHECK(AngleMetric(x, y) <= 2000.0);
  }
}

TEST_CASE("length metric") {
  const Vector a = Eigen::Vector2d(1, 2);
  CHECK(LengthMetric(a, a) == 0.0);
  CHECK(LengthMetric(a, a + Eigen::Vector2d(0, 1)) == doctest::Approx(100.0));
  CHECK(LengthMetric(a, Vector::Zero(2)) == doctest::Approx(500.0));
  CHECK_THROWS_AS(LengthMetric(a, Vector::Zero(3)), Error);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 20; ++i) {
    const Vector x = test::RandomVector(rng, 4), y = test::RandomVector(rng, 4), t = test::RandomVector(rng, 4);
    CHECK(LengthMetric(x, y) == doctest::Approx(LengthMetric(y, x)));
    CHECK(LengthMetric(x + t, y + t) == doctest::Approx(LengthMetric(x, y)));
  }
}

TEST_CASE("variance profiles") {
  SimSpec spec = IsotropicSpec(6, 2000, 5, 5, 2.0, 1.0, 12);
  spec.offset = RandomShift(6, 2.0, 1);
  SimSpec scaled = spec;
  scaled.mismatch = WithinScaleMismatch(Vector::Constant(6, 2.0));
  SimSpec shifted = spec;
  shifted.mismatch = ShiftMismatch(RandomShift(6, 3.0, 2));
  shifted.test_condition = "shifted";
  scaled.test_condition = "scaled";
  const SimData base = Generate(spec);
  const std::vector<VectorSet> tests{base.enroll, Generate(scaled).test, Generate(shifted).test};
  const IncoherenceReport r = VarianceProfiles(base.enroll, tests, 4);
  REQUIRE(r.profiles.size() == 3);
  CHECK(r.n_dims == 4);
  CHECK(r.profiles[0].within.size() == 4);
  // against itself: whitened
  CHECK((r.profiles[0].within.array() - 1.0).abs().maxCoeff() < 1e-6);
  CHECK(r.pairs[0].angle == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(r.pairs[0].length == doctest::Approx(0.0).epsilon(1e-9));
  // scaled: flat at gamma
  CHECK((r.profiles[1].within.array() / 2.0 - 1.0).abs().maxCoeff() < 0.05);
  // shifted: within untouched, means apart
  CHECK((r.profiles[2].within.array() - 1.0).abs().maxCoeff() < 0.05);
  CHECK(r.pairs[2].length > 700.0);
  CHECK(r.pairs[2].test_condition == "shifted");

  // n_dims larger than the dimension is clipped
  CHECK(VarianceProfiles(base.enroll, tests, 50).n_dims == 6);

  std::ostringstream os;
  WriteIncoherenceReport(os, r);
  CHECK(os.str().find("enroll\tshifted\t") != std::string::npos);
  CHECK(os.str().find("scaled\t4\t") != std::string::npos);
}

TEST_CASE("angle and length grow with the injected shift") {
  SimSpec spec = IsotropicSpec(8, 400, 5, 5, 0.5, 1.0, 3);
  spec.offset = RandomShift(8, 2.0, 4);
  const Vector dir = RandomShift(8, 1.0, 5);
  const SimData base = Generate(spec);
  std::vector<VectorSet> tests;
  for (double mag : {0.0, 1.0, 2.0, 3.0, 4.0}) {
    SimSpec s = spec;
    s.mismatch = ShiftMismatch(mag * dir);
    tests.push_back(Generate(s).test);
  }
  const IncoherenceReport r = VarianceProfiles(base.enroll, tests);
  for (std::size_t i = 1; i < r.pairs.size(); ++i) {
    CHECK(r.pairs[i].angle > r.pairs[i - 1].angle);
    CHECK(r.pairs[i].length > r.pairs[i - 1].length);
  }
}
