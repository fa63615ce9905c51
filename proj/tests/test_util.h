// tests/test_util.h

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

#ifndef NLSD_TESTS_TEST_UTIL_H_
#define NLSD_TESTS_TEST_UTIL_H_

#include <initializer_list>
#include <random>
#include <string>

#include "nlsd/common.h"

namespace nlsd::test {

inline LabeledVector Lv(std::string utt, std::string spk, std::initializer_list<double> v,
                        std::string cond = "c") {
  LabeledVector out{std::move(utt), std::move(spk), std::move(cond), Vector(static_cast<Eigen::Index>(v.size()))};
  Eigen::Index i = 0;
  for (double x : v) out.vec[i++] = x;
  return out;
}

inline Vector RandomVector(std::mt19937_64 &rng, Eigen::Index d, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Vector v(d);
  for (Eigen::Index i = 0; i < d; ++i) v[i] = u(rng);
  return v;
}

inline Matrix RandomMatrix(std::mt19937_64 &rng, Eigen::Index r, Eigen::Index c) {
  std::normal_distribution<double> n;
  Matrix m(r, c);
  for (Eigen::Index j = 0; j < c; ++j)
    for (Eigen::Index i = 0; i < r; ++i) m(i, j) = n(rng);
  return m;
}

inline Matrix RandomSpd(std::mt19937_64 &rng, Eigen::Index d) {
  const Matrix a = RandomMatrix(rng, d, d);
  return a * a.transpose() + 0.5 * Matrix::Identity(d, d);
}

}  // namespace nlsd::test

#endif  // NLSD_TESTS_TEST_UTIL_H_
