// include/nlsd/diagnostics.h

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

// Statistics-incoherence measures between an enrollment condition and one or
// more test conditions. Everything is expressed in the enrollment condition's
// own frame so that the profiles of different test conditions line up.

#ifndef NLSD_DIAGNOSTICS_H_
#define NLSD_DIAGNOSTICS_H_

#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "nlsd/common.h"

namespace nlsd {

/// (1 - cos(a, b)) * 1e3. Rejects zero vectors.
double AngleMetric(const Vector &mean_e, const Vector &mean_t);

/// ||a - b||^2 * 1e2.
double LengthMetric(const Vector &mean_e, const Vector &mean_t);

struct PairMetrics {
  std::string enroll_condition;
  std::string test_condition;
  double angle = 0.0;
  double length = 0.0;
};

struct VarianceProfile {
  std::string condition;
  Vector between;  // leading n_dims entries
  Vector within;
};

struct IncoherenceReport {
  std::string enroll_condition;
  std::string frame;  // description of the coordinates the numbers live in
  std::size_t n_dims = 0;
  std::vector<PairMetrics> pairs;
  std::vector<VarianceProfile> profiles;  // one per test condition
};

inline constexpr std::size_t kDefaultProfileDims = 50;

/// Fits the enrollment frame (full rank), projects every test condition with
/// it and reports theta / l of the raw projected means plus the per-dimension
/// variances of the first `n_dims` directions (clipped to the dimension).
IncoherenceReport VarianceProfiles(std::span<const LabeledVector> enroll,
                                   std::span<const VectorSet> test_sets,
                                   std::size_t n_dims = kDefaultProfileDims);

/// Two tab-separated tables: one row per condition pair, then one row per
/// (condition, dimension).
void WriteIncoherenceReport(std::ostream &os, const IncoherenceReport &report);

}  // namespace nlsd

#endif  // NLSD_DIAGNOSTICS_H_
