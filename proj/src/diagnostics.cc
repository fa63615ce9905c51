// src/diagnostics.cc

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

#include "nlsd/diagnostics.h"

#include <algorithm>

#include "nlsd/io.h"
#include "nlsd/stats.h"

namespace nlsd {

double AngleMetric(const Vector &mean_e, const Vector &mean_t) {
  if (mean_e.size() != mean_t.size())
    throw Error("angle metric: dimension mismatch");
  const double ne = mean_e.norm(), nt = mean_t.norm();
  if (ne == 0.0 || nt == 0.0) throw Error("angle metric: zero mean vector has no direction");
  const double cosine = std::clamp(mean_e.dot(mean_t) / (ne * nt), -1.0, 1.0);
  return (1.0 - cosine) * 1e3;
}

double LengthMetric(const Vector &mean_e, const Vector &mean_t) {
  if (mean_e.size() != mean_t.size())
    throw Error("length metric: dimension mismatch");
  return (mean_e - mean_t).squaredNorm() * 1e2;
}

IncoherenceReport VarianceProfiles(std::span<const LabeledVector> enroll,
                                   std::span<const VectorSet> test_sets,
                                   std::size_t n_dims) {
  if (enroll.empty()) throw Error("no enrollment-condition vectors");
  if (n_dims == 0) throw Error("number of reported dimensions must be positive");
  const ConditionStats e = FitConditionStats(enroll, "");

  IncoherenceReport report;
  report.enroll_condition = e.condition;
  report.frame = "enrollment LDA frame of '" + e.condition + "', uncentered means";
  report.n_dims = std::min(n_dims, e.Dim());
  const auto k = static_cast<Eigen::Index>(report.n_dims);
  for (const auto &set : test_sets) {
    if (set.empty()) throw Error("empty test-condition vector set");
    const ConditionStats t = EstimateConditionStats(set, e.frame, "");
    report.pairs.push_back({e.condition, t.condition, AngleMetric(e.mean, t.mean),
                            LengthMetric(e.mean, t.mean)});
    report.profiles.push_back({t.condition, t.between.head(k), t.within.head(k)});
  }
  return report;
}

void WriteIncoherenceReport(std::ostream &os, const IncoherenceReport &report) {
  os << "# frame\t" << report.frame << "\n";
  os << "# n_dims\t" << report.n_dims << "\n";
  os << "enroll\ttest\tangle\tlength\n";
  for (const auto &p : report.pairs)
    os << p.enroll_condition << '\t' << p.test_condition << '\t' << FormatDouble(p.angle)
       << '\t' << FormatDouble(p.length) << '\n';
  os << "\ncondition\tdim\tbetween\twithin\n";
  for (const auto &prof : report.profiles)
    for (Eigen::Index d = 0; d < prof.between.size(); ++d)
      os << prof.condition << '\t' << d + 1 << '\t' << FormatDouble(prof.between[d]) << '\t'
         << FormatDouble(prof.within[d]) << '\n';
}

}  // namespace nlsd
