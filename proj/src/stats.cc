// src/stats.cc

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

#include "nlsd/stats.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

namespace nlsd {

Vector Projection::Apply(const Vector &x) const {
  if (static_cast<std::size_t>(x.size()) != InputDim()) {
    throw Error("projection expects dimension " + std::to_string(InputDim()) +
                ", got " + std::to_string(x.size()));
  }
  return matrix * x;
}

Projection Projection::Identity(std::size_t dim, std::string condition) {
  return {Matrix::Identity(static_cast<Eigen::Index>(dim),
                           static_cast<Eigen::Index>(dim)),
          std::move(condition)};
}

bool SameFrame(const Projection &a, const Projection &b) {
  return a.matrix.rows() == b.matrix.rows() &&
         a.matrix.cols() == b.matrix.cols() && a.matrix == b.matrix;
}

Scatter EstimateScatter(std::span<const LabeledVector> vectors) {
  const std::size_t dim = CommonDimension(vectors);
  const auto groups = GroupBySpeaker(vectors);
  if (groups.size() < 2) {
    throw Error("scatter estimation needs at least 2 speakers, got " +
                std::to_string(groups.size()));
  }
  for (const auto &[speaker, idx] : groups) {
    if (idx.size() < 2) {
      throw Error("speaker '" + speaker +
                  "' has a single vector; within-speaker scatter needs >= 2");
    }
  }

  const auto d = static_cast<Eigen::Index>(dim);
  const auto n = vectors.size();
  const auto k = groups.size();

  Scatter s;
  s.n_speakers = k;
  s.n_vectors = n;
  s.mean = Vector::Zero(d);
  s.within = Matrix::Zero(d, d);
  s.between = Matrix::Zero(d, d);

  std::vector<Vector> speaker_means;
  speaker_means.reserve(k);
  for (const auto &[speaker, idx] : groups) {
    Vector m = Vector::Zero(d);
    for (auto i : idx) m += vectors[i].vec;
    s.mean += m;
    m /= static_cast<double>(idx.size());
    for (auto i : idx) {
      const Vector r = vectors[i].vec - m;
      s.within.noalias() += r * r.transpose();
    }
    speaker_means.push_back(std::move(m));
  }
  s.mean /= static_cast<double>(n);

  Vector mean_of_means = Vector::Zero(d);
  for (const auto &m : speaker_means) mean_of_means += m;
  mean_of_means /= static_cast<double>(k);
  for (const auto &m : speaker_means) {
    const Vector r = m - mean_of_means;
    s.between.noalias() += r * r.transpose();
  }
  s.within /= static_cast<double>(n - k);
  s.between /= static_cast<double>(k - 1);
  return s;
}

Projection FitProjection(const Matrix &between, const Matrix &within,
                         std::size_t d_out, std::string source_condition) {
  const auto d = within.rows();
  if (within.cols() != d || between.rows() != d || between.cols() != d)
    throw Error("scatter matrices must be square and of equal size");
  if (d_out < 1 || d_out > static_cast<std::size_t>(d)) {
    throw Error("output dimension " + std::to_string(d_out) +
                " outside [1, " + std::to_string(d) + "]");
  }

  const Matrix w = 0.5 * (within + within.transpose());
  const double trace = w.trace();
  Eigen::SelfAdjointEigenSolver<Matrix> w_eig(w);
  if (w_eig.info() != Eigen::Success || !std::isfinite(trace) || trace <= 0.0 ||
      !w.allFinite()) {
    double cond = std::numeric_limits<double>::infinity();
    if (w_eig.info() == Eigen::Success && w_eig.eigenvalues().minCoeff() > 0)
      cond = w_eig.eigenvalues().maxCoeff() / w_eig.eigenvalues().minCoeff();
    std::ostringstream msg;
    msg << "within-speaker scatter is singular beyond repair (condition number "
        << cond << ")";
    throw Error(msg.str());
  }

  const double floor = kEigenFloorRelative * trace / static_cast<double>(d);
  Vector inv_sqrt = w_eig.eigenvalues().cwiseMax(floor).cwiseSqrt().cwiseInverse();
  const Matrix &v = w_eig.eigenvectors();
  const Matrix whiten = v * inv_sqrt.asDiagonal() * v.transpose();

  Matrix b = whiten * between * whiten;
  b = 0.5 * (b + b.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> b_eig(b);
  if (b_eig.info() != Eigen::Success)
    throw Error("eigen-decomposition of the whitened between-speaker scatter failed");

  std::vector<Eigen::Index> order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), 0);
  const Vector &evals = b_eig.eigenvalues();
  std::stable_sort(order.begin(), order.end(), [&](auto lhs, auto rhs) {
    return evals[lhs] > evals[rhs];
  });

  Projection p;
  p.source_condition = std::move(source_condition);
  p.matrix.resize(static_cast<Eigen::Index>(d_out), d);
  for (std::size_t r = 0; r < d_out; ++r) {
    Vector row = whiten * b_eig.eigenvectors().col(order[r]);
    Eigen::Index arg = 0;
    row.cwiseAbs().maxCoeff(&arg);
    if (row[arg] < 0) row = -row;
    p.matrix.row(static_cast<Eigen::Index>(r)) = row.transpose();
  }
  return p;
}

ConditionStats EstimateConditionStats(std::span<const LabeledVector> vectors,
                                      const Projection &frame,
                                      std::string condition) {
  const std::size_t dim = CommonDimension(vectors);
  if (dim != frame.InputDim()) {
    throw Error("frame expects dimension " + std::to_string(frame.InputDim()) +
                ", vectors have " + std::to_string(dim));
  }
  VectorSet projected(vectors.begin(), vectors.end());
  for (auto &v : projected) v.vec = frame.matrix * v.vec;
  const Scatter s = EstimateScatter(projected);

  ConditionStats cs;
  cs.condition = condition.empty() ? vectors.front().condition : std::move(condition);
  cs.mean = s.mean;
  cs.between = s.between.diagonal().cwiseMax(kVarianceFloor);
  cs.within = s.within.diagonal().cwiseMax(kVarianceFloor);
  cs.n_speakers = s.n_speakers;
  cs.n_vectors = s.n_vectors;
  cs.frame = frame;
  return cs;
}

ConditionStats FitConditionStats(std::span<const LabeledVector> vectors,
                                 std::string condition, std::size_t d_out) {
  const Scatter s = EstimateScatter(vectors);
  if (condition.empty()) condition = vectors.front().condition;
  const std::size_t out = d_out == 0 ? static_cast<std::size_t>(s.mean.size()) : d_out;
  const Projection frame = FitProjection(s.between, s.within, out, condition);
  return EstimateConditionStats(vectors, frame, condition);
}

PooledSet PoolConditions(std::span<const LabeledVector> first,
                         std::span<const LabeledVector> second) {
  PooledSet pooled;
  if (!first.empty() && !second.empty() &&
      first.front().vec.size() != second.front().vec.size()) {
    throw Error("cannot pool vector sets of different dimension");
  }
  std::set<std::string> ids;
  std::set<std::string> first_speakers;
  for (const auto &v : first) {
    if (!ids.insert(v.utt_id).second) throw Error("duplicate utterance id '" + v.utt_id + "'");
    first_speakers.insert(v.speaker);
  }
  bool overlap = false;
  for (const auto &v : second) {
    if (!ids.insert(v.utt_id).second)
      throw Error("duplicate utterance id '" + v.utt_id + "' across pooled sets");
    overlap = overlap || first_speakers.contains(v.speaker);
  }
  pooled.vectors.reserve(first.size() + second.size());
  pooled.vectors.insert(pooled.vectors.end(), first.begin(), first.end());
  pooled.vectors.insert(pooled.vectors.end(), second.begin(), second.end());
  CommonDimension(pooled.vectors);
  if (!overlap) {
    pooled.warning =
        "pooled sets share no speakers; multi-condition statistics will not "
        "see cross-condition within-speaker variation";
  }
  return pooled;
}

}  // namespace nlsd
