// include/nlsd/stats.h

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

#ifndef NLSD_STATS_H_
#define NLSD_STATS_H_

#include <optional>
#include <span>
#include <string>

#include "nlsd/common.h"

namespace nlsd {

/// Sample statistics of one condition in the space the vectors live in.
struct Scatter {
  Vector mean;
  Matrix between;  // covariance of speaker means, divisor K - 1
  Matrix within;   // pooled covariance around speaker means, divisor N - K
  std::size_t n_speakers = 0;
  std::size_t n_vectors = 0;
};

/**
   A linear map that simultaneously diagonalizes the within- and
   between-speaker scatters of its source condition: T W T^T = I and
   T B T^T is diagonal with descending entries. Rows are the kept
   directions; d_out <= d.
*/
struct Projection {
  Matrix matrix;
  std::string source_condition;

  std::size_t InputDim() const { return static_cast<std::size_t>(matrix.cols()); }
  std::size_t OutputDim() const { return static_cast<std::size_t>(matrix.rows()); }
  Vector Apply(const Vector &x) const;

  static Projection Identity(std::size_t dim, std::string condition = "");
};

bool SameFrame(const Projection &a, const Projection &b);

/// Per-condition diagonal Gaussian backend, expressed in `frame`.
struct ConditionStats {
  std::string condition;
  Vector mean;     // mean of projected vectors
  Vector between;  // per-dimension between-speaker variance (epsilon_d)
  Vector within;   // per-dimension within-speaker variance (sigma_d)
  std::size_t n_speakers = 0;
  std::size_t n_vectors = 0;
  Projection frame;

  std::size_t Dim() const { return static_cast<std::size_t>(mean.size()); }
  /// Projects a raw vector into the frame and removes the condition mean.
  Vector Center(const Vector &raw) const { return frame.Apply(raw) - mean; }
};

/// Floor applied to projected variances.
inline constexpr double kVarianceFloor = 1e-8;
/// Within-scatter eigenvalues are floored at this fraction of trace/d.
inline constexpr double kEigenFloorRelative = 1e-8;

Scatter EstimateScatter(std::span<const LabeledVector> vectors);

/// Whitens `within`, diagonalizes `between` in the whitened space and keeps
/// the `d_out` directions with the largest between-speaker variance.
Projection FitProjection(const Matrix &between, const Matrix &within,
                         std::size_t d_out, std::string source_condition = "");

/// Projects every vector with `frame` and keeps the diagonals of the
/// projected scatters (off-diagonals are dropped).
ConditionStats EstimateConditionStats(std::span<const LabeledVector> vectors,
                                      const Projection &frame,
                                      std::string condition = "");

/// Fits the condition's own projection (d_out = 0 means full rank) and its
/// statistics in that frame.
ConditionStats FitConditionStats(std::span<const LabeledVector> vectors,
                                 std::string condition, std::size_t d_out = 0);

struct PooledSet {
  VectorSet vectors;
  std::optional<std::string> warning;
};

/// Union of two vector sets; condition labels are kept. Rejects duplicate
/// utterance ids and warns when the speaker sets do not overlap.
PooledSet PoolConditions(std::span<const LabeledVector> first,
                         std::span<const LabeledVector> second);

}  // namespace nlsd

#endif  // NLSD_STATS_H_
