// include/nlsd/transform.h

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

// Maximum-likelihood estimation of the test -> enrollment affine map from
// parallel data. For sample i of speaker k the transformed vector
// M x_i + b is scored under the speaker's predictive Gaussian
// N(mu_tilde_k, diag(pred_var_k)); variances stay fixed.
//
// Two objectives share the machinery:
//   kRegression  mean predictive log-likelihood of M x + b. Its maximizer is
//                a per-dimension weighted least-squares fit.
//   kDensity     the same plus log|det M|, i.e. the log density of the test
//                vector itself. Without the Jacobian the fit regresses the
//                shrunken speaker means on noisy test vectors and M is
//                biased toward zero.

#ifndef NLSD_TRANSFORM_H_
#define NLSD_TRANSFORM_H_

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "nlsd/affine.h"
#include "nlsd/common.h"
#include "nlsd/scoring.h"
#include "nlsd/stats.h"

namespace nlsd {

enum class Objective { kRegression, kDensity };

std::string_view ObjectiveName(Objective o);
Objective ParseObjective(std::string_view name);

/// Test-frame centered vectors paired with the enrollment model of their
/// speaker (an index into the model list the batch is used with).
struct ParallelBatch {
  std::vector<Vector> inputs;
  std::vector<std::size_t> model_index;

  std::size_t Size() const { return inputs.size(); }
};

/// Centers `test_vectors` with `test_stats` and links each to the model of
/// the same speaker. Throws when a speaker has no model.
ParallelBatch MakeParallelBatch(std::span<const LabeledVector> test_vectors,
                                const ConditionStats &test_stats,
                                std::span<const EnrollmentModel> models);

double MllrObjective(const AffineTransform &transform, const ParallelBatch &batch,
                     std::span<const EnrollmentModel> models,
                     Objective objective = Objective::kRegression);

struct MllrGradient {
  Matrix dm;
  Vector db;
  double Norm() const { return std::sqrt(dm.squaredNorm() + db.squaredNorm()); }
};

MllrGradient ComputeMllrGradient(const AffineTransform &transform,
                                 const ParallelBatch &batch,
                                 std::span<const EnrollmentModel> models,
                                 Objective objective = Objective::kRegression);

struct AdamConfig {
  double step = 1e-2;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::size_t iterations = 5000;
  double tolerance = 1e-6;  // on the full-batch gradient norm
  std::size_t batch_size = 0;  // 0: full batch
  std::uint64_t seed = 0;      // minibatch order
  std::size_t patience = 50;   // consecutive decreases tolerated
  /// Start from the weighted least-squares solution instead of (I, 0).
  /// Needed for kDensity, whose log|det M| barrier keeps the ascent on the
  /// sign of det M it starts from.
  bool warm_start = false;
  Objective objective = Objective::kRegression;
};

struct FitResult {
  AffineTransform transform;
  std::vector<double> trace;  // objective after each iteration
  std::size_t iterations = 0;
  double gradient_norm = 0.0;
  bool converged = false;
};

/// Thrown when the objective falls for `patience` consecutive steps.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string &what, std::vector<double> trace)
      : Error(what), trace_(std::move(trace)) {}
  const std::vector<double> &Trace() const { return trace_; }

 private:
  std::vector<double> trace_;
};

FitResult FitTransformGd(const ParallelBatch &batch,
                         std::span<const EnrollmentModel> models,
                         const AdamConfig &config = {});

/**
   Exact maximizer. For kRegression each output dimension is solved by its
   weighted normal equations. For kDensity the rows are updated in turn by
   their closed-form constrained-MLLR optimum (quadratic in the cofactor
   scale) until the parameters stop moving, starting from the kRegression
   solution.
*/
FitResult FitTransformClosedForm(const ParallelBatch &batch,
                                 std::span<const EnrollmentModel> models,
                                 Objective objective = Objective::kRegression);

}  // namespace nlsd

#endif  // NLSD_TRANSFORM_H_
