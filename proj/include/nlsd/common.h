// include/nlsd/common.h

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

#ifndef NLSD_COMMON_H_
#define NLSD_COMMON_H_

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace nlsd {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Raised for every domain-level failure (bad input data, degenerate
/// statistics, non-finite scores). The CLI maps it to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One speaker embedding with its bookkeeping labels.
struct LabeledVector {
  std::string utt_id;
  std::string speaker;
  std::string condition;
  Vector vec;
};

using VectorSet = std::vector<LabeledVector>;

/// Dimension shared by all vectors of a set; throws on mismatch or empty set.
std::size_t CommonDimension(std::span<const LabeledVector> vectors);

/// Indices of the vectors grouped by speaker, speakers in lexical order.
std::vector<std::pair<std::string, std::vector<std::size_t>>> GroupBySpeaker(
    std::span<const LabeledVector> vectors);

/// Diagonal Gaussian log density, normalizing constant included.
double LogGaussianDiag(const Vector &x, const Vector &mean,
                       const Vector &variance);

/// Same as above with a zero mean.
double LogGaussianDiag(const Vector &x, const Vector &variance);

}  // namespace nlsd

#endif  // NLSD_COMMON_H_
