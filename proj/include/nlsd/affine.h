// include/nlsd/affine.h

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

#ifndef NLSD_AFFINE_H_
#define NLSD_AFFINE_H_

#include <string>

#include "nlsd/common.h"

namespace nlsd {

/// x_enroll = M * x_test + b, both sides centered and expressed in their
/// condition's own frame. M is not constrained to be invertible.
struct AffineTransform {
  Matrix m;
  Vector b;
  std::string source_condition;  // test condition (frame of the input)
  std::string target_condition;  // enrollment condition
  double objective = 0.0;        // value of the training objective at (m, b)
  double condition_number = 1.0;

  Vector Apply(const Vector &x) const { return m * x + b; }
  std::size_t Dim() const { return static_cast<std::size_t>(b.size()); }

  static AffineTransform Identity(std::size_t dim);
};

/// 2-norm condition number of `m` (infinity when singular).
double ConditionNumber(const Matrix &m);

}  // namespace nlsd

#endif  // NLSD_AFFINE_H_
