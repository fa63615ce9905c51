// src/common.cc

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

#include "nlsd/common.h"

#include <cmath>
#include <map>

namespace nlsd {

std::size_t CommonDimension(std::span<const LabeledVector> vectors) {
  if (vectors.empty()) throw Error("empty vector set");
  const auto dim = static_cast<std::size_t>(vectors.front().vec.size());
  for (const auto &v : vectors) {
    if (static_cast<std::size_t>(v.vec.size()) != dim) {
      throw Error("dimension mismatch: utterance '" + v.utt_id + "' has " +
                  std::to_string(v.vec.size()) + " entries, expected " +
                  std::to_string(dim));
    }
  }
  return dim;
}

std::vector<std::pair<std::string, std::vector<std::size_t>>> GroupBySpeaker(
    std::span<const LabeledVector> vectors) {
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < vectors.size(); ++i)
    groups[vectors[i].speaker].push_back(i);
  return {groups.begin(), groups.end()};
}

double LogGaussianDiag(const Vector &x, const Vector &mean,
                       const Vector &variance) {
  if (x.size() != mean.size() || x.size() != variance.size())
    throw Error("dimension mismatch in Gaussian evaluation");
  constexpr double kLog2Pi = 1.8378770664093454836;  // log(2 pi)
  double acc = 0.0;
  for (Eigen::Index d = 0; d < x.size(); ++d) {
    const double r = x[d] - mean[d];
    acc += kLog2Pi + std::log(variance[d]) + r * r / variance[d];
  }
  return -0.5 * acc;
}

double LogGaussianDiag(const Vector &x, const Vector &variance) {
  return LogGaussianDiag(x, Vector::Zero(x.size()), variance);
}

}  // namespace nlsd
