// include/nlsd/sim.h

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

// Synthetic speaker populations under the linear Gaussian model, with an
// enrollment condition and a mismatched test condition.
//
// Each speaker mean is mu_k ~ N(0, diag(between)); enrollment vectors are
// offset + mu_k + N(0, diag(within)). A test vector starts as
// offset + mu_k + N(0, diag(test within)) and is then pushed through the
// inverse of the recovery map, so M* x_test + b* lands back on the
// enrollment-condition draw.
//
// Random streams for speaker means, enrollment noise and test noise are
// separate, so two specs that differ only in the mismatch share every draw.

#ifndef NLSD_SIM_H_
#define NLSD_SIM_H_

#include <cstdint>
#include <string>

#include "nlsd/common.h"

namespace nlsd {

enum class MismatchKind { kNone, kShift, kWithinScale, kAffine };

struct Mismatch {
  MismatchKind kind = MismatchKind::kNone;
  Vector shift;         // kShift: enrollment mean - test mean
  Vector within_scale;  // kWithinScale: gamma per dimension
  Matrix affine;        // kAffine: test = affine * x + affine_offset
  Vector affine_offset;
  Vector affine_within_scale;  // kAffine: optional gamma (empty = 1)
};

struct SimSpec {
  std::size_t dim = 0;
  std::size_t n_speakers = 0;
  std::size_t n_enroll = 0;  // per speaker
  std::size_t n_test = 0;    // per speaker
  Vector between;            // epsilon per dimension
  Vector within;             // sigma per dimension
  Vector offset;             // global mean shared by both conditions (empty = 0)
  Mismatch mismatch;
  std::uint64_t seed = 0;
  std::string enroll_condition = "enroll";
  std::string test_condition = "test";

  void Validate() const;
};

/// Test -> enrollment recovery map and the statistics the test condition has
/// in its own raw coordinates.
struct GroundTruth {
  Matrix m;
  Vector b;
  Vector test_within_pre;  // within-speaker variance before the map (sigma-hat)
  Matrix test_between_cov;
  Matrix test_within_cov;
};

struct SimData {
  VectorSet enroll;
  VectorSet test;
  GroundTruth truth;
};

SimData Generate(const SimSpec &spec);

/// Convenience constructors for the common cases.
SimSpec IsotropicSpec(std::size_t dim, std::size_t n_speakers, std::size_t n_enroll,
                      std::size_t n_test, double between, double within,
                      std::uint64_t seed);
Mismatch ShiftMismatch(const Vector &shift);
Mismatch WithinScaleMismatch(const Vector &gamma);
Mismatch AffineMismatch(const Matrix &a, const Vector &offset, const Vector &gamma = {});

/// Random direction scaled to `norm`.
Vector RandomShift(std::size_t dim, double norm, std::uint64_t seed);

/// Q1 diag(s) Q2^T with singular values spread geometrically over
/// [1, condition] and Haar-random orthogonal factors.
Matrix RandomConditionedMatrix(std::size_t dim, double condition, std::uint64_t seed);

enum class SplitMode { kSpeakerDisjoint, kSpeakerShared };

struct Split {
  VectorSet dev;
  VectorSet eval;
};

/// Speaker-disjoint: a `fraction` of the speakers (lexical order, then
/// shuffled by `seed`) goes to dev. Speaker-shared: every speaker keeps a
/// `fraction` of its own vectors on the dev side and the rest on eval.
/// The same seed and speaker set always give the same partition.
Split SplitParallel(std::span<const LabeledVector> vectors, double fraction,
                    std::uint64_t seed, SplitMode mode);

}  // namespace nlsd

#endif  // NLSD_SIM_H_
