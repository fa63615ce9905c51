// src/sim.cc

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

#include "nlsd/sim.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

namespace nlsd {

namespace {

enum Stream : std::uint32_t {
  kSpeakerMeans = 1,
  kEnrollNoise = 2,
  kTestNoise = 3,
  kShiftDirection = 4,
  kOrthogonal = 5,
  kSplit = 6,
};

std::mt19937_64 MakeEngine(std::uint64_t seed, Stream stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream)};
  return std::mt19937_64(seq);
}

Vector Normal(std::mt19937_64 &engine, std::normal_distribution<double> &dist,
              Eigen::Index dim) {
  Vector z(dim);
  for (Eigen::Index i = 0; i < dim; ++i) z[i] = dist(engine);
  return z;
}

std::string Padded(std::size_t value, int width) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%0*zu", width, value);
  return buf;
}

int Width(std::size_t count, int minimum) {
  int w = 1;
  for (std::size_t c = count; c >= 10; c /= 10) ++w;
  return std::max(w, minimum);
}

void CheckPositive(const Vector &v, std::size_t dim, const char *what) {
  if (static_cast<std::size_t>(v.size()) != dim)
    throw Error(std::string(what) + " must have " + std::to_string(dim) + " entries");
  if (!v.allFinite() || (v.array() <= 0.0).any())
    throw Error(std::string(what) + " must be strictly positive");
}

Matrix HaarOrthogonal(std::mt19937_64 &engine, Eigen::Index dim) {
  std::normal_distribution<double> dist;
  Matrix g(dim, dim);
  for (Eigen::Index c = 0; c < dim; ++c)
    for (Eigen::Index r = 0; r < dim; ++r) g(r, c) = dist(engine);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < dim; ++i)
    if (r(i, i) < 0) q.col(i) = -q.col(i);
  return q;
}

}  // namespace

void SimSpec::Validate() const {
  if (dim == 0) throw Error("simulation dimension must be positive");
  if (n_speakers == 0 || n_enroll == 0 || n_test == 0)
    throw Error("speaker and per-speaker counts must be positive");
  CheckPositive(between, dim, "between-speaker variance");
  CheckPositive(within, dim, "within-speaker variance");
  if (offset.size() != 0 && static_cast<std::size_t>(offset.size()) != dim)
    throw Error("offset must have " + std::to_string(dim) + " entries");
  const auto d = static_cast<Eigen::Index>(dim);
  switch (mismatch.kind) {
    case MismatchKind::kNone:
      break;
    case MismatchKind::kShift:
      if (mismatch.shift.size() != d || !mismatch.shift.allFinite())
        throw Error("shift mismatch needs a finite vector of dimension " + std::to_string(dim));
      break;
    case MismatchKind::kWithinScale:
      CheckPositive(mismatch.within_scale, dim, "within-variance scale");
      break;
    case MismatchKind::kAffine:
      if (mismatch.affine.rows() != d || mismatch.affine.cols() != d ||
          mismatch.affine_offset.size() != d)
        throw Error("affine mismatch needs a square matrix and offset of dimension " +
                    std::to_string(dim));
      if (!Eigen::FullPivLU<Matrix>(mismatch.affine).isInvertible())
        throw Error("affine mismatch matrix must be invertible");
      if (mismatch.affine_within_scale.size() != 0)
        CheckPositive(mismatch.affine_within_scale, dim, "affine within-variance scale");
      break;
  }
}

SimData Generate(const SimSpec &spec) {
  spec.Validate();
  const auto d = static_cast<Eigen::Index>(spec.dim);
  const Vector offset = spec.offset.size() == 0 ? Vector::Zero(d) : spec.offset;
  const Vector between_sd = spec.between.cwiseSqrt();
  const Vector within_sd = spec.within.cwiseSqrt();

  const Mismatch &mm = spec.mismatch;
  Vector test_within = spec.within;
  Matrix forward = Matrix::Identity(d, d);
  Vector forward_offset = Vector::Zero(d);
  switch (mm.kind) {
    case MismatchKind::kNone:
      break;
    case MismatchKind::kShift:
      forward_offset = -mm.shift;
      break;
    case MismatchKind::kWithinScale:
      test_within = spec.within.cwiseProduct(mm.within_scale);
      break;
    case MismatchKind::kAffine:
      forward = mm.affine;
      forward_offset = mm.affine_offset;
      if (mm.affine_within_scale.size() != 0)
        test_within = spec.within.cwiseProduct(mm.affine_within_scale);
      break;
  }
  const Vector test_within_sd = test_within.cwiseSqrt();

  SimData data;
  const Matrix inverse = forward.inverse();
  data.truth.m = inverse;
  data.truth.b = -inverse * forward_offset;
  data.truth.test_within_pre = test_within;
  data.truth.test_between_cov = forward * spec.between.asDiagonal() * forward.transpose();
  data.truth.test_within_cov = forward * test_within.asDiagonal() * forward.transpose();

  auto means_engine = MakeEngine(spec.seed, kSpeakerMeans);
  auto enroll_engine = MakeEngine(spec.seed, kEnrollNoise);
  auto test_engine = MakeEngine(spec.seed, kTestNoise);
  std::normal_distribution<double> means_dist, enroll_dist, test_dist;

  const int spk_width = Width(spec.n_speakers, 4);
  const int utt_width = Width(std::max(spec.n_enroll, spec.n_test), 3);
  data.enroll.reserve(spec.n_speakers * spec.n_enroll);
  data.test.reserve(spec.n_speakers * spec.n_test);
  for (std::size_t k = 0; k < spec.n_speakers; ++k) {
    const std::string speaker = "spk" + Padded(k + 1, spk_width);
    const Vector mu = offset + between_sd.cwiseProduct(Normal(means_engine, means_dist, d));
    for (std::size_t i = 0; i < spec.n_enroll; ++i) {
      data.enroll.push_back(
          {speaker + "-" + spec.enroll_condition + "-" + Padded(i + 1, utt_width), speaker,
           spec.enroll_condition,
           mu + within_sd.cwiseProduct(Normal(enroll_engine, enroll_dist, d))});
    }
    for (std::size_t i = 0; i < spec.n_test; ++i) {
      const Vector pre = mu + test_within_sd.cwiseProduct(Normal(test_engine, test_dist, d));
      Vector x = mm.kind == MismatchKind::kAffine ? Vector(forward * pre) : pre;
      x += forward_offset;
      data.test.push_back({speaker + "-" + spec.test_condition + "-" + Padded(i + 1, utt_width),
                           speaker, spec.test_condition, std::move(x)});
    }
  }
  return data;
}

SimSpec IsotropicSpec(std::size_t dim, std::size_t n_speakers, std::size_t n_enroll,
                      std::size_t n_test, double between, double within,
                      std::uint64_t seed) {
  const auto d = static_cast<Eigen::Index>(dim);
  SimSpec spec;
  spec.dim = dim;
  spec.n_speakers = n_speakers;
  spec.n_enroll = n_enroll;
  spec.n_test = n_test;
  spec.between = Vector::Constant(d, between);
  spec.within = Vector::Constant(d, within);
  spec.seed = seed;
  return spec;
}

Mismatch ShiftMismatch(const Vector &shift) {
  Mismatch m;
  m.kind = MismatchKind::kShift;
  m.shift = shift;
  return m;
}

Mismatch WithinScaleMismatch(const Vector &gamma) {
  Mismatch m;
  m.kind = MismatchKind::kWithinScale;
  m.within_scale = gamma;
  return m;
}

Mismatch AffineMismatch(const Matrix &a, const Vector &offset, const Vector &gamma) {
  Mismatch m;
  m.kind = MismatchKind::kAffine;
  m.affine = a;
  m.affine_offset = offset;
  m.affine_within_scale = gamma;
  return m;
}

Vector RandomShift(std::size_t dim, double norm, std::uint64_t seed) {
  auto engine = MakeEngine(seed, kShiftDirection);
  std::normal_distribution<double> dist;
  Vector z = Normal(engine, dist, static_cast<Eigen::Index>(dim));
  return z.normalized() * norm;
}

Matrix RandomConditionedMatrix(std::size_t dim, double condition, std::uint64_t seed) {
  if (dim == 0 || !(condition >= 1.0)) throw Error("condition number must be >= 1");
  const auto d = static_cast<Eigen::Index>(dim);
  auto engine = MakeEngine(seed, kOrthogonal);
  const Matrix q1 = HaarOrthogonal(engine, d);
  const Matrix q2 = HaarOrthogonal(engine, d);
  Vector s(d);
  for (Eigen::Index i = 0; i < d; ++i)
    s[i] = d == 1 ? 1.0 : std::pow(condition, static_cast<double>(i) / static_cast<double>(d - 1));
  return q1 * s.asDiagonal() * q2.transpose();
}

Split SplitParallel(std::span<const LabeledVector> vectors, double fraction,
                    std::uint64_t seed, SplitMode mode) {
  if (!(fraction > 0.0 && fraction < 1.0)) throw Error("split fraction must be in (0, 1)");
  auto engine = MakeEngine(seed, kSplit);
  const auto groups = GroupBySpeaker(vectors);
  std::vector<bool> to_dev(vectors.size(), false);

  if (mode == SplitMode::kSpeakerDisjoint) {
    std::vector<std::size_t> order(groups.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), engine);
    const auto n_dev = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(groups.size())));
    if (n_dev == 0 || n_dev >= groups.size())
      throw Error("split fraction leaves one side without speakers");
    for (std::size_t i = 0; i < n_dev; ++i)
      for (auto idx : groups[order[i]].second) to_dev[idx] = true;
  } else {
    for (const auto &[speaker, idx] : groups) {
      std::vector<std::size_t> shuffled = idx;
      std::shuffle(shuffled.begin(), shuffled.end(), engine);
      const auto n_dev = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(idx.size())));
      if (n_dev == 0 || n_dev >= idx.size())
        throw Error("split fraction leaves speaker '" + speaker + "' on one side only");
      for (std::size_t i = 0; i < n_dev; ++i) to_dev[shuffled[i]] = true;
    }
  }

  Split split;
  for (std::size_t i = 0; i < vectors.size(); ++i)
    (to_dev[i] ? split.dev : split.eval).push_back(vectors[i]);
  return split;
}

}  // namespace nlsd
