// src/scoring.cc

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

#include "nlsd/scoring.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>
#include <unordered_map>

namespace nlsd {

namespace {

constexpr std::array<std::pair<Variant, std::string_view>, 6> kVariantNames{{
    {Variant::kBaseline, "baseline"},
    {Variant::kGsc, "gsc"},
    {Variant::kWva, "wva"},
    {Variant::kSdlt, "sdlt"},
    {Variant::kMct, "mct"},
    {Variant::kCat, "cat"},
}};

void CheckDim(const Vector &x, std::size_t dim, const char *what) {
  if (static_cast<std::size_t>(x.size()) != dim) {
    throw Error(std::string(what) + ": expected dimension " + std::to_string(dim) +
                ", got " + std::to_string(x.size()));
  }
}

}  // namespace

std::string_view VariantName(Variant v) {
  for (const auto &[variant, name] : kVariantNames)
    if (variant == v) return name;
  return "unknown";
}

Variant ParseVariant(std::string_view name) {
  for (const auto &[variant, n] : kVariantNames)
    if (n == name) return variant;
  throw Error("unknown scorer variant '" + std::string(name) + "'");
}

const std::vector<Variant> &AllVariants() {
  static const std::vector<Variant> all{Variant::kBaseline, Variant::kGsc,
                                        Variant::kWva,      Variant::kSdlt,
                                        Variant::kMct,      Variant::kCat};
  return all;
}

AffineTransform AffineTransform::Identity(std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  AffineTransform t;
  t.m = Matrix::Identity(d, d);
  t.b = Vector::Zero(d);
  return t;
}

double ConditionNumber(const Matrix &m) {
  if (m.size() == 0) return 1.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto &s = svd.singularValues();
  const double smin = s[s.size() - 1];
  if (smin <= 0.0) return std::numeric_limits<double>::infinity();
  return s[0] / smin;
}

Vector PosteriorVariance(const ConditionStats &stats, std::size_t n) {
  const double nk = static_cast<double>(n);
  const Vector &eps = stats.between;
  const Vector &sig = stats.within;
  return (eps.cwiseProduct(sig).array() / (nk * eps.array() + sig.array())).matrix();
}

EnrollmentModel EnrollFromAverage(std::string speaker, const Vector &centered_average,
                                  std::size_t n, const ConditionStats &stats) {
  if (n == 0) throw Error("enrollment of '" + speaker + "' has no vectors");
  CheckDim(centered_average, stats.Dim(), "enrollment average");
  const double nk = static_cast<double>(n);
  const Vector &eps = stats.between;
  const Vector &sig = stats.within;
  EnrollmentModel model;
  model.speaker = std::move(speaker);
  model.n = n;
  model.condition = stats.condition;
  const Vector gain = (nk * eps.array() / (nk * eps.array() + sig.array())).matrix();
  model.mu_tilde = gain.cwiseProduct(centered_average);
  model.pred_var = sig + PosteriorVariance(stats, n);
  return model;
}

EnrollmentModel Enroll(std::span<const LabeledVector> vectors,
                       const ConditionStats &stats) {
  if (vectors.empty()) throw Error("empty enrollment set");
  Vector sum = Vector::Zero(static_cast<Eigen::Index>(stats.Dim()));
  for (const auto &v : vectors) sum += stats.Center(v.vec);
  return EnrollFromAverage(vectors.front().speaker,
                           sum / static_cast<double>(vectors.size()),
                           vectors.size(), stats);
}

std::vector<EnrollmentModel> EnrollAll(std::span<const LabeledVector> vectors,
                                       const ConditionStats &stats) {
  std::vector<EnrollmentModel> models;
  for (const auto &[speaker, idx] : GroupBySpeaker(vectors)) {
    VectorSet subset;
    subset.reserve(idx.size());
    for (auto i : idx) subset.push_back(vectors[i]);
    models.push_back(Enroll(subset, stats));
  }
  return models;
}

double LogNlMatched(const EnrollmentModel &model, const Vector &x,
                    const ConditionStats &stats) {
  CheckDim(x, stats.Dim(), "test vector");
  CheckDim(model.mu_tilde, stats.Dim(), "enrollment model");
  const Vector marginal = stats.between + stats.within;
  return LogGaussianDiag(x, model.mu_tilde, model.pred_var) -
         LogGaussianDiag(x, marginal);
}

double LogNlGsc(const EnrollmentModel &model, const Vector &x_raw,
                const ConditionStats &enroll_stats, const Vector &shift) {
  CheckDim(shift, enroll_stats.Dim(), "global shift");
  CheckDim(x_raw, enroll_stats.Dim(), "test vector");
  const Vector x = x_raw + shift - enroll_stats.mean;
  return LogNlMatched(model, x, enroll_stats);
}

double LogNlWva(const EnrollmentModel &model, const Vector &x,
                const ConditionStats &enroll_stats, const Vector &test_within) {
  CheckDim(x, enroll_stats.Dim(), "test vector");
  CheckDim(test_within, enroll_stats.Dim(), "test within-speaker variance");
  if ((test_within.array() <= 0.0).any())
    throw Error("test within-speaker variance must be positive");
  const Vector likelihood_var = test_within + PosteriorVariance(enroll_stats, model.n);
  const Vector marginal = enroll_stats.between + test_within;
  return LogGaussianDiag(x, model.mu_tilde, likelihood_var) -
         LogGaussianDiag(x, marginal);
}

NlTerms SdltTerms(const EnrollmentModel &model, const Vector &x_hat,
                  const ConditionStats &enroll_stats,
                  const ConditionStats &test_stats,
                  const AffineTransform &transform) {
  CheckDim(x_hat, test_stats.Dim(), "test vector");
  const Vector y = transform.Apply(x_hat);
  CheckDim(y, enroll_stats.Dim(), "transformed test vector");
  return {LogGaussianDiag(y, model.mu_tilde, model.pred_var),
          LogGaussianDiag(x_hat, test_stats.between + test_stats.within)};
}

double LogNlSdlt(const EnrollmentModel &model, const Vector &x_hat,
                 const ConditionStats &enroll_stats,
                 const ConditionStats &test_stats,
                 const AffineTransform &transform) {
  return SdltTerms(model, x_hat, enroll_stats, test_stats, transform).Score();
}

NlTerms CatTerms(const EnrollmentModel &model, const Vector &x_hat,
                 const ConditionStats &enroll_stats,
                 const AffineTransform &transform) {
  const Vector y = transform.Apply(x_hat);
  CheckDim(y, enroll_stats.Dim(), "transformed test vector");
  return {LogGaussianDiag(y, model.mu_tilde, model.pred_var),
          LogGaussianDiag(y, enroll_stats.between + enroll_stats.within)};
}

double LogNlCat(const EnrollmentModel &model, const Vector &x_hat,
                const ConditionStats &enroll_stats,
                const AffineTransform &transform) {
  return CatTerms(model, x_hat, enroll_stats, transform).Score();
}

Vector GlobalShift(const ConditionStats &enroll_stats,
                   const ConditionStats &test_stats_in_enroll_frame) {
  if (!SameFrame(enroll_stats.frame, test_stats_in_enroll_frame.frame))
    throw Error("global shift needs both statistics in the enrollment frame");
  return enroll_stats.mean - test_stats_in_enroll_frame.mean;
}

void ScorerConfig::Validate() const {
  const auto name = std::string(VariantName(variant));
  auto need_test = [&] {
    if (!test_stats) throw Error("variant '" + name + "' requires test-condition statistics");
  };
  auto need_transform = [&] {
    if (!transform) throw Error("variant '" + name + "' requires a transform");
    if (static_cast<std::size_t>(transform->m.rows()) != enroll_stats.Dim() ||
        static_cast<std::size_t>(transform->m.cols()) != test_stats->Dim() ||
        transform->Dim() != enroll_stats.Dim()) {
      throw Error("transform dimensions do not match the statistics");
    }
    if (!transform->m.allFinite() || !transform->b.allFinite())
      throw Error("transform has non-finite entries");
  };
  switch (variant) {
    case Variant::kBaseline:
    case Variant::kMct:
      break;
    case Variant::kGsc:
      if (!shift) throw Error("variant 'gsc' requires a global shift");
      CheckDim(*shift, enroll_stats.Dim(), "global shift");
      break;
    case Variant::kWva:
      need_test();
      if (!SameFrame(test_stats->frame, enroll_stats.frame))
        throw Error("variant 'wva' requires test statistics in the enrollment frame");
      break;
    case Variant::kSdlt:
    case Variant::kCat:
      need_test();
      need_transform();
      break;
  }
}

Vector ScorerConfig::PrepareTest(const Vector &raw) const {
  switch (variant) {
    case Variant::kGsc:
      return enroll_stats.frame.Apply(raw);
    case Variant::kSdlt:
    case Variant::kCat:
      return test_stats->Center(raw);
    default:
      return enroll_stats.Center(raw);
  }
}

double ScorerConfig::Score(const EnrollmentModel &model, const Vector &prepared) const {
  switch (variant) {
    case Variant::kBaseline:
    case Variant::kMct:
      return LogNlMatched(model, prepared, enroll_stats);
    case Variant::kGsc:
      return LogNlGsc(model, prepared, enroll_stats, *shift);
    case Variant::kWva:
      return LogNlWva(model, prepared, enroll_stats, test_stats->within);
    case Variant::kSdlt:
      return LogNlSdlt(model, prepared, enroll_stats, *test_stats, *transform);
    case Variant::kCat:
      return LogNlCat(model, prepared, enroll_stats, *transform);
  }
  throw Error("unhandled scorer variant");
}

std::vector<ScoreRecord> ScoreTrials(const ScorerConfig &config,
                                     std::span<const EnrollmentModel> models,
                                     std::span<const Trial> trials,
                                     std::span<const LabeledVector> test_vectors,
                                     std::size_t threads) {
  config.Validate();
  std::unordered_map<std::string, std::size_t> model_index;
  for (std::size_t i = 0; i < models.size(); ++i) model_index.emplace(models[i].speaker, i);
  std::unordered_map<std::string, std::size_t> test_index;
  for (std::size_t i = 0; i < test_vectors.size(); ++i)
    test_index.emplace(test_vectors[i].utt_id, i);

  std::vector<std::pair<std::size_t, std::size_t>> refs;
  refs.reserve(trials.size());
  for (const auto &t : trials) {
    auto m = model_index.find(t.enroll_speaker);
    auto u = test_index.find(t.test_utt);
    if (m == model_index.end() || u == test_index.end()) {
      throw Error("trial (" + t.enroll_speaker + ", " + t.test_utt + ") references " +
                  (m == model_index.end() ? "unknown speaker model" : "unknown test utterance"));
    }
    refs.emplace_back(m->second, u->second);
  }

  std::vector<Vector> prepared(test_vectors.size());
  std::vector<bool> used(test_vectors.size(), false);
  for (const auto &r : refs) used[r.second] = true;
  for (std::size_t i = 0; i < test_vectors.size(); ++i)
    if (used[i]) prepared[i] = config.PrepareTest(test_vectors[i].vec);

  std::vector<ScoreRecord> out(trials.size());
  std::vector<std::exception_ptr> failures(std::max<std::size_t>(threads, 1));
  auto work = [&](std::size_t slot, std::size_t begin, std::size_t end) {
    try {
      for (std::size_t i = begin; i < end; ++i) {
        const auto [mi, ti] = refs[i];
        out[i] = {trials[i].enroll_speaker, trials[i].test_utt,
                  config.Score(models[mi], prepared[ti])};
      }
    } catch (...) {
      failures[slot] = std::current_exception();
    }
  };
  const std::size_t workers = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(1, trials.size()));
  if (workers == 1) {
    work(0, 0, trials.size());
  } else {
    std::vector<std::jthread> pool;
    const std::size_t block = (trials.size() + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = w * block;
      const std::size_t end = std::min(trials.size(), begin + block);
      if (begin >= end) break;
      pool.emplace_back(work, w, begin, end);
    }
  }
  for (const auto &f : failures)
    if (f) std::rethrow_exception(f);
  for (const auto &r : out) {
    if (!std::isfinite(r.score)) {
      throw Error("non-finite score for trial (" + r.enroll_speaker + ", " + r.test_utt + ")");
    }
  }
  return out;
}

}  // namespace nlsd
