// include/nlsd/scoring.h

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

// Normalized-likelihood scoring. Every scorer returns an exact log density
// difference, log p_k(x) - log p(x), normalizing constants included, so that
// scores of speakers with different enrollment counts stay comparable.
//
// Coordinates: unless stated otherwise a test vector is projected into the
// enrollment frame and centered by the enrollment mean. The SD/LT and CAT
// scorers take vectors in the test frame centered by the test mean, which is
// the input space of the learned AffineTransform.

#ifndef NLSD_SCORING_H_
#define NLSD_SCORING_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nlsd/affine.h"
#include "nlsd/common.h"
#include "nlsd/stats.h"

namespace nlsd {

/// Posterior summary of one enrolled speaker.
struct EnrollmentModel {
  std::string speaker;
  Vector mu_tilde;  // n eps / (n eps + sigma) * centered enrollment average
  Vector pred_var;  // sigma + eps sigma / (n eps + sigma)
  std::size_t n = 0;
  std::string condition;  // condition whose frame the model lives in
};

enum class Variant { kBaseline, kGsc, kWva, kSdlt, kMct, kCat };

std::string_view VariantName(Variant v);
Variant ParseVariant(std::string_view name);
const std::vector<Variant> &AllVariants();

/// Per-dimension posterior variance of the speaker mean, eps sigma / (n eps + sigma).
Vector PosteriorVariance(const ConditionStats &stats, std::size_t n);

EnrollmentModel Enroll(std::span<const LabeledVector> vectors,
                       const ConditionStats &stats);
EnrollmentModel EnrollFromAverage(std::string speaker, const Vector &centered_average,
                                  std::size_t n, const ConditionStats &stats);
/// One model per speaker, speakers in lexical order.
std::vector<EnrollmentModel> EnrollAll(std::span<const LabeledVector> vectors,
                                       const ConditionStats &stats);

struct NlTerms {
  double likelihood = 0.0;     // log p_k(.)
  double normalization = 0.0;  // log p(.)
  double Score() const { return likelihood - normalization; }
};

double LogNlMatched(const EnrollmentModel &model, const Vector &x,
                    const ConditionStats &stats);

/// `x_raw` is in the enrollment frame but not centered; the score is the
/// matched score at (x_raw + shift) - mean.
double LogNlGsc(const EnrollmentModel &model, const Vector &x_raw,
                const ConditionStats &enroll_stats, const Vector &shift);

double LogNlWva(const EnrollmentModel &model, const Vector &x,
                const ConditionStats &enroll_stats, const Vector &test_within);

NlTerms SdltTerms(const EnrollmentModel &model, const Vector &x_hat,
                  const ConditionStats &enroll_stats,
                  const ConditionStats &test_stats,
                  const AffineTransform &transform);
double LogNlSdlt(const EnrollmentModel &model, const Vector &x_hat,
                 const ConditionStats &enroll_stats,
                 const ConditionStats &test_stats,
                 const AffineTransform &transform);

NlTerms CatTerms(const EnrollmentModel &model, const Vector &x_hat,
                 const ConditionStats &enroll_stats,
                 const AffineTransform &transform);
double LogNlCat(const EnrollmentModel &model, const Vector &x_hat,
                const ConditionStats &enroll_stats,
                const AffineTransform &transform);

/// b = enrollment mean - test mean, both in the enrollment frame.
Vector GlobalShift(const ConditionStats &enroll_stats,
                   const ConditionStats &test_stats_in_enroll_frame);

/**
   Everything one scorer variant needs.

     baseline, mct : enroll_stats (for mct, the pooled-condition stats)
     gsc           : enroll_stats, shift
     wva           : enroll_stats, test_stats in the enrollment frame
     sdlt          : enroll_stats, test_stats in the test frame, transform
     cat           : enroll_stats, test_stats in the test frame (centering
                     only), transform
*/
struct ScorerConfig {
  Variant variant = Variant::kBaseline;
  ConditionStats enroll_stats;
  std::optional<ConditionStats> test_stats;
  std::optional<AffineTransform> transform;
  std::optional<Vector> shift;

  /// Throws when a field required by `variant` is missing or inconsistent.
  void Validate() const;
  /// Maps a raw test vector into the coordinates the variant's scorer takes.
  Vector PrepareTest(const Vector &raw) const;
  double Score(const EnrollmentModel &model, const Vector &prepared) const;
};

struct Trial {
  std::string enroll_speaker;
  std::string test_utt;
  bool is_target = false;
};

struct ScoreRecord {
  std::string enroll_speaker;
  std::string test_utt;
  double score = 0.0;
};

/// One score per trial in trial order. Work is split into contiguous blocks
/// over `threads` workers; the result does not depend on `threads`.
std::vector<ScoreRecord> ScoreTrials(const ScorerConfig &config,
                                     std::span<const EnrollmentModel> models,
                                     std::span<const Trial> trials,
                                     std::span<const LabeledVector> test_vectors,
                                     std::size_t threads = 1);

}  // namespace nlsd

#endif  // NLSD_SCORING_H_
