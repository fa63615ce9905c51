// include/nlsd/eval.h

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

// Trial lists, equal error rate and the condition-pair x scorer grid.
//
// EER convention: thresholds are swept upward over the distinct scores;
// FRR(t) counts targets below t, FAR(t) nontargets at or above t. The value
// is (FRR + FAR) / 2 at the first threshold where FRR >= FAR, and 0.5 when
// no score threshold reaches that point (the crossing then sits above every
// score, where FRR = 1 and FAR = 0).

#ifndef NLSD_EVAL_H_
#define NLSD_EVAL_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nlsd/common.h"
#include "nlsd/scoring.h"
#include "nlsd/transform.h"

namespace nlsd {

struct TrialSampling {
  std::size_t n = 0;
  std::uint64_t seed = 0;
};

/// Exhaustive cross product of `speakers` and `test` (speaker-major, test
/// order kept), or a seeded subsample of `n` trials that keeps at least one
/// target per speaker. The subsample is returned in cross-product order.
std::vector<Trial> BuildTrials(std::span<const std::string> speakers,
                               std::span<const LabeledVector> test,
                               std::optional<TrialSampling> sampling = std::nullopt);

/// EER as a fraction.
double ComputeEer(std::span<const double> target, std::span<const double> nontarget);

/// Joins scores to trial labels by (speaker, utterance). Every score must
/// have a label.
std::pair<std::vector<double>, std::vector<double>> SplitByLabel(
    std::span<const ScoreRecord> scores, std::span<const Trial> trials);

struct TransformOptions {
  Objective objective = Objective::kDensity;
  bool closed_form = false;
  AdamConfig adam = [] {
    AdamConfig c;
    c.warm_start = true;
    c.objective = Objective::kDensity;
    return c;
  }();
};

/// Parallel dev data -> transform. Fits the test-condition frame on
/// `test_dev`, enrolls every dev speaker from `enroll_dev` under
/// `enroll_stats` and maximizes the chosen objective.
struct TrainedTransform {
  ConditionStats test_stats;  // test frame
  FitResult fit;
};
TrainedTransform TrainTransform(const ConditionStats &enroll_stats,
                                std::span<const LabeledVector> enroll_dev,
                                std::span<const LabeledVector> test_dev,
                                const TransformOptions &options = {});

/// Builds one ScorerConfig per variant from development data of the two
/// conditions. The enrollment frame is fit on `enroll_dev`. Work shared
/// between variants (test statistics, the transform) is done once.
std::vector<ScorerConfig> BuildScorers(std::span<const Variant> variants,
                                       std::span<const LabeledVector> enroll_dev,
                                       std::span<const LabeledVector> test_dev,
                                       const TransformOptions &options = {});

struct EvalCell {
  std::string enroll_condition;
  std::string test_condition;
  Variant variant = Variant::kBaseline;
  double eer = 0.0;  // fraction
  std::size_t n_target = 0;
  std::size_t n_nontarget = 0;
};

struct EvalReport {
  std::vector<std::pair<std::string, std::string>> meta;
  std::vector<EvalCell> cells;

  /// Cell lookup; throws when absent.
  const EvalCell &At(const std::string &enroll, const std::string &test, Variant v) const;
};

/// Enroll `enroll_eval` under the config, score `trials`, compute EER.
EvalCell EvaluateScorer(const ScorerConfig &config, std::span<const LabeledVector> enroll_eval,
                        std::span<const LabeledVector> test_eval, std::span<const Trial> trials,
                        std::size_t threads = 1);

struct ConditionData {
  std::string name;
  VectorSet dev;   // development vectors (statistics, parallel training)
  VectorSet eval;  // evaluation vectors (enrollment side: enrolled, test side: scored)
};

/// Fills the grid for one enrollment condition against each test
/// condition. A test condition with the enrollment condition's name is a
/// matched pair and gets the baseline only.
EvalReport RunMatrix(const ConditionData &enroll, std::span<const ConditionData> tests,
                     std::span<const Variant> variants,
                     std::optional<TrialSampling> sampling = std::nullopt,
                     const TransformOptions &options = {}, std::size_t threads = 1);

/// Metadata header, then one row per cell with the EER in percent.
void WriteEvalReport(std::ostream &os, const EvalReport &report);

inline constexpr const char *kEerConvention =
    "first threshold with FRR >= FAR, midpoint of FRR and FAR";

}  // namespace nlsd

#endif  // NLSD_EVAL_H_
