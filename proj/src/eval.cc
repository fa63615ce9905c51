// src/eval.cc

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

#include "nlsd/eval.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <set>

#include "nlsd/stats.h"

namespace nlsd {

std::vector<Trial> BuildTrials(std::span<const std::string> speakers,
                               std::span<const LabeledVector> test,
                               std::optional<TrialSampling> sampling) {
  if (speakers.empty()) throw Error("no enrolled speakers to build trials for");
  if (test.empty()) throw Error("no test vectors to build trials for");
  std::set<std::string> seen_spk, seen_utt;
  for (const auto &s : speakers)
    if (!seen_spk.insert(s).second) throw Error("speaker '" + s + "' listed twice");
  for (const auto &v : test)
    if (!seen_utt.insert(v.utt_id).second)
      throw Error("duplicate test utterance id '" + v.utt_id + "'");

  std::vector<Trial> all;
  all.reserve(speakers.size() * test.size());
  for (const auto &s : speakers)
    for (const auto &v : test) all.push_back({s, v.utt_id, v.speaker == s});
  if (!sampling || sampling->n >= all.size()) return all;

  // One guaranteed target per speaker, the rest drawn uniformly.
  std::mt19937_64 rng(sampling->seed);
  const std::size_t per = test.size();
  if (sampling->n < speakers.size())
    throw Error("sample of " + std::to_string(sampling->n) + " trials cannot cover " +
                std::to_string(speakers.size()) + " speakers");
  std::vector<bool> keep(all.size(), false);
  for (std::size_t k = 0; k < speakers.size(); ++k) {
    std::vector<std::size_t> targets;
    for (std::size_t j = 0; j < per; ++j)
      if (all[k * per + j].is_target) targets.push_back(k * per + j);
    if (targets.empty())
      throw Error("speaker '" + speakers[k] + "' has no target trial to sample");
    keep[targets[std::uniform_int_distribution<std::size_t>(0, targets.size() - 1)(rng)]] = true;
  }
  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < all.size(); ++i)
    if (!keep[i]) rest.push_back(i);
  std::shuffle(rest.begin(), rest.end(), rng);
  for (std::size_t i = 0; i < sampling->n - speakers.size(); ++i) keep[rest[i]] = true;

  std::vector<Trial> out;
  out.reserve(sampling->n);
  for (std::size_t i = 0; i < all.size(); ++i)
    if (keep[i]) out.push_back(std::move(all[i]));
  return out;
}

double ComputeEer(std::span<const double> target, std::span<const double> nontarget) {
  if (target.empty() || nontarget.empty())
    throw Error("EER needs at least one target and one nontarget score");
  std::vector<double> tar(target.begin(), target.end());
  std::vector<double> non(nontarget.begin(), nontarget.end());
  for (double s : tar)
    if (std::isnan(s)) throw Error("NaN score");
  for (double s : non)
    if (std::isnan(s)) throw Error("NaN score");
  std::sort(tar.begin(), tar.end());
  std::sort(non.begin(), non.end());
  const auto nt = static_cast<double>(tar.size());
  const auto nn = static_cast<double>(non.size());

  // i: targets below t, j: nontargets below t; t walks the merged scores.
  std::size_t i = 0, j = 0;
  while (i < tar.size() || j < non.size()) {
    double t;
    if (j == non.size() || (i < tar.size() && tar[i] <= non[j])) t = tar[i];
    else t = non[j];
    const double frr = static_cast<double>(i) / nt;
    const double far = (nn - static_cast<double>(j)) / nn;
    if (frr >= far) return 0.5 * (frr + far);
    while (i < tar.size() && tar[i] == t) ++i;
    while (j < non.size() && non[j] == t) ++j;
  }
  return 0.5;
}

std::pair<std::vector<double>, std::vector<double>> SplitByLabel(
    std::span<const ScoreRecord> scores, std::span<const Trial> trials) {
  std::map<std::pair<std::string, std::string>, bool> label;
  for (const auto &t : trials) label.emplace(std::pair(t.enroll_speaker, t.test_utt), t.is_target);
  std::pair<std::vector<double>, std::vector<double>> out;
  for (const auto &s : scores) {
    auto it = label.find({s.enroll_speaker, s.test_utt});
    if (it == label.end())
      throw Error("score for " + s.enroll_speaker + " / " + s.test_utt + " has no trial label");
    (it->second ? out.first : out.second).push_back(s.score);
  }
  return out;
}

TrainedTransform TrainTransform(const ConditionStats &enroll_stats,
                                std::span<const LabeledVector> enroll_dev,
                                std::span<const LabeledVector> test_dev,
                                const TransformOptions &options) {
  TrainedTransform out;
  out.test_stats = FitConditionStats(test_dev, "", enroll_stats.Dim());
  const auto models = EnrollAll(enroll_dev, enroll_stats);
  const ParallelBatch batch = MakeParallelBatch(test_dev, out.test_stats, models);
  if (options.closed_form) {
    out.fit = FitTransformClosedForm(batch, models, options.objective);
  } else {
    AdamConfig adam = options.adam;
    adam.objective = options.objective;
    out.fit = FitTransformGd(batch, models, adam);
  }
  out.fit.transform.source_condition = out.test_stats.condition;
  out.fit.transform.target_condition = enroll_stats.condition;
  return out;
}

std::vector<ScorerConfig> BuildScorers(std::span<const Variant> variants,
                                       std::span<const LabeledVector> enroll_dev,
                                       std::span<const LabeledVector> test_dev,
                                       const TransformOptions &options) {
  const ConditionStats enroll_stats = FitConditionStats(enroll_dev, "");
  std::optional<ConditionStats> test_in_enroll;
  std::optional<TrainedTransform> trained;
  std::optional<ConditionStats> pooled;

  std::vector<ScorerConfig> out;
  for (const Variant v : variants) {
    ScorerConfig c;
    c.variant = v;
    c.enroll_stats = enroll_stats;
    switch (v) {
      case Variant::kBaseline:
        break;
      case Variant::kGsc:
      case Variant::kWva:
        if (!test_in_enroll) test_in_enroll = EstimateConditionStats(test_dev, enroll_stats.frame, "");
        if (v == Variant::kGsc) c.shift = GlobalShift(enroll_stats, *test_in_enroll);
        c.test_stats = *test_in_enroll;
        break;
      case Variant::kSdlt:
      case Variant::kCat:
        if (!trained) trained = TrainTransform(enroll_stats, enroll_dev, test_dev, options);
        c.test_stats = trained->test_stats;
        c.transform = trained->fit.transform;
        break;
      case Variant::kMct:
        if (!pooled) {
          const PooledSet set = PoolConditions(enroll_dev, test_dev);
          pooled = FitConditionStats(set.vectors, enroll_stats.condition + "+" +
                                                      (test_dev.empty() ? "" : test_dev.front().condition));
        }
        c.enroll_stats = *pooled;
        break;
    }
    c.Validate();
    out.push_back(std::move(c));
  }
  return out;
}

const EvalCell &EvalReport::At(const std::string &enroll, const std::string &test,
                               Variant v) const {
  for (const auto &c : cells)
    if (c.enroll_condition == enroll && c.test_condition == test && c.variant == v) return c;
  throw Error("no cell for " + enroll + " / " + test + " / " + std::string(VariantName(v)));
}

EvalCell EvaluateScorer(const ScorerConfig &config, std::span<const LabeledVector> enroll_eval,
                        std::span<const LabeledVector> test_eval, std::span<const Trial> trials,
                        std::size_t threads) {
  const auto models = EnrollAll(enroll_eval, config.enroll_stats);
  const auto scores = ScoreTrials(config, models, trials, test_eval, threads);
  const auto [tar, non] = SplitByLabel(scores, trials);
  EvalCell cell;
  cell.enroll_condition = enroll_eval.empty() ? "" : enroll_eval.front().condition;
  cell.test_condition = test_eval.empty() ? "" : test_eval.front().condition;
  cell.variant = config.variant;
  cell.eer = ComputeEer(tar, non);
  cell.n_target = tar.size();
  cell.n_nontarget = non.size();
  return cell;
}

EvalReport RunMatrix(const ConditionData &enroll, std::span<const ConditionData> tests,
                     std::span<const Variant> variants, std::optional<TrialSampling> sampling,
                     const TransformOptions &options, std::size_t threads) {
  if (variants.empty()) throw Error("no scorer variants requested");
  EvalReport report;
  report.meta.emplace_back("eer_convention", kEerConvention);
  report.meta.emplace_back("enroll_condition", enroll.name);
  if (sampling) {
    report.meta.emplace_back("trial_sample", std::to_string(sampling->n));
    report.meta.emplace_back("trial_seed", std::to_string(sampling->seed));
  } else {
    report.meta.emplace_back("trial_sample", "exhaustive");
  }
  report.meta.emplace_back("transform_objective", std::string(ObjectiveName(options.objective)));
  report.meta.emplace_back("transform_solver", options.closed_form ? "closed_form" : "adam");
  if (!options.closed_form) report.meta.emplace_back("transform_seed", std::to_string(options.adam.seed));

  std::vector<std::string> speakers;
  for (const auto &[spk, idx] : GroupBySpeaker(enroll.eval)) speakers.push_back(spk);

  for (const auto &test : tests) {
    const bool matched = test.name == enroll.name;
    std::vector<Variant> run;
    if (matched) run.push_back(Variant::kBaseline);
    else run.assign(variants.begin(), variants.end());
    const auto trials = BuildTrials(speakers, test.eval, sampling);
    const auto configs = BuildScorers(run, enroll.dev, test.dev, options);
    for (const auto &config : configs) {
      EvalCell cell = EvaluateScorer(config, enroll.eval, test.eval, trials, threads);
      cell.enroll_condition = enroll.name;
      cell.test_condition = test.name;
      report.cells.push_back(std::move(cell));
    }
  }
  return report;
}

void WriteEvalReport(std::ostream &os, const EvalReport &report) {
  for (const auto &[k, v] : report.meta) os << "# " << k << '\t' << v << '\n';
  os << "enroll\ttest\tvariant\teer_percent\tn_target\tn_nontarget\n";
  for (const auto &c : report.cells) {
    char eer[32];
    std::snprintf(eer, sizeof(eer), "%.3f", c.eer * 100.0);
    os << c.enroll_condition << '\t' << c.test_condition << '\t' << VariantName(c.variant) << '\t'
       << eer << '\t' << c.n_target << '\t' << c.n_nontarget << '\n';
  }
}

}  // namespace nlsd
