// python/nlsd_module.cc

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

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "nlsd/diagnostics.h"
#include "nlsd/eval.h"
#include "nlsd/io.h"
#include "nlsd/sim.h"
#include "nlsd/transform.h"

namespace py = pybind11;
using namespace nlsd;

namespace {

Mismatch MakeMismatch(const std::string &kind, std::size_t dim, double shift_norm, double gamma,
                      double affine_cond, std::uint64_t seed) {
  const auto d = static_cast<Eigen::Index>(dim);
  if (kind == "none") return {};
  if (kind == "shift") return ShiftMismatch(RandomShift(dim, shift_norm, seed));
  if (kind == "scale") return WithinScaleMismatch(Vector::Constant(d, gamma));
  if (kind == "affine")
    return AffineMismatch(RandomConditionedMatrix(dim, affine_cond, seed),
                          RandomShift(dim, shift_norm, seed + 7), Vector::Constant(d, gamma));
  throw Error("unknown mismatch '" + kind + "' (none, shift, scale, affine)");
}

std::vector<Variant> ParseVariants(const std::vector<std::string> &names) {
  std::vector<Variant> out;
  for (const auto &n : names) out.push_back(ParseVariant(n));
  return out;
}

std::vector<double> ScoreWith(const ScorerConfig &config, const VectorSet &enroll,
                              const VectorSet &test, const std::vector<Trial> &trials,
                              std::size_t threads) {
  const auto models = EnrollAll(enroll, config.enroll_stats);
  std::vector<double> out;
  for (const auto &r : ScoreTrials(config, models, trials, test, threads)) out.push_back(r.score);
  return out;
}

}  // namespace

PYBIND11_MODULE(_nlsd, m) {
  m.doc() = "Gaussian normalized-likelihood scoring under enrollment/test mismatch";
  py::register_exception<Error>(m, "NlsdError", PyExc_ValueError);

  py::class_<LabeledVector>(m, "LabeledVector")
      .def(py::init<std::string, std::string, std::string, Vector>(), py::arg("utt_id"),
           py::arg("speaker"), py::arg("condition"), py::arg("vec"))
      .def_readwrite("utt_id", &LabeledVector::utt_id)
      .def_readwrite("speaker", &LabeledVector::speaker)
      .def_readwrite("condition", &LabeledVector::condition)
      .def_readwrite("vec", &LabeledVector::vec)
      .def("__repr__", [](const LabeledVector &v) {
        return "<LabeledVector " + v.utt_id + " speaker=" + v.speaker + " dim=" +
               std::to_string(v.vec.size()) + ">";
      });

  py::class_<ConditionStats>(m, "ConditionStats")
      .def_readonly("condition", &ConditionStats::condition)
      .def_readonly("mean", &ConditionStats::mean)
      .def_readonly("between", &ConditionStats::between)
      .def_readonly("within", &ConditionStats::within)
      .def_readonly("n_speakers", &ConditionStats::n_speakers)
      .def_readonly("n_vectors", &ConditionStats::n_vectors)
      .def_property_readonly("frame", [](const ConditionStats &s) { return s.frame.matrix; })
      .def_property_readonly("frame_condition",
                             [](const ConditionStats &s) { return s.frame.source_condition; })
      .def("center", &ConditionStats::Center, py::arg("raw"))
      .def("dim", &ConditionStats::Dim);

  py::class_<AffineTransform>(m, "AffineTransform")
      .def_readonly("m", &AffineTransform::m)
      .def_readonly("b", &AffineTransform::b)
      .def_readonly("source_condition", &AffineTransform::source_condition)
      .def_readonly("target_condition", &AffineTransform::target_condition)
      .def_readonly("objective", &AffineTransform::objective)
      .def_readonly("condition_number", &AffineTransform::condition_number)
      .def("apply", &AffineTransform::Apply, py::arg("x"));

  py::class_<Trial>(m, "Trial")
      .def(py::init<std::string, std::string, bool>(), py::arg("enroll_speaker"),
           py::arg("test_utt"), py::arg("is_target"))
      .def_readonly("enroll_speaker", &Trial::enroll_speaker)
      .def_readonly("test_utt", &Trial::test_utt)
      .def_readonly("is_target", &Trial::is_target);

  py::class_<EnrollmentModel>(m, "EnrollmentModel")
      .def_readonly("speaker", &EnrollmentModel::speaker)
      .def_readonly("mu_tilde", &EnrollmentModel::mu_tilde)
      .def_readonly("pred_var", &EnrollmentModel::pred_var)
      .def_readonly("n", &EnrollmentModel::n);

  py::class_<ScorerConfig>(m, "Scorer")
      .def_property_readonly("variant",
                             [](const ScorerConfig &c) { return std::string(VariantName(c.variant)); })
      .def_readonly("enroll_stats", &ScorerConfig::enroll_stats)
      .def_readonly("test_stats", &ScorerConfig::test_stats)
      .def_readonly("transform", &ScorerConfig::transform)
      .def_readonly("shift", &ScorerConfig::shift)
      .def("score", &ScoreWith, py::arg("enroll"), py::arg("test"), py::arg("trials"),
           py::arg("threads") = 1,
           "Enrolls the speakers of `enroll` and scores `trials` against `test`.");

  m.def(
      "simulate",
      [](std::size_t dim, std::size_t n_speakers, std::size_t n_enroll, std::size_t n_test,
         double between, double within, std::uint64_t seed, const std::string &mismatch,
         double shift_norm, double gamma, double affine_cond, double offset_norm) {
        SimSpec spec = IsotropicSpec(dim, n_speakers, n_enroll, n_test, between, within, seed);
        if (offset_norm > 0) spec.offset = RandomShift(dim, offset_norm, seed + 1000);
        spec.mismatch = MakeMismatch(mismatch, dim, shift_norm, gamma, affine_cond, seed);
        SimData d = Generate(spec);
        py::dict out;
        out["enroll"] = d.enroll;
        out["test"] = d.test;
        out["truth_m"] = d.truth.m;
        out["truth_b"] = d.truth.b;
        return out;
      },
      py::arg("dim"), py::arg("n_speakers") = 50, py::arg("n_enroll") = 5, py::arg("n_test") = 10,
      py::arg("between") = 0.5, py::arg("within") = 1.0, py::arg("seed") = 0,
      py::arg("mismatch") = "none", py::arg("shift_norm") = 3.0, py::arg("gamma") = 2.0,
      py::arg("affine_cond") = 3.0, py::arg("offset_norm") = 0.0,
      "Isotropic two-condition data; returns enroll, test and the true test->enroll map.");

  m.def(
      "split",
      [](const VectorSet &v, double fraction, std::uint64_t seed, bool shared) {
        Split s = SplitParallel(v, fraction, seed,
                                shared ? SplitMode::kSpeakerShared : SplitMode::kSpeakerDisjoint);
        return py::make_tuple(s.dev, s.eval);
      },
      py::arg("vectors"), py::arg("fraction"), py::arg("seed"), py::arg("shared") = false);

  m.def(
      "fit_stats",
      [](const VectorSet &v, std::size_t d_out, const std::string &condition) {
        return FitConditionStats(v, condition, d_out);
      },
      py::arg("vectors"), py::arg("d_out") = 0, py::arg("condition") = "",
      "Fits the condition's own frame and its per-dimension statistics.");
  m.def(
      "stats_in_frame",
      [](const VectorSet &v, const ConditionStats &frame_of, const std::string &condition) {
        return EstimateConditionStats(v, frame_of.frame, condition);
      },
      py::arg("vectors"), py::arg("frame_of"), py::arg("condition") = "");

  m.def(
      "enroll",
      [](const VectorSet &v, const ConditionStats &stats) { return EnrollAll(v, stats); },
      py::arg("vectors"), py::arg("stats"));
  m.def("log_nl_matched", &LogNlMatched, py::arg("model"), py::arg("x"), py::arg("stats"));

  m.def(
      "build_scorers",
      [](const std::vector<std::string> &variants, const VectorSet &enroll_dev,
         const VectorSet &test_dev, const std::string &objective, bool closed_form) {
        TransformOptions o;
        o.objective = ParseObjective(objective);
        o.adam.objective = o.objective;
        o.closed_form = closed_form;
        const auto v = ParseVariants(variants);
        return BuildScorers(v, enroll_dev, test_dev, o);
      },
      py::arg("variants"), py::arg("enroll_dev"), py::arg("test_dev"),
      py::arg("objective") = "density", py::arg("closed_form") = false);

  m.def(
      "train_transform",
      [](const ConditionStats &enroll_stats, const VectorSet &enroll_dev, const VectorSet &test_dev,
         const std::string &objective, bool closed_form, std::size_t iterations, double lr) {
        TransformOptions o;
        o.objective = ParseObjective(objective);
        o.adam.objective = o.objective;
        o.adam.warm_start = o.objective == Objective::kDensity;
        o.adam.iterations = iterations;
        o.adam.step = lr;
        o.closed_form = closed_form;
        TrainedTransform t = TrainTransform(enroll_stats, enroll_dev, test_dev, o);
        return py::make_tuple(t.fit.transform, t.test_stats, t.fit.trace);
      },
      py::arg("enroll_stats"), py::arg("enroll_dev"), py::arg("test_dev"),
      py::arg("objective") = "density", py::arg("closed_form") = false,
      py::arg("iterations") = 5000, py::arg("lr") = 1e-2,
      "Returns (transform, test-frame stats, objective trace).");

  m.def(
      "build_trials",
      [](const std::vector<std::string> &speakers, const VectorSet &test, std::size_t n,
         std::uint64_t seed) {
        std::optional<TrialSampling> s;
        if (n > 0) s = TrialSampling{n, seed};
        return BuildTrials(speakers, test, s);
      },
      py::arg("speakers"), py::arg("test"), py::arg("n") = 0, py::arg("seed") = 0);

  m.def(
      "compute_eer",
      [](const std::vector<double> &target, const std::vector<double> &nontarget) {
        return ComputeEer(target, nontarget);
      },
      py::arg("target"), py::arg("nontarget"));

  m.def("angle_metric", &AngleMetric, py::arg("mean_e"), py::arg("mean_t"));
  m.def("length_metric", &LengthMetric, py::arg("mean_e"), py::arg("mean_t"));
  m.def(
      "variance_profiles",
      [](const VectorSet &enroll, const std::vector<VectorSet> &tests, std::size_t n_dims) {
        const IncoherenceReport r = VarianceProfiles(enroll, tests, n_dims);
        py::list pairs, profiles;
        for (const auto &p : r.pairs) {
          py::dict d;
          d["test"] = p.test_condition;
          d["angle"] = p.angle;
          d["length"] = p.length;
          pairs.append(d);
        }
        for (const auto &p : r.profiles) {
          py::dict d;
          d["condition"] = p.condition;
          d["between"] = p.between;
          d["within"] = p.within;
          profiles.append(d);
        }
        py::dict out;
        out["frame"] = r.frame;
        out["pairs"] = pairs;
        out["profiles"] = profiles;
        return out;
      },
      py::arg("enroll"), py::arg("tests"), py::arg("n_dims") = kDefaultProfileDims);

  m.def(
      "read_vectors",
      [](const std::string &path) { return ReadFile(path, ReadVectorSet); },
      py::arg("path"));
  m.def(
      "write_vectors",
      [](const std::string &path, const VectorSet &v) {
        std::ostringstream os;
        WriteVectorSet(os, v);
        WriteFileText(path, os.str());
      },
      py::arg("path"), py::arg("vectors"));
  m.def(
      "read_stats",
      [](const std::string &path) { return ReadFile(path, ReadConditionStats); },
      py::arg("path"));
  m.def(
      "write_stats",
      [](const std::string &path, const ConditionStats &s) {
        std::ostringstream os;
        WriteConditionStats(os, s);
        WriteFileText(path, os.str());
      },
      py::arg("path"), py::arg("stats"));

  m.attr("variants") = [] {
    std::vector<std::string> names;
    for (Variant v : AllVariants()) names.emplace_back(VariantName(v));
    return names;
  }();
  m.attr("eer_convention") = kEerConvention;
}
