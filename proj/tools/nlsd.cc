// tools/nlsd.cc

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

// nlsd: file-based pipeline
//   simulate -> split -> stats -> train -> trials -> score -> eval, diagnose
// Exit status: 0 success, 1 domain error, 2 usage error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "manifest.h"
#include "nlsd/diagnostics.h"
#include "nlsd/eval.h"
#include "nlsd/io.h"
#include "nlsd/scoring.h"
#include "nlsd/sim.h"
#include "nlsd/stats.h"
#include "nlsd/transform.h"

namespace fs = std::filesystem;
using namespace nlsd;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Reads an artifact, naming the command that makes it when it is missing.
template <class Fn>
auto Load(const std::string &path, const char *kind, const char *producer, Fn &&reader) {
  if (!fs::exists(path))
    throw Error("missing " + std::string(kind) + " file '" + path + "' (produced by `nlsd " +
                producer + "`)");
  return ReadFile(path, reader);
}

VectorSet LoadVectors(const std::string &path) {
  return Load(path, "vector set", "simulate or nlsd split", ReadVectorSet);
}
ConditionStats LoadStats(const std::string &path) {
  return Load(path, "stats", "stats", ReadConditionStats);
}

template <class Writer>
void Save(const std::string &path, Writer &&writer) {
  std::ostringstream os;
  writer(os);
  WriteFileText(path, os.str());
}

// Every option of `cmd` that carries a value, for the manifest.
RunManifest ManifestOf(const CLI::App *cmd) {
  RunManifest m;
  m.command = cmd->get_name();
  for (const CLI::Option *opt : cmd->get_options()) {
    if (opt->get_lnames().empty() || opt->get_lnames().front() == "help") continue;
    const std::string name = opt->get_lnames().front();
    std::vector<std::string> values = opt->results();
    if (!values.empty()) m.arguments[name] = values;
    if (values.empty() && !opt->get_default_str().empty()) values.push_back(opt->get_default_str());
    if (values.empty()) continue;
    if (name == "seed") m.seeds[cmd->get_name()] = values.front();
    m.parameters[name] = values;
  }
  return m;
}

struct Globals {
  std::size_t threads = 1;
};

// simulate ----------------------------------------------------------------

struct SimulateArgs {
  std::size_t dim = 0, speakers = 50, enroll_per_spk = 5, test_per_spk = 10;
  double between = 0.5, within = 1.0, offset_norm = 0.0;
  std::string mismatch = "none";
  double shift_norm = 3.0, gamma = 2.0, affine_cond = 3.0;
  std::uint64_t seed = 0;
  std::string out_dir, enroll_condition = "enroll", test_condition = "test";
};

void AddSimulate(CLI::App &app, SimulateArgs &a) {
  auto *c = app.add_subcommand("simulate", "Draw enrollment and test vector sets");
  c->add_option("--dim", a.dim, "Vector dimension")->required()->check(CLI::PositiveNumber);
  c->add_option("--speakers", a.speakers, "Number of speakers")->capture_default_str();
  c->add_option("--enroll-per-spk", a.enroll_per_spk, "Enrollment vectors per speaker")->capture_default_str();
  c->add_option("--test-per-spk", a.test_per_spk, "Test vectors per speaker")->capture_default_str();
  c->add_option("--between", a.between, "Between-speaker variance (all dimensions)")->capture_default_str();
  c->add_option("--within", a.within, "Within-speaker variance (all dimensions)")->capture_default_str();
  c->add_option("--offset-norm", a.offset_norm, "Norm of the global mean shared by both conditions")->capture_default_str();
  c->add_option("--mismatch", a.mismatch, "Test-condition mismatch")
      ->check(CLI::IsMember({"none", "shift", "scale", "affine"}))->capture_default_str();
  c->add_option("--shift-norm", a.shift_norm, "shift: norm of b; affine: norm of the offset")->capture_default_str();
  c->add_option("--gamma", a.gamma, "scale/affine: within-variance factor")->capture_default_str();
  c->add_option("--affine-cond", a.affine_cond, "affine: condition number of A")->capture_default_str();
  c->add_option("--seed", a.seed, "Random seed")->required();
  c->add_option("--out-dir", a.out_dir, "Output directory")->required();
  c->add_option("--enroll-condition", a.enroll_condition)->capture_default_str();
  c->add_option("--test-condition", a.test_condition)->capture_default_str();
}

int RunSimulate(const CLI::App *cmd, const SimulateArgs &a) {
  auto given = [&](const char *o) { return cmd->count(o) > 0; };
  if (a.mismatch != "shift" && a.mismatch != "affine" && given("--shift-norm"))
    throw UsageError("--shift-norm needs --mismatch shift or affine");
  if (a.mismatch != "scale" && a.mismatch != "affine" && given("--gamma"))
    throw UsageError("--gamma needs --mismatch scale or affine");
  if (a.mismatch != "affine" && given("--affine-cond"))
    throw UsageError("--affine-cond needs --mismatch affine");
  if (a.enroll_condition == a.test_condition)
    throw UsageError("enrollment and test conditions need different names");

  SimSpec spec = IsotropicSpec(a.dim, a.speakers, a.enroll_per_spk, a.test_per_spk, a.between,
                               a.within, a.seed);
  spec.enroll_condition = a.enroll_condition;
  spec.test_condition = a.test_condition;
  if (a.offset_norm > 0) spec.offset = RandomShift(a.dim, a.offset_norm, a.seed + 1);
  const auto d = static_cast<Eigen::Index>(a.dim);
  if (a.mismatch == "shift") spec.mismatch = ShiftMismatch(RandomShift(a.dim, a.shift_norm, a.seed));
  if (a.mismatch == "scale") spec.mismatch = WithinScaleMismatch(Vector::Constant(d, a.gamma));
  if (a.mismatch == "affine")
    spec.mismatch = AffineMismatch(RandomConditionedMatrix(a.dim, a.affine_cond, a.seed),
                                   RandomShift(a.dim, a.shift_norm, a.seed + 2),
                                   Vector::Constant(d, a.gamma));
  const SimData data = Generate(spec);

  fs::create_directories(a.out_dir);
  const std::string enroll = (fs::path(a.out_dir) / "enroll.tsv").string();
  const std::string test = (fs::path(a.out_dir) / "test.tsv").string();
  const std::string truth = (fs::path(a.out_dir) / "truth.txt").string();
  Save(enroll, [&](std::ostream &os) { WriteVectorSet(os, data.enroll); });
  Save(test, [&](std::ostream &os) { WriteVectorSet(os, data.test); });
  Save(truth, [&](std::ostream &os) { WriteGroundTruth(os, data.truth); });
  RunManifest m = ManifestOf(cmd);
  m.outputs = {enroll, test, truth};
  m.Write((fs::path(a.out_dir) / "manifest.json").string());
  return 0;
}

// split --------------------------------------------------------------------

struct SplitArgs {
  std::string in, dev_out, eval_out, mode = "disjoint";
  double fraction = 0.5;
  std::uint64_t seed = 0;
};

void AddSplit(CLI::App &app, SplitArgs &a) {
  auto *c = app.add_subcommand("split", "Split a vector set into dev and eval portions");
  c->add_option("--in", a.in, "Vector set")->required();
  c->add_option("--fraction", a.fraction, "Share that goes to dev")->capture_default_str();
  c->add_option("--mode", a.mode, "disjoint: by speaker, shared: every speaker on both sides")
      ->check(CLI::IsMember({"disjoint", "shared"}))->capture_default_str();
  c->add_option("--seed", a.seed, "Random seed")->required();
  c->add_option("--dev-out", a.dev_out)->required();
  c->add_option("--eval-out", a.eval_out)->required();
}

int RunSplit(const CLI::App *cmd, const SplitArgs &a) {
  const VectorSet v = LoadVectors(a.in);
  const Split s = SplitParallel(v, a.fraction, a.seed,
                                a.mode == "shared" ? SplitMode::kSpeakerShared : SplitMode::kSpeakerDisjoint);
  Save(a.dev_out, [&](std::ostream &os) { WriteVectorSet(os, s.dev); });
  Save(a.eval_out, [&](std::ostream &os) { WriteVectorSet(os, s.eval); });
  RunManifest m = ManifestOf(cmd);
  m.inputs = {a.in};
  m.outputs = {a.dev_out, a.eval_out};
  m.Write(a.dev_out + ".manifest.json");
  return 0;
}

// stats --------------------------------------------------------------------

struct StatsArgs {
  std::vector<std::string> vectors;
  std::string out, frame, condition;
  std::size_t d_out = 0;
};

void AddStats(CLI::App &app, StatsArgs &a) {
  auto *c = app.add_subcommand("stats", "Estimate a condition's frame and Gaussian statistics");
  c->add_option("--vectors", a.vectors, "Vector set; two sets are pooled (multi-condition)")
      ->required()->expected(1, 2);
  c->add_option("--frame", a.frame, "Reuse the frame of this stats file instead of fitting one");
  c->add_option("--d-out", a.d_out, "Kept dimensions (0: all)")->capture_default_str();
  c->add_option("--condition", a.condition, "Condition name (default: from the vectors)");
  c->add_option("--out", a.out)->required();
}

int RunStats(const CLI::App *cmd, const StatsArgs &a) {
  if (!a.frame.empty() && cmd->count("--d-out")) throw UsageError("--d-out conflicts with --frame");
  VectorSet v = LoadVectors(a.vectors.front());
  std::string condition = a.condition;
  if (a.vectors.size() == 2) {
    const VectorSet second = LoadVectors(a.vectors[1]);
    PooledSet pooled = PoolConditions(v, second);
    if (pooled.warning) std::cerr << "nlsd stats: warning: " << *pooled.warning << "\n";
    if (condition.empty() && !v.empty() && !second.empty())
      condition = v.front().condition + "+" + second.front().condition;
    v = std::move(pooled.vectors);
  }
  if (v.empty()) throw Error("vector set '" + a.vectors.front() + "' is empty");
  ConditionStats s;
  if (a.frame.empty()) s = FitConditionStats(v, condition, a.d_out);
  else s = EstimateConditionStats(v, LoadStats(a.frame).frame, condition);
  Save(a.out, [&](std::ostream &os) { WriteConditionStats(os, s); });
  RunManifest m = ManifestOf(cmd);
  m.inputs = a.vectors;
  if (!a.frame.empty()) m.inputs.push_back(a.frame);
  m.outputs = {a.out};
  m.Write(a.out + ".manifest.json");
  return 0;
}

// trials -------------------------------------------------------------------

struct TrialsArgs {
  std::string enroll, test, out;
  std::size_t sample = 0;
  std::uint64_t seed = 0;
};

void AddTrials(CLI::App &app, TrialsArgs &a) {
  auto *c = app.add_subcommand("trials", "Build a trial list");
  c->add_option("--enroll", a.enroll, "Enrollment vectors (defines the speakers)")->required();
  c->add_option("--test", a.test, "Test vectors")->required();
  c->add_option("--sample", a.sample, "Keep this many trials (0: exhaustive)")->capture_default_str();
  c->add_option("--seed", a.seed, "Sampling seed")->capture_default_str();
  c->add_option("--out", a.out)->required();
}

int RunTrials(const CLI::App *cmd, const TrialsArgs &a) {
  const VectorSet e = LoadVectors(a.enroll);
  const VectorSet t = LoadVectors(a.test);
  if (e.empty()) throw Error("no enrollment vectors in '" + a.enroll + "'");
  std::vector<std::string> speakers;
  for (const auto &[spk, idx] : GroupBySpeaker(e)) speakers.push_back(spk);
  std::optional<TrialSampling> sampling;
  if (a.sample > 0) sampling = TrialSampling{a.sample, a.seed};
  const auto trials = BuildTrials(speakers, t, sampling);
  Save(a.out, [&](std::ostream &os) { WriteTrials(os, trials); });
  RunManifest m = ManifestOf(cmd);
  m.inputs = {a.enroll, a.test};
  m.outputs = {a.out};
  m.Write(a.out + ".manifest.json");
  return 0;
}

// train --------------------------------------------------------------------

struct TrainArgs {
  std::string enroll_stats, test_stats, enroll_vectors, test_vectors, out;
  std::string objective = "density", solver = "adam";
  double lr = 1e-2, tolerance = 1e-6;
  std::size_t iterations = 5000, batch_size = 0;
  std::uint64_t seed = 0;
};

void AddTrain(CLI::App &app, TrainArgs &a) {
  auto *c = app.add_subcommand("train", "Learn the test -> enrollment affine transform");
  c->add_option("--enroll-stats", a.enroll_stats)->required();
  c->add_option("--test-stats", a.test_stats, "Test-condition stats in the test frame")->required();
  c->add_option("--enroll-vectors", a.enroll_vectors, "Enrollment-condition dev vectors")->required();
  c->add_option("--test-vectors", a.test_vectors, "Test-condition dev vectors of the same speakers")->required();
  c->add_option("--objective", a.objective)->check(CLI::IsMember({"density", "regression"}))->capture_default_str();
  c->add_option("--solver", a.solver, "adam or closed (exact maximizer)")
      ->check(CLI::IsMember({"adam", "closed"}))->capture_default_str();
  c->add_option("--lr", a.lr)->capture_default_str();
  c->add_option("--iterations", a.iterations)->capture_default_str();
  c->add_option("--tolerance", a.tolerance, "Gradient-norm convergence threshold")->capture_default_str();
  c->add_option("--batch-size", a.batch_size, "Minibatch size (0: full batch)")->capture_default_str();
  c->add_option("--seed", a.seed, "Minibatch seed")->capture_default_str();
  c->add_option("--out", a.out)->required();
}

int RunTrain(const CLI::App *cmd, const TrainArgs &a) {
  const ConditionStats es = LoadStats(a.enroll_stats);
  const ConditionStats ts = LoadStats(a.test_stats);
  const VectorSet ev = LoadVectors(a.enroll_vectors);
  const VectorSet tv = LoadVectors(a.test_vectors);
  const auto models = EnrollAll(ev, es);
  const ParallelBatch batch = MakeParallelBatch(tv, ts, models);
  const Objective obj = ParseObjective(a.objective);
  FitResult fit;
  if (a.solver == "closed") {
    fit = FitTransformClosedForm(batch, models, obj);
  } else {
    AdamConfig cfg;
    cfg.step = a.lr;
    cfg.iterations = a.iterations;
    cfg.tolerance = a.tolerance;
    cfg.batch_size = a.batch_size;
    cfg.seed = a.seed;
    cfg.objective = obj;
    cfg.warm_start = obj == Objective::kDensity;
    fit = FitTransformGd(batch, models, cfg);
  }
  fit.transform.source_condition = ts.condition;
  fit.transform.target_condition = es.condition;
  Save(a.out, [&](std::ostream &os) { WriteTransform(os, fit.transform, obj); });
  std::cerr << "nlsd train: " << fit.iterations << " iterations, objective "
            << FormatDouble(fit.transform.objective) << ", gradient norm "
            << FormatDouble(fit.gradient_norm) << (fit.converged ? "" : " (not converged)") << "\n";
  RunManifest m = ManifestOf(cmd);
  m.inputs = {a.enroll_stats, a.test_stats, a.enroll_vectors, a.test_vectors};
  m.outputs = {a.out};
  m.Write(a.out + ".manifest.json");
  return 0;
}

// score --------------------------------------------------------------------

struct ScoreArgs {
  std::string variant, enroll_stats, test_stats, transform, enroll, test, trials, out;
};

void AddScore(CLI::App &app, ScoreArgs &a) {
  auto *c = app.add_subcommand("score", "Score trials with one scorer variant");
  c->add_option("--variant", a.variant)
      ->required()->check(CLI::IsMember({"baseline", "gsc", "wva", "sdlt", "mct", "cat"}));
  c->add_option("--enroll-stats", a.enroll_stats,
                "Enrollment-condition stats (mct: pooled stats)")->required();
  c->add_option("--test-stats", a.test_stats,
                "gsc/wva: test stats in the enrollment frame; sdlt/cat: in the test frame");
  c->add_option("--transform", a.transform, "sdlt/cat: transform file");
  c->add_option("--enroll", a.enroll, "Evaluation enrollment vectors")->required();
  c->add_option("--test", a.test, "Evaluation test vectors")->required();
  c->add_option("--trials", a.trials)->required();
  c->add_option("--out", a.out)->required();
}

int RunScore(const CLI::App *cmd, const ScoreArgs &a, const Globals &g) {
  ScorerConfig cfg;
  cfg.variant = ParseVariant(a.variant);
  const bool needs_test = cfg.variant == Variant::kGsc || cfg.variant == Variant::kWva ||
                          cfg.variant == Variant::kSdlt || cfg.variant == Variant::kCat;
  const bool needs_transform = cfg.variant == Variant::kSdlt || cfg.variant == Variant::kCat;
  if (needs_test && a.test_stats.empty())
    throw Error("variant '" + a.variant + "' needs --test-stats (produced by `nlsd stats`)");
  if (needs_transform && a.transform.empty())
    throw Error("variant '" + a.variant + "' needs --transform (produced by `nlsd train`)");
  cfg.enroll_stats = LoadStats(a.enroll_stats);
  if (!a.test_stats.empty()) cfg.test_stats = LoadStats(a.test_stats);
  if (needs_transform)
    cfg.transform = Load(a.transform, "transform", "train", ReadTransform);
  if (cfg.variant == Variant::kGsc) {
    if (!SameFrame(cfg.test_stats->frame, cfg.enroll_stats.frame))
      throw Error("gsc needs test stats in the enrollment frame (nlsd stats --frame)");
    cfg.shift = GlobalShift(cfg.enroll_stats, *cfg.test_stats);
  }
  cfg.Validate();

  const VectorSet ev = LoadVectors(a.enroll);
  const VectorSet tv = LoadVectors(a.test);
  const auto trials = Load(a.trials, "trial", "trials", ReadTrials);
  const auto models = EnrollAll(ev, cfg.enroll_stats);
  const auto scores = ScoreTrials(cfg, models, trials, tv, g.threads);
  std::map<std::string, std::string> meta{{"variant", a.variant}};
  if (!ev.empty()) meta["enroll_condition"] = ev.front().condition;
  if (!tv.empty()) meta["test_condition"] = tv.front().condition;
  Save(a.out, [&](std::ostream &os) { WriteScores(os, scores, meta); });
  RunManifest m = ManifestOf(cmd);
  m.inputs = {a.enroll_stats};
  if (!a.test_stats.empty()) m.inputs.push_back(a.test_stats);
  if (needs_transform) m.inputs.push_back(a.transform);
  m.inputs.insert(m.inputs.end(), {a.enroll, a.test, a.trials});
  m.outputs = {a.out};
  m.Write(a.out + ".manifest.json");
  return 0;
}

// eval ---------------------------------------------------------------------

struct EvalArgs {
  std::vector<std::string> scores;
  std::string trials, out;
};

void AddEval(CLI::App &app, EvalArgs &a) {
  auto *c = app.add_subcommand("eval", "Equal error rates of one or more score files");
  c->add_option("--scores", a.scores, "Score files (repeatable)")->required();
  c->add_option("--trials", a.trials)->required();
  c->add_option("--out", a.out, "Report (TSV)")->required();
}

int RunEval(const CLI::App *cmd, const EvalArgs &a) {
  const auto trials = Load(a.trials, "trial", "trials", ReadTrials);
  EvalReport report;
  report.meta.emplace_back("eer_convention", kEerConvention);
  report.meta.emplace_back("trials", a.trials);
  for (const auto &path : a.scores) {
    const ScoreFile sf = Load(path, "score", "score", ReadScores);
    if (sf.scores.empty()) throw Error("score file '" + path + "' has no scores");
    const auto [tar, non] = SplitByLabel(sf.scores, trials);
    EvalCell cell;
    auto meta = [&](const char *k) {
      auto it = sf.meta.find(k);
      return it == sf.meta.end() ? std::string("-") : it->second;
    };
    cell.enroll_condition = meta("enroll_condition");
    cell.test_condition = meta("test_condition");
    cell.variant = ParseVariant(meta("variant") == "-" ? "baseline" : meta("variant"));
    cell.eer = ComputeEer(tar, non);
    cell.n_target = tar.size();
    cell.n_nontarget = non.size();
    report.cells.push_back(cell);
  }
  Save(a.out, [&](std::ostream &os) { WriteEvalReport(os, report); });
  RunManifest m = ManifestOf(cmd);
  m.inputs = a.scores;
  m.inputs.push_back(a.trials);
  m.outputs = {a.out};
  m.Write(a.out + ".manifest.json");
  return 0;
}

// diagnose -----------------------------------------------------------------

struct DiagnoseArgs {
  std::string enroll, out;
  std::vector<std::string> test;
  std::size_t n_dims = kDefaultProfileDims;
};

void AddDiagnose(CLI::App &app, DiagnoseArgs &a) {
  auto *c = app.add_subcommand("diagnose", "Angle/length metrics and variance profiles");
  c->add_option("--enroll", a.enroll, "Enrollment-condition vectors")->required();
  c->add_option("--test", a.test, "Test-condition vectors (repeatable)")->required();
  c->add_option("--n-dims", a.n_dims, "Profile dimensions reported")->capture_default_str();
  c->add_option("--out", a.out, "Report (TSV)")->required();
}

int RunDiagnose(const CLI::App *cmd, const DiagnoseArgs &a) {
  const VectorSet e = LoadVectors(a.enroll);
  std::vector<VectorSet> tests;
  for (const auto &p : a.test) tests.push_back(LoadVectors(p));
  const IncoherenceReport r = VarianceProfiles(e, tests, a.n_dims);
  Save(a.out, [&](std::ostream &os) { WriteIncoherenceReport(os, r); });
  RunManifest m = ManifestOf(cmd);
  m.inputs = {a.enroll};
  m.inputs.insert(m.inputs.end(), a.test.begin(), a.test.end());
  m.outputs = {a.out};
  m.Write(a.out + ".manifest.json");
  return 0;
}

int Main(int argc, char **argv);

// rerun: replays the command recorded in a manifest.
int RunRerun(const std::string &path) {
  const RunManifest m = RunManifest::Read(path);
  std::vector<std::string> args{"nlsd", m.command};
  for (const auto &[k, values] : m.arguments) {
    args.push_back("--" + k);
    args.insert(args.end(), values.begin(), values.end());
  }
  std::vector<char *> argv;
  for (auto &s : args) argv.push_back(s.data());
  return Main(static_cast<int>(argv.size()), argv.data());
}

int Main(int argc, char **argv) {
  CLI::App app{"Normalized-likelihood scoring with statistics decomposition"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--threads", g.threads, "Worker threads for scoring")
      ->check(CLI::PositiveNumber)->capture_default_str();

  SimulateArgs sim;
  SplitArgs split;
  StatsArgs stats;
  TrialsArgs trials;
  TrainArgs train;
  ScoreArgs score;
  EvalArgs eval;
  DiagnoseArgs diag;
  std::string manifest;
  AddSimulate(app, sim);
  AddSplit(app, split);
  AddStats(app, stats);
  AddTrials(app, trials);
  AddTrain(app, train);
  AddScore(app, score);
  AddEval(app, eval);
  AddDiagnose(app, diag);
  app.add_subcommand("rerun", "Replay the command recorded in a manifest")
      ->add_option("manifest", manifest)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return 2;
  }

  const CLI::App *cmd = app.get_subcommands().front();
  const std::string name = cmd->get_name();
  try {
    if (name == "simulate") return RunSimulate(cmd, sim);
    if (name == "split") return RunSplit(cmd, split);
    if (name == "stats") return RunStats(cmd, stats);
    if (name == "trials") return RunTrials(cmd, trials);
    if (name == "train") return RunTrain(cmd, train);
    if (name == "score") return RunScore(cmd, score, g);
    if (name == "eval") return RunEval(cmd, eval);
    if (name == "diagnose") return RunDiagnose(cmd, diag);
    if (name == "rerun") return RunRerun(manifest);
  } catch (const UsageError &e) {
    std::cerr << "nlsd " << name << ": " << e.what() << "\nRun with --help for more information.\n";
    return 2;
  } catch (const Error &e) {
    std::cerr << "nlsd " << name << ": " << e.what() << "\n";
    return 1;
  } catch (const fs::filesystem_error &e) {
    std::cerr << "nlsd " << name << ": " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace

int main(int argc, char **argv) { return Main(argc, argv); }
