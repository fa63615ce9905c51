// src/transform.cc

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

#include "nlsd/transform.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <unordered_map>

namespace nlsd {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

// Dense view of a batch: row i holds sample i, its target mean and its
// per-dimension precision.
struct Problem {
  Matrix x;
  Matrix target;
  Matrix precision;
  double log_norm = 0.0;  // mean over samples of -0.5 sum log(2 pi v)

  std::size_t Size() const { return static_cast<std::size_t>(x.rows()); }
  Eigen::Index InDim() const { return x.cols(); }
  Eigen::Index OutDim() const { return target.cols(); }
};

Problem MakeProblem(const ParallelBatch &batch, std::span<const EnrollmentModel> models,
                    std::span<const std::size_t> rows = {}) {
  if (batch.Size() == 0) throw Error("empty parallel batch");
  if (batch.model_index.size() != batch.Size())
    throw Error("parallel batch has mismatched input and model lists");
  const auto din = batch.inputs.front().size();
  std::size_t n = rows.empty() ? batch.Size() : rows.size();
  auto row_at = [&](std::size_t i) { return rows.empty() ? i : rows[i]; };
  if (batch.model_index.front() >= models.size())
    throw Error("parallel batch references a missing model");
  const auto &first_model = models[batch.model_index.front()];
  const auto dout = first_model.mu_tilde.size();

  Problem p;
  p.x.resize(static_cast<Eigen::Index>(n), din);
  p.target.resize(static_cast<Eigen::Index>(n), dout);
  p.precision.resize(static_cast<Eigen::Index>(n), dout);
  double log_norm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = row_at(i);
    const auto mi = batch.model_index[r];
    if (mi >= models.size()) throw Error("parallel batch references a missing model");
    const auto &model = models[mi];
    if (batch.inputs[r].size() != din || model.mu_tilde.size() != dout)
      throw Error("dimension mismatch in parallel batch");
    const auto row = static_cast<Eigen::Index>(i);
    p.x.row(row) = batch.inputs[r].transpose();
    p.target.row(row) = model.mu_tilde.transpose();
    p.precision.row(row) = model.pred_var.cwiseInverse().transpose();
    log_norm += -0.5 * (kLog2Pi * static_cast<double>(dout) +
                        model.pred_var.array().log().sum());
  }
  p.log_norm = log_norm / static_cast<double>(n);
  return p;
}

void CheckShapes(const AffineTransform &t, const Problem &p) {
  if (t.m.rows() != p.OutDim() || t.m.cols() != p.InDim() || t.b.size() != p.OutDim())
    throw Error("transform shape does not match the parallel batch");
}

double LogAbsDet(const Matrix &m) {
  if (m.rows() != m.cols()) throw Error("log|det M| needs a square transform");
  Eigen::PartialPivLU<Matrix> lu(m);
  const auto &u = lu.matrixLU();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    const double v = std::abs(u(i, i));
    if (v == 0.0 || !std::isfinite(v)) return -std::numeric_limits<double>::infinity();
    acc += std::log(v);
  }
  return acc;
}

Matrix Residual(const AffineTransform &t, const Problem &p) {
  Matrix r = p.x * t.m.transpose();
  r.rowwise() += t.b.transpose();
  r -= p.target;
  return r;
}

double Evaluate(const AffineTransform &t, const Problem &p, Objective objective) {
  CheckShapes(t, p);
  const Matrix r = Residual(t, p);
  const double quad = (r.array().square() * p.precision.array()).sum();
  double value = p.log_norm - 0.5 * quad / static_cast<double>(p.Size());
  if (objective == Objective::kDensity) value += LogAbsDet(t.m);
  return value;
}

MllrGradient Gradient(const AffineTransform &t, const Problem &p, Objective objective) {
  CheckShapes(t, p);
  const Matrix g = -(Residual(t, p).array() * p.precision.array()).matrix();
  const double inv_n = 1.0 / static_cast<double>(p.Size());
  MllrGradient grad{g.transpose() * p.x * inv_n, g.colwise().sum().transpose() * inv_n};
  if (objective == Objective::kDensity) {
    Eigen::FullPivLU<Matrix> lu(t.m);
    if (!lu.isInvertible()) throw Error("log|det M| gradient undefined: M is singular");
    grad.dm += lu.inverse().transpose();
  }
  return grad;
}

// Augmented design [x 1] with its per-output-dimension normal equations.
struct NormalEquations {
  std::vector<Matrix> gram;  // (din+1)^2 per output dimension
  std::vector<Vector> rhs;
};

NormalEquations BuildNormalEquations(const Problem &p) {
  const auto n = static_cast<Eigen::Index>(p.Size());
  const auto din = p.InDim();
  Matrix design(n, din + 1);
  design.leftCols(din) = p.x;
  design.col(din).setOnes();

  Eigen::ColPivHouseholderQR<Matrix> qr(design);
  if (qr.rank() < din + 1) {
    throw Error("rank-deficient design: rank " + std::to_string(qr.rank()) + " < " +
                std::to_string(din + 1) + " (augmented dimension)");
  }

  NormalEquations ne;
  const double inv_n = 1.0 / static_cast<double>(n);
  for (Eigen::Index j = 0; j < p.OutDim(); ++j) {
    const Vector w = p.precision.col(j);
    ne.gram.push_back(design.transpose() * w.asDiagonal() * design * inv_n);
    ne.rhs.push_back(design.transpose() * w.cwiseProduct(p.target.col(j)) * inv_n);
  }
  return ne;
}

AffineTransform FromRows(const Matrix &rows, Eigen::Index din) {
  AffineTransform t;
  t.m = rows.leftCols(din);
  t.b = rows.col(din);
  return t;
}

AffineTransform SolveRegression(const Problem &p, const NormalEquations &ne) {
  const auto din = p.InDim();
  Matrix rows(p.OutDim(), din + 1);
  for (Eigen::Index j = 0; j < p.OutDim(); ++j)
    rows.row(j) = ne.gram[static_cast<std::size_t>(j)].ldlt().solve(ne.rhs[static_cast<std::size_t>(j)]).transpose();
  return FromRows(rows, din);
}

void Finish(FitResult &r, const Problem &p, Objective objective) {
  r.transform.objective = Evaluate(r.transform, p, objective);
  r.transform.condition_number = ConditionNumber(r.transform.m);
  r.gradient_norm = Gradient(r.transform, p, objective).Norm();
}

}  // namespace

std::string_view ObjectiveName(Objective o) {
  return o == Objective::kDensity ? "density" : "regression";
}

Objective ParseObjective(std::string_view name) {
  if (name == "density") return Objective::kDensity;
  if (name == "regression") return Objective::kRegression;
  throw Error("unknown objective '" + std::string(name) + "'");
}

ParallelBatch MakeParallelBatch(std::span<const LabeledVector> test_vectors,
                                const ConditionStats &test_stats,
                                std::span<const EnrollmentModel> models) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < models.size(); ++i) index.emplace(models[i].speaker, i);
  ParallelBatch batch;
  for (const auto &v : test_vectors) {
    auto it = index.find(v.speaker);
    if (it == index.end())
      throw Error("speaker '" + v.speaker + "' has no enrollment-condition model");
    batch.inputs.push_back(test_stats.Center(v.vec));
    batch.model_index.push_back(it->second);
  }
  if (batch.Size() == 0) throw Error("empty parallel batch");
  return batch;
}

double MllrObjective(const AffineTransform &transform, const ParallelBatch &batch,
                     std::span<const EnrollmentModel> models, Objective objective) {
  return Evaluate(transform, MakeProblem(batch, models), objective);
}

MllrGradient ComputeMllrGradient(const AffineTransform &transform,
                                 const ParallelBatch &batch,
                                 std::span<const EnrollmentModel> models,
                                 Objective objective) {
  return Gradient(transform, MakeProblem(batch, models), objective);
}

FitResult FitTransformGd(const ParallelBatch &batch,
                         std::span<const EnrollmentModel> models,
                         const AdamConfig &config) {
  const Problem full = MakeProblem(batch, models);
  const auto din = full.InDim();
  const auto dout = full.OutDim();
  if (full.Size() < static_cast<std::size_t>(din) + 1)
    throw Error("parallel batch needs at least d+1 samples");

  FitResult result;
  if (config.warm_start) {
    result.transform = SolveRegression(full, BuildNormalEquations(full));
  } else {
    if (din != dout) throw Error("identity initialization needs a square transform");
    result.transform = AffineTransform::Identity(static_cast<std::size_t>(din));
  }
  AffineTransform &t = result.transform;

  Matrix m1_m = Matrix::Zero(dout, din), m2_m = Matrix::Zero(dout, din);
  Vector m1_b = Vector::Zero(dout), m2_b = Vector::Zero(dout);
  std::mt19937_64 rng(config.seed);
  std::vector<std::size_t> order(full.Size());
  std::iota(order.begin(), order.end(), 0);
  std::size_t cursor = order.size();

  double previous = Evaluate(t, full, config.objective);
  std::size_t decreases = 0;
  const bool full_batch = config.batch_size == 0 || config.batch_size >= full.Size();
  for (std::size_t it = 1; it <= config.iterations; ++it) {
    MllrGradient g = Gradient(t, full, config.objective);
    result.gradient_norm = g.Norm();
    if (result.gradient_norm < config.tolerance) {
      result.converged = true;
      break;
    }
    if (!full_batch) {
      if (cursor + config.batch_size > order.size()) {
        std::shuffle(order.begin(), order.end(), rng);
        cursor = 0;
      }
      std::span<const std::size_t> rows(order.data() + cursor, config.batch_size);
      cursor += config.batch_size;
      g = Gradient(t, MakeProblem(batch, models, rows), config.objective);
    }

    const double c1 = 1.0 - std::pow(config.beta1, static_cast<double>(it));
    const double c2 = 1.0 - std::pow(config.beta2, static_cast<double>(it));
    m1_m = config.beta1 * m1_m + (1.0 - config.beta1) * g.dm;
    m2_m = config.beta2 * m2_m + (1.0 - config.beta2) * g.dm.cwiseProduct(g.dm);
    m1_b = config.beta1 * m1_b + (1.0 - config.beta1) * g.db;
    m2_b = config.beta2 * m2_b + (1.0 - config.beta2) * g.db.cwiseProduct(g.db);
    t.m.array() += config.step * (m1_m.array() / c1) /
                   ((m2_m.array() / c2).sqrt() + config.epsilon);
    t.b.array() += config.step * (m1_b.array() / c1) /
                   ((m2_b.array() / c2).sqrt() + config.epsilon);

    const double value = Evaluate(t, full, config.objective);
    result.trace.push_back(value);
    result.iterations = it;
    decreases = value < previous ? decreases + 1 : 0;
    previous = value;
    if (!std::isfinite(value) || decreases >= config.patience) {
      throw DivergenceError("transform training diverged after " + std::to_string(it) +
                                " iterations (objective " + std::to_string(value) + ")",
                            result.trace);
    }
  }
  Finish(result, full, config.objective);
  return result;
}

FitResult FitTransformClosedForm(const ParallelBatch &batch,
                                 std::span<const EnrollmentModel> models,
                                 Objective objective) {
  const Problem p = MakeProblem(batch, models);
  const NormalEquations ne = BuildNormalEquations(p);
  FitResult result;
  result.transform = SolveRegression(p, ne);
  result.converged = true;
  if (objective == Objective::kRegression) {
    result.trace.push_back(Evaluate(result.transform, p, objective));
    result.iterations = 1;
    Finish(result, p, objective);
    return result;
  }

  const auto din = p.InDim();
  const auto dout = p.OutDim();
  if (din != dout) throw Error("the density objective needs a square transform");
  Matrix rows(dout, din + 1);
  rows.leftCols(din) = result.transform.m;
  rows.col(din) = result.transform.b;
  if (!Eigen::FullPivLU<Matrix>(rows.leftCols(din)).isInvertible()) {
    rows.setZero();
    rows.leftCols(din).setIdentity();
  }

  std::vector<Eigen::LDLT<Matrix>> solvers;
  for (const auto &g : ne.gram) solvers.emplace_back(g);

  constexpr std::size_t kMaxSweeps = 20000;
  constexpr double kStepTolerance = 1e-13;
  result.converged = false;
  for (std::size_t sweep = 1; sweep <= kMaxSweeps; ++sweep) {
    double largest_step = 0.0;
    for (Eigen::Index j = 0; j < dout; ++j) {
      const auto sj = static_cast<std::size_t>(j);
      // log|det M| as a function of row j: log|det M_old| + log|p^T w|.
      const Matrix inv = rows.leftCols(din).inverse();
      Vector p_aug = Vector::Zero(din + 1);
      p_aug.head(din) = inv.col(j);
      const Vector g_inv_p = solvers[sj].solve(p_aug);
      const Vector g_inv_k = solvers[sj].solve(ne.rhs[sj]);
      const double a = p_aug.dot(g_inv_p);
      const double c = p_aug.dot(g_inv_k);
      const double disc = std::sqrt(c * c + 4.0 * a);
      Vector best;
      double best_value = -std::numeric_limits<double>::infinity();
      for (double alpha : {(-c + disc) / (2.0 * a), (-c - disc) / (2.0 * a)}) {
        const Vector w = g_inv_k + alpha * g_inv_p;
        const double value = -0.5 * w.dot(ne.gram[sj] * w) + ne.rhs[sj].dot(w) +
                             std::log(std::abs(p_aug.dot(w)));
        if (value > best_value) {
          best_value = value;
          best = w;
        }
      }
      largest_step = std::max(largest_step, (best.transpose() - rows.row(j)).cwiseAbs().maxCoeff());
      rows.row(j) = best.transpose();
    }
    result.transform.m = rows.leftCols(din);
    result.transform.b = rows.col(din);
    result.trace.push_back(Evaluate(result.transform, p, objective));
    result.iterations = sweep;
    if (largest_step < kStepTolerance * std::max(1.0, rows.cwiseAbs().maxCoeff())) {
      result.converged = true;
      break;
    }
  }
  Finish(result, p, objective);
  return result;
}

}  // namespace nlsd
