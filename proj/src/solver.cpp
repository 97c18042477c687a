#include "mvsrc/solver.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mvsrc/error.hpp"
#include "mvsrc/kernels.hpp"

namespace mvsrc {

namespace {

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double e) { return std::isfinite(e); });
}

void require_length(std::span<const double> v, std::size_t n, const char* what) {
  if (v.size() != n) {
    fail(ErrorCode::Dimension, std::string(what) + " has length " + std::to_string(v.size()) +
                                   ", expected " + std::to_string(n));
  }
}

double soft(double z, double t) {
  if (z > t) return z - t;
  if (z < -t) return z + t;
  return 0.0;
}

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

// r = y - D x, touching only the nonzero coordinates.
void residual(const Matrix& D, std::span<const double> y, std::span<const double> x,
              std::span<double> r) {
  std::copy(y.begin(), y.end(), r.begin());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] != 0.0) kernels::axpy(-x[i], D.col(i), r);
  }
}

double objective_from_residual(std::span<const double> r, std::span<const double> x,
                               std::span<const double> w, double lambda) {
  double pen = 0.0;
  double ridge = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    pen += w[i] * std::abs(x[i]);
    ridge += x[i] * x[i];
  }
  return kernels::sq_norm(r) + lambda * ridge + pen;
}

double stationarity_from_residual(const Matrix& D, std::span<const double> r,
                                  std::span<const double> x, std::span<const double> w,
                                  double lambda) {
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double g = -2.0 * kernels::dot(D.col(i), r) + 2.0 * lambda * x[i];
    const double v = x[i] != 0.0 ? std::abs(g + w[i] * sign(x[i]))
                                 : std::max(0.0, std::abs(g) - w[i]);
    worst = std::max(worst, v);
  }
  return worst;
}

// Newton step on the current orthant face: minimize the smooth restriction to
// the support with signs frozen. If a coordinate would change sign, stop at
// the first crossing instead (the objective is convex along the segment).
// Returns false if no candidate could be formed.
bool active_set_candidate(const Matrix& D, std::span<const double> y, std::span<const double> x,
                          std::span<const double> w, double lambda, Vector& candidate) {
  std::vector<std::size_t> support;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] != 0.0) support.push_back(i);
  }
  const auto n = static_cast<Eigen::Index>(support.size());
  if (n == 0) return false;

  Eigen::MatrixXd gram(n, n);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index a = 0; a < n; ++a) {
    const auto ca = D.col(support[a]);
    for (Eigen::Index b = 0; b <= a; ++b) {
      const double g = kernels::dot(ca, D.col(support[b]));
      gram(a, b) = g;
      gram(b, a) = g;
    }
    gram(a, a) += lambda;
    rhs(a) = kernels::dot(ca, y) - 0.5 * w[support[a]] * sign(x[support[a]]);
  }
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success) return false;
  const Eigen::VectorXd target = llt.solve(rhs);
  if (!target.allFinite()) return false;

  double step = 1.0;
  for (Eigen::Index a = 0; a < n; ++a) {
    const double cur = x[support[a]];
    if (sign(target(a)) != sign(cur)) step = std::min(step, cur / (cur - target(a)));
  }
  candidate.assign(x.begin(), x.end());
  for (Eigen::Index a = 0; a < n; ++a) {
    const std::size_t i = support[a];
    const double cur = x[i];
    const bool crosses = sign(target(a)) != sign(cur);
    if (crosses && cur / (cur - target(a)) <= step) {
      candidate[i] = 0.0;
    } else {
      const double next = cur + step * (target(a) - cur);
      candidate[i] = sign(next) == sign(cur) ? next : 0.0;
    }
  }
  return true;
}

}  // namespace

AugmentedSystem::AugmentedSystem(const Matrix& design, std::span<const double> y, double lambda)
    : design_(&design), y_(y.begin(), y.end()), lambda_(lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    fail(ErrorCode::InvalidParameter, "ridge weight must be finite and >= 0, got " +
                                          std::to_string(lambda));
  }
  require_length(y, design.rows(), "observation");
  if (!all_finite(y)) fail(ErrorCode::InvalidInput, "observation contains NaN or Inf");
}

Matrix AugmentedSystem::d_hat() const {
  const std::size_t d = rows();
  const std::size_t K = cols();
  Matrix out(d + K, K);
  const double s = std::sqrt(lambda_);
  for (std::size_t j = 0; j < K; ++j) {
    const auto src = design_->col(j);
    auto dst = out.col(j);
    std::copy(src.begin(), src.end(), dst.begin());
    dst[d + j] = s;
  }
  return out;
}

Vector AugmentedSystem::y_hat() const {
  Vector out(rows() + cols(), 0.0);
  std::copy(y_.begin(), y_.end(), out.begin());
  return out;
}

AugmentedSystem augment(const Dictionary& dict, std::span<const double> y, double lambda) {
  return AugmentedSystem(dict.atoms(), y, lambda);
}

AugmentedSystem augment(const Matrix& design, std::span<const double> y, double lambda) {
  if (!all_finite(design.data())) {
    fail(ErrorCode::InvalidInput, "design matrix contains NaN or Inf");
  }
  return AugmentedSystem(design, y, lambda);
}

WeightedLassoProblem::WeightedLassoProblem(AugmentedSystem sys, Vector w)
    : system(std::move(sys)), weights(std::move(w)) {
  require_length(weights, system.cols(), "weight vector");
  for (double e : weights) {
    if (!std::isfinite(e) || e < 0.0) {
      fail(ErrorCode::InvalidInput, "weights must be finite and >= 0");
    }
  }
}

double lasso_objective(const WeightedLassoProblem& problem, std::span<const double> x) {
  const auto& sys = problem.system;
  require_length(x, sys.cols(), "coefficient vector");
  Vector r(sys.rows());
  residual(sys.design(), sys.y(), x, r);
  return objective_from_residual(r, x, problem.weights, sys.lambda());
}

double stationarity_residual(const WeightedLassoProblem& problem, std::span<const double> x) {
  const auto& sys = problem.system;
  require_length(x, sys.cols(), "coefficient vector");
  Vector r(sys.rows());
  residual(sys.design(), sys.y(), x, r);
  return stationarity_from_residual(sys.design(), r, x, problem.weights, sys.lambda());
}

LassoSolution solve_weighted_lasso(const WeightedLassoProblem& problem, std::span<const double> x0,
                                   const InnerOptions& options) {
  const auto& sys = problem.system;
  const Matrix& D = sys.design();
  const std::span<const double> y = sys.y();
  const std::span<const double> w = problem.weights;
  const double lambda = sys.lambda();
  const std::size_t K = sys.cols();

  require_length(x0, K, "warm start");
  if (!all_finite(x0)) fail(ErrorCode::InvalidInput, "warm start contains NaN or Inf");
  if (!(options.tol > 0.0) || options.max_iters < 1) {
    fail(ErrorCode::InvalidParameter, "inner tolerance and iteration cap must be positive");
  }

  Vector col_sq(K);
  for (std::size_t i = 0; i < K; ++i) col_sq[i] = kernels::sq_norm(D.col(i));

  LassoSolution out;
  out.x.assign(x0.begin(), x0.end());
  Vector& x = out.x;
  Vector r(sys.rows());
  residual(D, y, x, r);
  double obj = objective_from_residual(r, x, w, lambda);
  if (options.record_trace) out.objective_trace.push_back(obj);

  out.stationarity = stationarity_from_residual(D, r, x, w, lambda);
  if (out.stationarity <= options.tol) {
    out.converged = true;
    out.objective = obj;
    return out;
  }

  Vector candidate;
  Vector cand_r(sys.rows());
  for (int it = 1; it <= options.max_iters; ++it) {
    out.iterations = it;
    for (std::size_t i = 0; i < K; ++i) {
      const double denom = col_sq[i] + lambda;
      const double old = x[i];
      double next = 0.0;
      if (denom > 0.0) {
        const double z = kernels::dot(D.col(i), r) + col_sq[i] * old;
        next = (w[i] == 0.0 ? z : soft(z, 0.5 * w[i])) / denom;
      }
      if (next != old) {
        kernels::axpy(old - next, D.col(i), r);
        x[i] = next;
      }
    }
    // Refresh to stop drift from the incremental updates.
    residual(D, y, x, r);
    obj = objective_from_residual(r, x, w, lambda);
    out.stationarity = stationarity_from_residual(D, r, x, w, lambda);

    if (out.stationarity > options.tol &&
        active_set_candidate(D, y, x, w, lambda, candidate)) {
      residual(D, y, candidate, cand_r);
      const double cand_obj = objective_from_residual(cand_r, candidate, w, lambda);
      if (cand_obj <= obj) {
        x.swap(candidate);
        r.swap(cand_r);
        obj = cand_obj;
        out.stationarity = stationarity_from_residual(D, r, x, w, lambda);
      }
    }

    if (options.record_trace) out.objective_trace.push_back(obj);
    if (out.stationarity <= options.tol) {
      out.converged = true;
      break;
    }
  }
  out.objective = obj;
  return out;
}

double eval_objective(const Matrix& design, std::span<const double> y, std::span<const double> x,
                      std::span<const double> gamma, std::span<const double> rho, double lambda) {
  const std::size_t K = design.cols();
  require_length(y, design.rows(), "observation");
  require_length(x, K, "coefficient vector");
  require_length(gamma, K, "support indicator");
  require_length(rho, K, "rho vector");
  Vector r(design.rows());
  residual(design, y, x, r);
  double ridge = 0.0;
  double prior = 0.0;
  for (std::size_t i = 0; i < K; ++i) {
    ridge += x[i] * x[i];
    prior += gamma[i] * rho[i];
  }
  return kernels::sq_norm(r) + lambda * ridge + prior;
}

double eval_objective(const Dictionary& dict, std::span<const double> y,
                      std::span<const double> x, std::span<const double> gamma,
                      std::span<const double> rho, double lambda) {
  return eval_objective(dict.atoms(), y, x, gamma, rho, lambda);
}

}  // namespace mvsrc
