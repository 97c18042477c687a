#include "mvsrc/jpcem.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <iostream>
#include <mutex>
#include <numbers>
#include <sstream>
#include <string>

#include "mvsrc/error.hpp"
#include "mvsrc/kernels.hpp"

namespace mvsrc {

namespace {

std::mutex g_warn_mutex;
std::function<void(std::string_view)> g_warn_handler;

void warn(std::string_view msg) {
  std::lock_guard lock(g_warn_mutex);
  if (g_warn_handler) {
    g_warn_handler(msg);
  } else {
    std::cerr << "warning: " << msg << '\n';
  }
}

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

void set_warning_handler(std::function<void(std::string_view)> handler) {
  std::lock_guard lock(g_warn_mutex);
  g_warn_handler = std::move(handler);
}

void JpcemConfig::validate() const {
  const struct {
    const char* name;
    double value;
  } fields[] = {{"sigma", sigma}, {"lambda", lambda},       {"alpha", alpha},
                {"eps", eps},     {"outer_tol", outer_tol}, {"inner_tol", inner_tol}};
  for (const auto& f : fields) {
    if (!positive_finite(f.value)) {
      fail(ErrorCode::InvalidConfig,
           std::string(f.name) + " must be positive and finite, got " + std::to_string(f.value));
    }
  }
  if (max_outer_iters < 1 || max_inner_iters < 1) {
    fail(ErrorCode::InvalidConfig, "iteration limits must be >= 1");
  }
}

Vector kappa_update(std::span<const double> x, double alpha, double eps) {
  double x_max = 0.0;
  for (double v : x) x_max = std::max(x_max, std::abs(v));
  const double denom = (1.0 + alpha) * x_max + eps;
  Vector kappa(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) kappa[i] = std::abs(x[i] / denom);
  return kappa;
}

Vector rho_update(std::span<const double> kappa, double sigma, double lambda, double eps) {
  const double two_pi_s2 = 2.0 * std::numbers::pi * sigma * sigma;
  const double s2 = sigma * sigma;
  Vector rho(kappa.size());
  for (std::size_t i = 0; i < kappa.size(); ++i) {
    const double k = kappa[i];
    const double one_minus = 1.0 - k;
    rho[i] = s2 * std::log(two_pi_s2 * one_minus * one_minus / (lambda * k * k + eps));
  }
  return rho;
}

Vector weight_update(std::span<const double> rho, std::span<const double> x, double eps) {
  if (rho.size() != x.size()) {
    fail(ErrorCode::Dimension, "rho and x lengths differ");
  }
  Vector w(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    w[i] = std::max(rho[i], 0.0) / (std::abs(x[i]) + eps);
  }
  return w;
}

double min_alpha(double sigma, double lambda) {
  return std::sqrt(lambda / (2.0 * std::numbers::pi * sigma * sigma));
}

ViewSolution jpcem_solve_view(const Matrix& design, std::span<const double> y,
                              const JpcemConfig& config) {
  config.validate();
  const std::size_t K = design.cols();
  if (y.size() != design.rows()) {
    fail(ErrorCode::Dimension, "observation length " + std::to_string(y.size()) +
                                   " does not match dictionary rows " +
                                   std::to_string(design.rows()));
  }

  // Strict version of the alpha >= min_alpha condition that also covers the
  // eps term in the rho denominator.
  [[maybe_unused]] const bool rho_stays_positive =
      2.0 * std::numbers::pi * config.sigma * config.sigma * config.alpha * config.alpha >
      config.lambda + config.eps * (1.0 + config.alpha) * (1.0 + config.alpha);

  const InnerOptions inner{config.inner_tol, config.max_inner_iters, false};

  ViewSolution out;
  Vector prev(K, 0.0);
  Vector cur(K, 1.0);
  Vector weights(K, 1.0);
  Vector warm(K, 0.0);
  double change = kernels::sq_dist(cur, prev);

  while (change > config.outer_tol && out.outer_iters < config.max_outer_iters) {
    WeightedLassoProblem problem(AugmentedSystem(design, y, config.lambda), weights);
    LassoSolution sol = solve_weighted_lasso(problem, warm, inner);

    prev.swap(cur);
    cur = std::move(sol.x);
    out.kappa = kappa_update(cur, config.alpha, config.eps);
    out.rho = rho_update(out.kappa, config.sigma, config.lambda, config.eps);
    weights = weight_update(out.rho, cur, config.eps);
    warm = cur;
    ++out.outer_iters;
    change = kernels::sq_dist(cur, prev);

    OuterIterate step;
    step.sq_change = change;
    step.max_kappa = *std::max_element(out.kappa.begin(), out.kappa.end());
    step.min_rho = *std::min_element(out.rho.begin(), out.rho.end());
    step.inner_converged = sol.converged;
    step.inner_iters = sol.iterations;
    assert(!rho_stays_positive || step.min_rho > 0.0);
    out.trace.push_back(step);
  }

  out.converged = change <= config.outer_tol;
  out.weights = std::move(weights);
  out.x = std::move(cur);
  out.gamma.resize(K);
  for (std::size_t i = 0; i < K; ++i) {
    const double a = std::abs(out.x[i]);
    out.gamma[i] = a / (a + config.eps);
  }
  return out;
}

ViewSolution jpcem_solve_view(const Dictionary& dict, std::span<const double> y,
                              const JpcemConfig& config) {
  return jpcem_solve_view(dict.atoms(), y, config);
}

CoefficientMatrix jpcem_solve(const Dictionary& dict, const Matrix& Y, const JpcemConfig& config,
                              PriorState* prior) {
  config.validate();
  if (Y.rows() != dict.rows()) {
    fail(ErrorCode::Dimension, "observation length " + std::to_string(Y.rows()) +
                                   " does not match dictionary rows " +
                                   std::to_string(dict.rows()));
  }
  if (config.alpha < min_alpha(config.sigma, config.lambda)) {
    std::ostringstream msg;
    msg << "alpha=" << config.alpha << " is below min_alpha(sigma, lambda)="
        << min_alpha(config.sigma, config.lambda) << "; rho may turn negative";
    warn(msg.str());
  }

  const std::size_t K = dict.cols();
  const std::size_t M = Y.cols();
  CoefficientMatrix out;
  out.x = Matrix(K, M);
  out.gamma = Matrix(K, M);
  out.converged_per_view.resize(M);
  out.outer_iters_per_view.resize(M);
  if (prior) {
    *prior = PriorState{Matrix(K, M), Matrix(K, M), Matrix(K, M),
                        config.sigma, config.lambda, config.alpha, config.eps};
  }

  for (std::size_t m = 0; m < M; ++m) {
    ViewSolution view = jpcem_solve_view(dict.atoms(), Y.col(m), config);
    std::copy(view.x.begin(), view.x.end(), out.x.col(m).begin());
    std::copy(view.gamma.begin(), view.gamma.end(), out.gamma.col(m).begin());
    out.converged_per_view[m] = view.converged;
    out.outer_iters_per_view[m] = view.outer_iters;
    if (prior && !view.kappa.empty()) {
      std::copy(view.kappa.begin(), view.kappa.end(), prior->kappa.col(m).begin());
      std::copy(view.rho.begin(), view.rho.end(), prior->rho.col(m).begin());
      std::copy(view.weights.begin(), view.weights.end(), prior->weights.col(m).begin());
    }
  }
  return out;
}

}  // namespace mvsrc
