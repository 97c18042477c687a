#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "mvsrc/dictionary.hpp"
#include "mvsrc/matrix.hpp"
#include "mvsrc/solver.hpp"

namespace mvsrc {

// Hyperparameters of the joint prior/coefficient estimation loop.
struct JpcemConfig {
  double sigma = 0.018;        // noise standard deviation
  double lambda = 0.00002;     // slab precision, also the ridge weight
  double alpha = 1.0 / 9.0;    // caps kappa at 1/(1+alpha)
  double eps = 1e-6;           // stabilizer inside the kappa/rho/w updates
  double outer_tol = 1e-6;     // stop when ||x_k - x_{k-1}||^2 <= outer_tol
  int max_outer_iters = 50;
  double inner_tol = 1e-8;
  int max_inner_iters = 10000;

  // Throws InvalidConfig on any non-positive entry.
  void validate() const;
};

// Per-coefficient, per-view prior state (K x M) plus the hyperparameters that
// produced it.
struct PriorState {
  Matrix kappa;
  Matrix rho;
  Matrix weights;
  double sigma = 0.0;
  double lambda = 0.0;
  double alpha = 0.0;
  double eps = 0.0;
};

struct CoefficientMatrix {
  Matrix x;      // K x M
  Matrix gamma;  // K x M, |x| / (|x| + eps)
  std::vector<bool> converged_per_view;
  std::vector<int> outer_iters_per_view;

  std::size_t num_views() const noexcept { return x.cols(); }
};

// kappa_i = |x_i| / ((1 + alpha) max_j |x_j| + eps)
Vector kappa_update(std::span<const double> x, double alpha, double eps);

// rho_i = sigma^2 ln(2 pi sigma^2 (1 - kappa_i)^2 / (lambda kappa_i^2 + eps))
Vector rho_update(std::span<const double> kappa, double sigma, double lambda, double eps);

// w_i = max(rho_i, 0) / (|x_i| + eps)
Vector weight_update(std::span<const double> rho, std::span<const double> x, double eps);

// sqrt(lambda / (2 pi sigma^2)): the smallest alpha for which every kappa the
// loop can produce maps to a non-negative rho (eps -> 0).
double min_alpha(double sigma, double lambda);

// Per-iteration diagnostics for one view.
struct OuterIterate {
  double sq_change = 0.0;   // ||x_k - x_{k-1}||^2
  double max_kappa = 0.0;
  double min_rho = 0.0;
  bool inner_converged = false;
  int inner_iters = 0;
};

struct ViewSolution {
  Vector x;
  Vector gamma;
  Vector kappa;
  Vector rho;
  Vector weights;
  bool converged = false;
  int outer_iters = 0;
  std::vector<OuterIterate> trace;
};

// One view of the loop: start from w = 1, x^(0) = 0, x^(1) = 1, then alternate
// a warm-started weighted-lasso solve on the ridge-augmented system with the
// kappa, rho and w updates until the squared change drops to outer_tol or
// max_outer_iters solves have run.
ViewSolution jpcem_solve_view(const Matrix& design, std::span<const double> y,
                              const JpcemConfig& config);
ViewSolution jpcem_solve_view(const Dictionary& dict, std::span<const double> y,
                              const JpcemConfig& config);

// All M columns of Y (d x M). Views are independent; the result is identical
// to M single-view solves. `prior`, when given, receives the final kappa/rho/w.
CoefficientMatrix jpcem_solve(const Dictionary& dict, const Matrix& Y, const JpcemConfig& config,
                              PriorState* prior = nullptr);

// Receives the warning raised when alpha < min_alpha(sigma, lambda). Defaults
// to a line on stderr; pass an empty function to restore the default.
void set_warning_handler(std::function<void(std::string_view)> handler);

}  // namespace mvsrc
