#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mvsrc/dictionary.hpp"
#include "mvsrc/matrix.hpp"

namespace mvsrc {

// Ridge-augmented least-squares system
//
//   y_hat = [ y ; 0 ],   D_hat = [ D ; sqrt(lambda) I ]
//
// so that ||y_hat - D_hat x||^2 = ||y - D x||^2 + lambda ||x||^2. The stacked
// matrix is never formed by the solver; `d_hat()` materializes it on request.
// Holds a non-owning reference to D, which must outlive the system.
class AugmentedSystem {
 public:
  AugmentedSystem(const Matrix& design, std::span<const double> y, double lambda);
  AugmentedSystem(Matrix&&, std::span<const double>, double) = delete;

  const Matrix& design() const noexcept { return *design_; }
  std::span<const double> y() const noexcept { return y_; }
  double lambda() const noexcept { return lambda_; }
  std::size_t rows() const noexcept { return design_->rows(); }
  std::size_t cols() const noexcept { return design_->cols(); }

  Matrix d_hat() const;
  Vector y_hat() const;

 private:
  const Matrix* design_;
  Vector y_;
  double lambda_;
};

AugmentedSystem augment(const Dictionary& dict, std::span<const double> y, double lambda);
AugmentedSystem augment(const Matrix& design, std::span<const double> y, double lambda);
AugmentedSystem augment(Matrix&&, std::span<const double>, double) = delete;

// min_x ||y_hat - D_hat x||^2 + sum_i w_i |x_i|
struct WeightedLassoProblem {
  WeightedLassoProblem(AugmentedSystem system, Vector weights);

  AugmentedSystem system;
  Vector weights;
};

struct InnerOptions {
  double tol = 1e-8;           // max-norm subgradient residual
  int max_iters = 10000;       // full coordinate sweeps
  bool record_trace = false;   // keep the objective after every sweep
};

struct LassoSolution {
  Vector x;
  bool converged = false;
  int iterations = 0;
  double stationarity = 0.0;
  double objective = 0.0;
  // objective at x0, then after every iteration; filled when record_trace is set
  std::vector<double> objective_trace;
};

// Cyclic coordinate descent with exact coordinate minimization, plus an
// active-set Newton step on the current support/sign pattern whenever it
// lowers the objective. Deterministic for identical inputs. On hitting
// max_iters the best iterate is returned with converged == false.
LassoSolution solve_weighted_lasso(const WeightedLassoProblem& problem, std::span<const double> x0,
                                   const InnerOptions& options = {});

// Exact minimizer by enumeration of every support and sign pattern. Test
// oracle; K <= 12.
Vector brute_force_lasso(const WeightedLassoProblem& problem);

inline constexpr std::size_t kBruteForceMaxCols = 12;

// ||y_hat - D_hat x||^2 + sum_i w_i |x_i|
double lasso_objective(const WeightedLassoProblem& problem, std::span<const double> x);

// Max-norm distance of the zero vector from the subdifferential at x.
double stationarity_residual(const WeightedLassoProblem& problem, std::span<const double> x);

// ||y - D x||^2 + lambda ||x||^2 + sum_i gamma_i rho_i
double eval_objective(const Matrix& design, std::span<const double> y, std::span<const double> x,
                      std::span<const double> gamma, std::span<const double> rho, double lambda);
double eval_objective(const Dictionary& dict, std::span<const double> y,
                      std::span<const double> x, std::span<const double> gamma,
                      std::span<const double> rho, double lambda);

}  // namespace mvsrc
