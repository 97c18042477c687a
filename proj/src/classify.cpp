#include "mvsrc/classify.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mvsrc/error.hpp"
#include "mvsrc/kernels.hpp"

namespace mvsrc {

std::size_t argmin_lowest(std::span<const double> values, std::vector<std::size_t>* tied) {
  if (values.empty()) fail(ErrorCode::Dimension, "argmin over an empty set");
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] < values[best]) best = i;
  }
  if (tied) {
    tied->clear();
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (values[i] == values[best]) tied->push_back(i);
    }
  }
  return best;
}

ClassificationResult classify_multiview(const Dictionary& dict, const Matrix& Y,
                                        const CoefficientMatrix& X) {
  const std::size_t d = dict.rows();
  const std::size_t K = dict.cols();
  const std::size_t C = dict.num_classes();
  const std::size_t M = Y.cols();
  if (Y.rows() != d) {
    fail(ErrorCode::Dimension, "observation length " + std::to_string(Y.rows()) +
                                   " does not match dictionary rows " + std::to_string(d));
  }
  if (X.x.rows() != K || X.x.cols() != M) {
    fail(ErrorCode::Dimension, "coefficient matrix is " + std::to_string(X.x.rows()) + "x" +
                                   std::to_string(X.x.cols()) + ", expected " +
                                   std::to_string(K) + "x" + std::to_string(M));
  }

  ClassificationResult out;
  out.per_view_residuals = Matrix(C, M);
  out.residuals.assign(C, 0.0);
  Vector r(d);
  for (std::size_t m = 0; m < M; ++m) {
    const auto y = Y.col(m);
    const auto x = X.x.col(m);
    for (std::size_t c = 0; c < C; ++c) {
      std::copy(y.begin(), y.end(), r.begin());
      const ColumnRange block = dict.class_block(c);
      for (std::size_t i = block.begin; i < block.end; ++i) {
        if (x[i] != 0.0) kernels::axpy(-x[i], dict.atoms().col(i), r);
      }
      const double res = std::sqrt(kernels::sq_norm(r));
      out.per_view_residuals(c, m) = res;
      out.residuals[c] += res;
    }
  }
  out.predicted_class = argmin_lowest(out.residuals, &out.tied_classes);
  out.predicted_label = dict.class_labels()[out.predicted_class];
  out.coefficients = X;
  return out;
}

ClassificationResult multiview_src_baseline(const Dictionary& dict, const Matrix& Y, double weight,
                                            const InnerOptions& options) {
  if (!(weight > 0.0) || !std::isfinite(weight)) {
    fail(ErrorCode::InvalidParameter, "lasso weight must be positive, got " +
                                          std::to_string(weight));
  }
  if (Y.rows() != dict.rows()) {
    fail(ErrorCode::Dimension, "observation length " + std::to_string(Y.rows()) +
                                   " does not match dictionary rows " +
                                   std::to_string(dict.rows()));
  }
  const std::size_t K = dict.cols();
  const std::size_t M = Y.cols();
  CoefficientMatrix X;
  X.x = Matrix(K, M);
  X.gamma = Matrix(K, M);
  X.converged_per_view.resize(M);
  X.outer_iters_per_view.assign(M, 1);
  const Vector zeros(K, 0.0);
  for (std::size_t m = 0; m < M; ++m) {
    WeightedLassoProblem problem(augment(dict, Y.col(m), 0.0), Vector(K, weight));
    const LassoSolution sol = solve_weighted_lasso(problem, zeros, options);
    std::copy(sol.x.begin(), sol.x.end(), X.x.col(m).begin());
    for (std::size_t i = 0; i < K; ++i) X.gamma(i, m) = sol.x[i] != 0.0 ? 1.0 : 0.0;
    X.converged_per_view[m] = sol.converged;
  }
  return classify_multiview(dict, Y, X);
}

ClassificationResult src_single_baseline(const Dictionary& dict, std::span<const double> y,
                                         double weight, const InnerOptions& options) {
  Matrix Y(y.size(), 1);
  std::copy(y.begin(), y.end(), Y.col(0).begin());
  return multiview_src_baseline(dict, Y, weight, options);
}

ClassificationResult classify_jpcem(const Dictionary& dict, const Matrix& Y,
                                    const JpcemConfig& config) {
  return classify_multiview(dict, Y, jpcem_solve(dict, Y, config));
}

}  // namespace mvsrc
