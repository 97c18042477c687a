#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "mvsrc/dictionary.hpp"
#include "mvsrc/jpcem.hpp"
#include "mvsrc/matrix.hpp"
#include "mvsrc/solver.hpp"

namespace mvsrc {

struct ClassificationResult {
  std::size_t predicted_class = 0;   // dense class index
  std::string predicted_label;
  Vector residuals;                  // per class, summed over views
  Matrix per_view_residuals;         // C x M
  CoefficientMatrix coefficients;
  std::vector<std::size_t> tied_classes;  // classes sharing the minimum; size > 1 on a tie
};

// Residual rule: c* = argmin_c sum_m ||y_m - D delta_c(x_m)||_2 (unsquared
// norms). Ties go to the lowest class index. One view gives the single-view
// rule.
ClassificationResult classify_multiview(const Dictionary& dict, const Matrix& Y,
                                        const CoefficientMatrix& X);

// argmin with lowest-index tie breaking; fills `tied` with every minimizer.
std::size_t argmin_lowest(std::span<const double> values, std::vector<std::size_t>* tied = nullptr);

// Plain sparse-representation classifier: uniform-weight lasso
// min ||y - D x||^2 + weight ||x||_1 (no ridge), then the residual rule.
ClassificationResult src_single_baseline(const Dictionary& dict, std::span<const double> y,
                                         double weight, const InnerOptions& options = {});

// The same lasso solved independently per view, residuals summed over views.
ClassificationResult multiview_src_baseline(const Dictionary& dict, const Matrix& Y, double weight,
                                            const InnerOptions& options = {});

// JPCEM coefficients followed by the residual rule.
ClassificationResult classify_jpcem(const Dictionary& dict, const Matrix& Y,
                                    const JpcemConfig& config);

}  // namespace mvsrc
