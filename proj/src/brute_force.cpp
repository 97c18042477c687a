// Exhaustive weighted-lasso minimizer. Independent of the coordinate-descent
// path: it works on the explicitly stacked system and solves every
// support/sign restriction in closed form.

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "mvsrc/error.hpp"
#include "mvsrc/solver.hpp"

namespace mvsrc {

namespace {

// Supports of {0..K-1} ordered by cardinality, then lexicographically.
std::vector<std::vector<int>> ordered_supports(int K) {
  std::vector<std::vector<int>> out;
  for (int size = 0; size <= K; ++size) {
    // lexicographic combinations of `size` elements
    std::vector<int> idx(size);
    for (int i = 0; i < size; ++i) idx[i] = i;
    while (true) {
      out.push_back(idx);
      int p = size - 1;
      while (p >= 0 && idx[p] == K - size + p) --p;
      if (p < 0) break;
      ++idx[p];
      for (int q = p + 1; q < size; ++q) idx[q] = idx[q - 1] + 1;
    }
  }
  return out;
}

}  // namespace

Vector brute_force_lasso(const WeightedLassoProblem& problem) {
  const auto& sys = problem.system;
  const auto K = static_cast<int>(sys.cols());
  if (sys.cols() > kBruteForceMaxCols) {
    fail(ErrorCode::SizeLimit, "brute-force oracle supports at most " +
                                   std::to_string(kBruteForceMaxCols) + " columns, got " +
                                   std::to_string(K));
  }

  const Matrix dh = sys.d_hat();
  const Vector yh = sys.y_hat();
  const Eigen::Map<const Eigen::MatrixXd> A(dh.data().data(), static_cast<Eigen::Index>(dh.rows()),
                                            K);
  const Eigen::Map<const Eigen::VectorXd> b(yh.data(), static_cast<Eigen::Index>(yh.size()));
  const Eigen::Map<const Eigen::VectorXd> w(problem.weights.data(), K);
  const Eigen::MatrixXd gram = A.transpose() * A;
  const Eigen::VectorXd corr = A.transpose() * b;

  auto objective = [&](const Eigen::VectorXd& x) {
    return (b - A * x).squaredNorm() + w.dot(x.cwiseAbs());
  };

  Eigen::VectorXd best = Eigen::VectorXd::Zero(K);
  double best_obj = objective(best);

  for (const auto& support : ordered_supports(K)) {
    const auto n = static_cast<Eigen::Index>(support.size());
    if (n == 0) continue;
    Eigen::MatrixXd g(n, n);
    Eigen::VectorXd c(n);
    Eigen::VectorXd ws(n);
    for (Eigen::Index a = 0; a < n; ++a) {
      for (Eigen::Index bb = 0; bb < n; ++bb) g(a, bb) = gram(support[a], support[bb]);
      c(a) = corr(support[a]);
      ws(a) = w(support[a]);
    }
    const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> solver(g);

    for (unsigned long pattern = 0; pattern < (1ul << n); ++pattern) {
      Eigen::VectorXd rhs = c;
      for (Eigen::Index a = 0; a < n; ++a) {
        const double s = (pattern >> a) & 1ul ? -1.0 : 1.0;
        rhs(a) -= 0.5 * ws(a) * s;
      }
      const Eigen::VectorXd xs = solver.solve(rhs);
      Eigen::VectorXd x = Eigen::VectorXd::Zero(K);
      for (Eigen::Index a = 0; a < n; ++a) x(support[a]) = xs(a);
      const double obj = objective(x);
      // Strict improvement only: earlier (smaller, lexicographically first)
      // supports win ties.
      if (obj < best_obj - 1e-13 * (1.0 + std::abs(best_obj))) {
        best_obj = obj;
        best = x;
      }
    }
  }
  return Vector(best.data(), best.data() + K);
}

}  // namespace mvsrc
