#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <string>

#include "mvsrc/classify.hpp"
#include "mvsrc/error.hpp"

namespace mvsrc {
namespace {

Sample make(std::string cls, std::string view, std::vector<double> v) {
  Sample s;
  s.class_id = std::move(cls);
  s.view_id = std::move(view);
  s.values = std::move(v);
  return s;
}

Vector unit(std::size_t n, std::size_t i) {
  Vector v(n, 0.0);
  v[i] = 1.0;
  return v;
}

Matrix column(const Vector& v) {
  Matrix m(v.size(), 1);
  std::copy(v.begin(), v.end(), m.col(0).begin());
  return m;
}

CoefficientMatrix coefficients(const Matrix& x) {
  CoefficientMatrix X;
  X.x = x;
  X.gamma = Matrix(x.rows(), x.cols());
  X.converged_per_view.assign(x.cols(), true);
  X.outer_iters_per_view.assign(x.cols(), 1);
  return X;
}

Dictionary two_class_identity4() {
  return build_dictionary(std::vector<Sample>{make("1", "1", unit(4, 0)), make("1", "1", unit(4, 1)),
                                              make("2", "1", unit(4, 2)), make("2", "1", unit(4, 3))});
}

TEST(Classify, SingleClassAlwaysWins) {
  const Dictionary d =
      build_dictionary(std::vector<Sample>{make("only", "1", {1, 2}), make("only", "1", {0, 1})});
  const ClassificationResult r = src_single_baseline(d, Vector{5, -1}, 0.1);
  EXPECT_EQ(r.predicted_class, 0u);
  EXPECT_EQ(r.predicted_label, "only");
}

TEST(Classify, PerfectReconstructionHasZeroResidual) {
  const Dictionary d = two_class_identity4();
  const Vector y{0, 0, 0.3, -0.7};
  const ClassificationResult r = classify_multiview(d, column(y), coefficients(column(y)));
  EXPECT_EQ(r.residuals[1], 0.0);
  EXPECT_EQ(r.predicted_label, "2");
}

TEST(Classify, ResidualExample) {
  const Dictionary d = two_class_identity4();
  const Vector y{1, 0, 0.1, 0};
  const ClassificationResult r = classify_multiview(d, column(y), coefficients(column(y)));
  EXPECT_NEAR(r.residuals[0], 0.1, 1e-15);
  EXPECT_NEAR(r.residuals[1], 1.0, 1e-15);
  EXPECT_EQ(r.predicted_label, "1");
  EXPECT_EQ(r.tied_classes, (std::vector<std::size_t>{0}));
}

TEST(Classify, SrcSingleSoftThresholdExample) {
  const Dictionary d =
      build_dictionary(std::vector<Sample>{make("1", "1", {1, 0}), make("2", "1", {0, 1})});
  const ClassificationResult r = src_single_baseline(d, Vector{1, 0.05}, 0.1);
  EXPECT_NEAR(r.coefficients.x(0, 0), 0.95, 1e-8);
  EXPECT_EQ(r.coefficients.x(1, 0), 0.0);
  EXPECT_EQ(r.predicted_label, "1");
}

TEST(Classify, AllZeroCoefficientsTieToLowestIndex) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n;
  std::vector<Sample> s;
  for (int c = 1; c <= 3; ++c) {
    for (int k = 0; k < 2; ++k) s.push_back(make(std::to_string(c), "1", {n(rng), n(rng), n(rng)}));
  }
  const Dictionary d = build_dictionary(s);
  const Vector y{n(rng), n(rng), n(rng)};
  double max_corr = 0.0;
  for (std::size_t j = 0; j < d.cols(); ++j) {
    double c = 0.0;
    for (std::size_t r = 0; r < 3; ++r) c += d.atoms()(r, j) * y[r];
    max_corr = std::max(max_corr, std::abs(c));
  }
  const ClassificationResult r = src_single_baseline(d, y, 2.0 * max_corr);
  EXPECT_EQ(r.coefficients.x, Matrix(d.cols(), 1));
  EXPECT_EQ(r.predicted_class, 0u);
  EXPECT_EQ(r.tied_classes, (std::vector<std::size_t>{0, 1, 2}));
}

TEST(Classify, AtomObservationPicksItsClass) {
  std::mt19937_64 rng(10);
  std::normal_distribution<double> n;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Sample> s;
    for (int c = 1; c <= 3; ++c) {
      for (int k = 0; k < 3; ++k) {
        Vector v(6);
        for (double& e : v) e = n(rng);
        s.push_back(make(std::to_string(c), "1", v));
      }
    }
    const Dictionary d = build_dictionary(s);
    const std::size_t j = rng() % d.cols();
    const Vector y(d.atoms().col(j).begin(), d.atoms().col(j).end());
    const double w = 0.01;
    const ClassificationResult r = src_single_baseline(d, y, w);
    const Vector bf = brute_force_lasso(WeightedLassoProblem(augment(d, y, 0.0), Vector(d.cols(), w)));
    for (std::size_t i = 0; i < d.cols(); ++i) EXPECT_NEAR(r.coefficients.x(i, 0), bf[i], 1e-6);
    EXPECT_EQ(r.predicted_class, d.class_of_column(j)) << "trial " << trial;
  }
}

TEST(Classify, MultiviewWithOneViewEqualsSingle) {
  const Dictionary d = two_class_identity4();
  const Vector y{0.2, 0.9, 0.4, 0.1};
  const ClassificationResult a = src_single_baseline(d, y, 0.05);
  const ClassificationResult b = multiview_src_baseline(d, column(y), 0.05);
  EXPECT_EQ(a.residuals, b.residuals);
  EXPECT_EQ(a.predicted_class, b.predicted_class);
}

TEST(Classify, TwoViewExample) {
  const Dictionary d = build_dictionary(std::vector<Sample>{
      make("1", "1", unit(4, 0)), make("1", "2", unit(4, 1)), make("2", "1", unit(4, 2)),
      make("2", "2", unit(4, 3))});
  Matrix Y(4, 2);
  Y(0, 0) = 1.0;
  Y(2, 0) = 0.2;
  Y(1, 1) = 0.3;
  Y(3, 1) = 0.9;
  const ClassificationResult r = multiview_src_baseline(d, Y, 0.02);
  // Coefficients are y shrunk by 0.01; class residuals keep the other entries.
  const double c1 = std::sqrt(0.01 * 0.01 + 0.2 * 0.2) + std::sqrt(0.01 * 0.01 + 0.9 * 0.9);
  const double c2 = std::sqrt(1.0 + 0.01 * 0.01) + std::sqrt(0.3 * 0.3 + 0.01 * 0.01);
  EXPECT_NEAR(r.residuals[0], c1, 1e-7);
  EXPECT_NEAR(r.residuals[1], c2, 1e-7);
  EXPECT_NEAR(r.residuals[0], 1.10030, 1e-5);
  EXPECT_NEAR(r.residuals[1], 1.30022, 1e-5);
  EXPECT_EQ(r.predicted_label, "1");
  EXPECT_NEAR(r.per_view_residuals(0, 1), std::sqrt(0.8101), 1e-7);
}

// Residual rule properties on random dictionaries and coefficients.
TEST(Classify, ScalingAndViewDuplication) {
  std::mt19937_64 rng(61);
  std::normal_distribution<double> n;
  std::uniform_real_distribution<double> t(0.1, 10.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Sample> s;
    const int C = 2 + static_cast<int>(rng() % 3);
    for (int c = 1; c <= C; ++c) {
      for (int k = 0; k < 2; ++k) {
        Vector v(5);
        for (double& e : v) e = n(rng);
        s.push_back(make(std::to_string(c), "1", v));
      }
    }
    const Dictionary d = build_dictionary(s);
    Matrix Y(5, 2);
    Matrix X(d.cols(), 2);
    for (double& e : Y.data()) e = n(rng);
    for (double& e : X.data()) e = n(rng);
    const ClassificationResult base = classify_multiview(d, Y, coefficients(X));

    const double scale = t(rng);
    Matrix Ys = Y;
    Matrix Xs = X;
    for (double& e : Ys.data()) e *= scale;
    for (double& e : Xs.data()) e *= scale;
    EXPECT_EQ(classify_multiview(d, Ys, coefficients(Xs)).predicted_class, base.predicted_class);

    // Both views equal: residuals double those of the single view.
    Matrix Y2(5, 2);
    Matrix X2(d.cols(), 2);
    for (std::size_t m = 0; m < 2; ++m) {
      std::copy(Y.col(0).begin(), Y.col(0).end(), Y2.col(m).begin());
      std::copy(X.col(0).begin(), X.col(0).end(), X2.col(m).begin());
    }
    Matrix Y1(5, 1);
    Matrix X1(d.cols(), 1);
    std::copy(Y.col(0).begin(), Y.col(0).end(), Y1.col(0).begin());
    std::copy(X.col(0).begin(), X.col(0).end(), X1.col(0).begin());
    const ClassificationResult one = classify_multiview(d, Y1, coefficients(X1));
    const ClassificationResult two = classify_multiview(d, Y2, coefficients(X2));
    for (std::size_t c = 0; c < d.num_classes(); ++c) {
      EXPECT_DOUBLE_EQ(two.residuals[c], 2.0 * one.residuals[c]);
    }
    EXPECT_EQ(two.predicted_class, one.predicted_class);

    // Appending a copy of a view whose class already wins keeps the argmin.
    Matrix Y3(5, 3);
    Matrix X3(d.cols(), 3);
    std::copy(Y.data().begin(), Y.data().end(), Y3.data().begin());
    std::copy(X.data().begin(), X.data().end(), X3.data().begin());
    Vector view0(d.num_classes());
    for (std::size_t c = 0; c < view0.size(); ++c) view0[c] = base.per_view_residuals(c, 0);
    if (argmin_lowest(view0) == base.predicted_class) {
      std::copy(Y.col(0).begin(), Y.col(0).end(), Y3.col(2).begin());
      std::copy(X.col(0).begin(), X.col(0).end(), X3.col(2).begin());
      EXPECT_EQ(classify_multiview(d, Y3, coefficients(X3)).predicted_class, base.predicted_class);
    }
  }
}

TEST(Classify, Errors) {
  const Dictionary d = two_class_identity4();
  EXPECT_THROW(src_single_baseline(d, Vector{1, 2, 3}, 0.1), Error);
  EXPECT_THROW(src_single_baseline(d, Vector{1, 2, 3, 4}, 0.0), Error);
  EXPECT_THROW(classify_multiview(d, Matrix(4, 2), coefficients(Matrix(4, 1))), Error);
  EXPECT_THROW(argmin_lowest(Vector{}), Error);
}

TEST(Classify, JpcemOnSeparableViews) {
  const Dictionary d = build_dictionary(std::vector<Sample>{
      make("1", "1", unit(4, 0)), make("1", "2", unit(4, 1)), make("2", "1", unit(4, 2)),
      make("2", "2", unit(4, 3))});
  Matrix Y(4, 2);
  Y(2, 0) = 0.8;
  Y(0, 0) = 0.1;
  Y(3, 1) = 0.6;
  const ClassificationResult r = classify_jpcem(d, Y, JpcemConfig{});
  EXPECT_EQ(r.predicted_label, "2");
  EXPECT_EQ(r.coefficients.x.cols(), 2u);
}

}  // namespace
}  // namespace mvsrc
