#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "mvsrc/dictionary.hpp"
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

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::Usage;
}

TEST(Dictionary, IdentityCase) {
  const std::vector<Sample> s{make("1", "1", {1, 0}), make("2", "1", {0, 1})};
  const Dictionary d = build_dictionary(s);
  EXPECT_EQ(d.atoms(), Matrix::identity(2));
  ASSERT_EQ(d.num_classes(), 2u);
  EXPECT_EQ(d.class_block(0), (ColumnRange{0, 1}));
  EXPECT_EQ(d.class_block(1), (ColumnRange{1, 2}));
  EXPECT_EQ(d.class_labels(), (std::vector<std::string>{"1", "2"}));
}

TEST(Dictionary, NormalizesColumns) {
  const std::vector<Sample> s{make("a", "v", {3, 4})};
  const Dictionary d = build_dictionary(s);
  EXPECT_DOUBLE_EQ(d.atoms()(0, 0), 0.6);
  EXPECT_DOUBLE_EQ(d.atoms()(1, 0), 0.8);
}

TEST(Dictionary, BlockLayoutTwoClassesTwoViews) {
  // Inserted out of order; columns come out c1v1,c1v1,c1v2,c1v2,c2v1,...
  std::vector<Sample> s;
  int tag = 1;
  for (const char* c : {"2", "1"}) {
    for (const char* v : {"2", "1"}) {
      for (int k = 0; k < 2; ++k) s.push_back(make(c, v, {static_cast<double>(tag++), 1.0}));
    }
  }
  const Dictionary d = build_dictionary(s);
  EXPECT_EQ(d.cols(), 8u);
  ASSERT_EQ(d.num_classes(), 2u);
  ASSERT_EQ(d.num_views(), 2u);
  for (std::size_t c = 0; c < 2; ++c) {
    EXPECT_EQ(d.class_block(c).size(), 4u);  // k_c
    std::size_t width = 0;
    for (std::size_t m = 0; m < 2; ++m) {
      EXPECT_EQ(d.view_block(c, m).size(), 2u);  // t_m
      width += d.view_block(c, m).size();
    }
    EXPECT_EQ(width, d.class_block(c).size());
  }
  // c1v1 samples were inserted as tags 7, 8 (insertion order kept)
  const double n7 = std::hypot(7.0, 1.0);
  EXPECT_DOUBLE_EQ(d.atoms()(0, 0), 7.0 / n7);
  EXPECT_DOUBLE_EQ(d.atoms()(0, 1), 8.0 / std::hypot(8.0, 1.0));
  for (std::size_t j = 0; j < d.cols(); ++j) {
    double n = 0;
    for (double e : d.atoms().col(j)) n += e * e;
    EXPECT_NEAR(n, 1.0, 1e-12);
  }
}

TEST(Dictionary, NumericLabelOrdering) {
  const std::vector<Sample> s{make("10", "1", {1}), make("2", "1", {1}), make("b", "1", {1}),
                              make("a", "1", {1})};
  const Dictionary d = build_dictionary(s);
  EXPECT_EQ(d.class_labels(), (std::vector<std::string>{"2", "10", "a", "b"}));
}

TEST(Dictionary, Errors) {
  EXPECT_EQ(code_of([] { build_dictionary(std::vector<Sample>{}); }), ErrorCode::EmptyDictionary);
  EXPECT_EQ(code_of([] {
              build_dictionary(std::vector<Sample>{make("1", "1", {1, 2}), make("1", "1", {1})});
            }),
            ErrorCode::Dimension);
  EXPECT_EQ(code_of([] { build_dictionary(std::vector<Sample>{make("1", "1", {0, 0})}); }),
            ErrorCode::DegenerateSample);
  // class 2 lacks view 2
  EXPECT_EQ(code_of([] {
              build_dictionary(std::vector<Sample>{make("1", "1", {1}), make("1", "2", {1}),
                                                   make("2", "1", {1})});
            }),
            ErrorCode::Dimension);
}

TEST(DeltaC, Examples) {
  const std::vector<Sample> s{make("1", "1", {1, 0, 0, 0}), make("1", "1", {0, 1, 0, 0}),
                              make("2", "1", {0, 0, 1, 0}), make("2", "1", {0, 0, 0, 1})};
  const Dictionary d = build_dictionary(s);
  const Vector x{1, 2, 3, 4};
  EXPECT_EQ(delta_c(x, "1", d), (Vector{1, 2, 0, 0}));
  EXPECT_EQ(delta_c(x, "2", d), (Vector{0, 0, 3, 4}));
  EXPECT_EQ(delta_c(Vector(4, 0.0), "2", d), Vector(4, 0.0));
  EXPECT_EQ(code_of([&] { delta_c(x, "3", d); }), ErrorCode::InvalidClass);
  EXPECT_EQ(code_of([&] { delta_c(x, 7, d); }), ErrorCode::InvalidClass);
  EXPECT_EQ(code_of([&] { delta_c(Vector{1, 2}, 0, d); }), ErrorCode::Dimension);
}

// Random dictionaries: class masks partition x, are idempotent, and do not
// depend on the insertion order of the other classes.
TEST(DeltaC, PartitionIdempotenceAndOrderInvariance) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int C = 1 + static_cast<int>(rng() % 4);
    const int M = 1 + static_cast<int>(rng() % 3);
    std::vector<Sample> s;
    for (int c = 0; c < C; ++c) {
      for (int m = 0; m < M; ++m) {
        const int n = 1 + static_cast<int>(rng() % 3);
        for (int k = 0; k < n; ++k) {
          s.push_back(make(std::to_string(c), std::to_string(m), {u(rng) + 2.0, u(rng), u(rng)}));
        }
      }
    }
    const Dictionary d = build_dictionary(s);
    Vector x(d.cols());
    for (double& e : x) e = u(rng);

    Vector sum(d.cols(), 0.0);
    for (std::size_t c = 0; c < d.num_classes(); ++c) {
      const Vector part = delta_c(x, c, d);
      EXPECT_EQ(delta_c(part, c, d), part);
      for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += part[i];
    }
    EXPECT_EQ(sum, x);

    // Reverse insertion order: same blocks, same atoms per label.
    std::vector<Sample> rev;
    for (int c = C - 1; c >= 0; --c) {
      for (const auto& smp : s) {
        if (smp.class_id == std::to_string(c)) rev.push_back(smp);
      }
    }
    const Dictionary d2 = build_dictionary(rev);
    EXPECT_EQ(d2.atoms(), d.atoms());
    for (const auto& label : d.class_labels()) {
      EXPECT_EQ(delta_c(x, label, d2), delta_c(x, label, d));
    }
  }
}

}  // namespace
}  // namespace mvsrc
