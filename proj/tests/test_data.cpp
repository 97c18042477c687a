#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>

#include "mvsrc/classify.hpp"
#include "mvsrc/data.hpp"
#include "mvsrc/error.hpp"
#include "mvsrc/image.hpp"
#include "mvsrc/kernels.hpp"

namespace fs = std::filesystem;

namespace mvsrc {
namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::Usage;
}

std::string message_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  ADD_FAILURE() << "no error thrown";
  return {};
}

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() /
           (std::string("mvsrc_") + info->test_suite_name() + "_" + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write_raw(const std::string& name, const std::string& bytes) {
    const fs::path p = dir_ / name;
    std::ofstream(p, std::ios::binary) << bytes;
    return p;
  }

  fs::path dir_;
};

TEST(Synth, NoiselessSamplesLieInTheirSubspace) {
  SynthConfig cfg;
  cfg.num_classes = 3;
  cfg.num_views = 2;
  cfg.ambient_dim = 30;
  cfg.subspace_dim = 4;
  cfg.train_per_view_per_class = 3;
  cfg.test_per_view_per_class = 2;
  cfg.noise_std = 0.0;
  const SynthDataset ds = synth_generate(cfg);
  EXPECT_EQ(ds.train.size(), 3u * 2u * 3u);
  EXPECT_EQ(ds.test.size(), 3u * 2u * 2u);
  ASSERT_EQ(ds.bases.size(), 6u);

  for (const Matrix& B : ds.bases) {
    for (std::size_t i = 0; i < B.cols(); ++i) {
      for (std::size_t j = 0; j < B.cols(); ++j) {
        EXPECT_NEAR(kernels::dot(B.col(i), B.col(j)), i == j ? 1.0 : 0.0, 1e-12);
      }
    }
  }
  auto check = [&](const Sample& s) {
    const std::size_t c = std::stoul(s.class_id) - 1;
    const std::size_t v = std::stoul(s.view_id) - 1;
    const Matrix& B = ds.bases[c * cfg.num_views + v];
    Vector r = s.values;
    for (std::size_t j = 0; j < B.cols(); ++j) {
      kernels::axpy(-kernels::dot(B.col(j), s.values), B.col(j), r);
    }
    EXPECT_LE(std::sqrt(kernels::sq_norm(r)), 1e-10);
    EXPECT_NEAR(kernels::sq_norm(s.values), 1.0, 1e-10);
  };
  for (const auto& s : ds.train) check(s);
  for (const auto& s : ds.test) check(s);
}

TEST(Synth, SameSeedSameData) {
  SynthConfig cfg;
  cfg.ambient_dim = 20;
  cfg.num_classes = 2;
  cfg.num_views = 2;
  const SynthDataset a = synth_generate(cfg);
  const SynthDataset b = synth_generate(cfg);
  ASSERT_EQ(a.train.size(), b.train.size());
  for (std::size_t i = 0; i < a.train.size(); ++i) EXPECT_EQ(a.train[i].values, b.train[i].values);
  for (std::size_t i = 0; i < a.test.size(); ++i) EXPECT_EQ(a.test[i].values, b.test[i].values);
  cfg.seed = 2;
  EXPECT_NE(synth_generate(cfg).train[0].values, a.train[0].values);
}

TEST(Synth, ValuesClippedToUnitRange) {
  SynthConfig cfg;
  cfg.ambient_dim = 10;
  cfg.subspace_dim = 2;
  cfg.noise_std = 2.0;
  for (const auto& s : synth_generate(cfg).train) {
    for (double e : s.values) {
      EXPECT_GE(e, -1.0);
      EXPECT_LE(e, 1.0);
    }
  }
}

TEST(Synth, InvalidConfig) {
  SynthConfig cfg;
  cfg.ambient_dim = 3;
  cfg.subspace_dim = 4;
  EXPECT_EQ(code_of([&] { synth_generate(cfg); }), ErrorCode::InvalidConfig);
  cfg = SynthConfig{};
  cfg.noise_std = -1.0;
  EXPECT_EQ(code_of([&] { synth_generate(cfg); }), ErrorCode::InvalidConfig);
  cfg = SynthConfig{};
  cfg.num_classes = 0;
  EXPECT_EQ(code_of([&] { synth_generate(cfg); }), ErrorCode::InvalidConfig);
}

TEST(Synth, SeparableSubspacesClassifyPerfectly) {
  SynthConfig cfg;
  cfg.num_classes = 2;
  cfg.num_views = 1;
  cfg.ambient_dim = 20;
  cfg.subspace_dim = 3;
  cfg.train_per_view_per_class = 5;
  cfg.test_per_view_per_class = 5;
  cfg.noise_std = 0.0;
  const SynthDataset ds = synth_generate(cfg);
  const Dictionary d = build_dictionary(ds.train);
  int correct = 0;
  for (const auto& s : ds.test) {
    correct += src_single_baseline(d, s.values, 0.01).predicted_label == s.class_id;
  }
  EXPECT_EQ(correct, 10);
}

std::vector<Sample> labelled_pool(std::size_t classes, std::size_t views, std::size_t per) {
  std::vector<Sample> pool;
  double tag = 0.0;
  for (std::size_t c = 1; c <= classes; ++c) {
    for (std::size_t v = 1; v <= views; ++v) {
      for (std::size_t k = 0; k < per; ++k) {
        Sample s;
        s.class_id = std::to_string(c);
        s.view_id = std::to_string(v);
        s.values = {tag++};
        pool.push_back(s);
      }
    }
  }
  return pool;
}

TEST(Split, DeterministicDisjointAndSized) {
  const auto pool = labelled_pool(3, 2, 10);
  const Split a = split_random(pool, 4, 5, 42);
  const Split b = split_random(pool, 4, 5, 42);
  ASSERT_EQ(a.train.size(), 3u * 2u * 4u);
  ASSERT_EQ(a.test.size(), 3u * 2u * 5u);
  for (std::size_t i = 0; i < a.train.size(); ++i) EXPECT_EQ(a.train[i].values, b.train[i].values);
  for (std::size_t i = 0; i < a.test.size(); ++i) EXPECT_EQ(a.test[i].values, b.test[i].values);

  std::set<double> seen;
  for (const auto& s : a.train) {
    EXPECT_EQ(s.role, Role::Train);
    EXPECT_TRUE(seen.insert(s.values[0]).second);
  }
  for (const auto& s : a.test) {
    EXPECT_EQ(s.role, Role::Test);
    EXPECT_TRUE(seen.insert(s.values[0]).second);
  }

  const Split c = split_random(pool, 4, 5, 43);
  bool differs = false;
  for (std::size_t i = 0; i < a.train.size(); ++i) differs |= a.train[i].values != c.train[i].values;
  EXPECT_TRUE(differs);
}

TEST(Split, EdgeCounts) {
  const auto pool = labelled_pool(2, 1, 6);
  const Split all = split_random(pool, 6, 0, 1);
  EXPECT_EQ(all.train.size(), 12u);
  EXPECT_TRUE(all.test.empty());

  const auto big = labelled_pool(1, 1, 177);
  const Split s = split_random(big, 127, 50, 9);
  EXPECT_EQ(s.train.size(), 127u);
  EXPECT_EQ(s.test.size(), 50u);

  const std::string msg = message_of([&] { split_random(pool, 5, 2, 1); });
  EXPECT_NE(msg.find("class '1' view '1'"), std::string::npos) << msg;
  EXPECT_EQ(code_of([&] { split_random(pool, 5, 2, 1); }), ErrorCode::Count);
}

TEST(Observations, GroupByIndexAcrossViews) {
  const auto pool = labelled_pool(2, 3, 2);
  const std::vector<std::string> views{"1", "3"};
  const auto obs = assemble_observations(pool, views);
  ASSERT_EQ(obs.size(), 4u);
  EXPECT_EQ(obs[0].class_id, "1");
  EXPECT_EQ(obs[0].Y.cols(), 2u);
  EXPECT_EQ(obs[0].Y(0, 0), 0.0);  // class 1 view 1 sample 0
  EXPECT_EQ(obs[0].Y(0, 1), 4.0);  // class 1 view 3 sample 0
  EXPECT_EQ(obs[3].Y(0, 1), 11.0);
  EXPECT_EQ(first_views(pool, 2).size(), 8u);
  EXPECT_EQ(code_of([&] { first_views(pool, 4); }), ErrorCode::Count);
}

TEST_F(TempDir, PgmConstantWhite) {
  const fs::path p = write_raw("white.pgm", "P5\n# comment\n4 2\n255\n" + std::string(8, '\xff'));
  const GrayImage img = read_pgm(p);
  EXPECT_EQ(img.width, 4u);
  EXPECT_EQ(img.height, 2u);
  EXPECT_EQ(vectorize(img, 4, 2), Vector(8, 1.0));
}

TEST_F(TempDir, PgmResizeLength) {
  GrayImage img{80, 40, std::vector<std::uint8_t>(80 * 40, 128)};
  write_pgm(dir_ / "big.pgm", img);
  const Vector v = vectorize(read_pgm(dir_ / "big.pgm"), 40, 20);
  ASSERT_EQ(v.size(), 800u);
  for (double e : v) EXPECT_NEAR(e, 128.0 / 255.0, 1e-12);
}

TEST_F(TempDir, PgmResizeBilinearValues) {
  // 2x1 -> 4x1 with pixel-center alignment: src x = (dst + 0.5) / 2 - 0.5.
  GrayImage img{2, 1, {0, 100}};
  const Vector r = resize_bilinear(img, 4, 1);
  EXPECT_EQ(r, (Vector{0.0, 25.0, 75.0, 100.0}));
  EXPECT_EQ(resize_bilinear(img, 2, 1), (Vector{0.0, 100.0}));
}

TEST_F(TempDir, PgmErrors) {
  const fs::path color = write_raw("c.ppm", "P6\n1 1\n255\n\x01\x02\x03");
  EXPECT_NE(message_of([&] { read_pgm(color); }).find("color"), std::string::npos);
  const fs::path ascii = write_raw("a.pgm", "P2\n1 1\n255\n7\n");
  EXPECT_NE(message_of([&] { read_pgm(ascii); }).find("ASCII"), std::string::npos);
  const fs::path wide = write_raw("w.pgm", "P5\n1 1\n65535\n\x01\x02");
  EXPECT_EQ(code_of([&] { read_pgm(wide); }), ErrorCode::Ingestion);
  const fs::path trunc = write_raw("t.pgm", "P5\n4 4\n255\n\x01\x02");
  EXPECT_NE(message_of([&] { read_pgm(trunc); }).find("truncated"), std::string::npos);
  EXPECT_NE(message_of([&] { read_pgm(trunc); }).find("t.pgm"), std::string::npos);
  EXPECT_EQ(code_of([&] { read_pgm(dir_ / "missing.pgm"); }), ErrorCode::Ingestion);
}

TEST_F(TempDir, ManifestRoundTripAndPassThrough) {
  GrayImage img{40, 20, std::vector<std::uint8_t>(800)};
  for (std::size_t i = 0; i < 800; ++i) img.pixels[i] = static_cast<std::uint8_t>(i % 256);
  write_pgm(dir_ / "a.pgm", img);
  write_pgm(dir_ / "b.pgm", img);
  write_raw("m.csv", "path,class,view,role\na.pgm,1,1,train\nb.pgm,1,1,test\n");
  const DatasetManifest m = load_manifest(dir_ / "m.csv");
  ASSERT_EQ(m.entries.size(), 2u);
  EXPECT_EQ(m.entries[1].role, Role::Test);
  const auto samples = load_samples(m);
  ASSERT_EQ(samples.size(), 2u);
  ASSERT_EQ(samples[0].values.size(), 800u);
  for (std::size_t i = 0; i < 800; ++i) {
    EXPECT_EQ(samples[0].values[i], static_cast<double>(i % 256) / 255.0);
  }

  write_manifest(dir_ / "copy.csv", m);
  const DatasetManifest again = load_manifest(dir_ / "copy.csv");
  ASSERT_EQ(again.entries.size(), 2u);
  EXPECT_EQ(again.entries[0].path, m.entries[0].path);
}

TEST_F(TempDir, ManifestErrors) {
  write_raw("h.csv", "file,class,view,role\na.pgm,1,1,train\n");
  EXPECT_NE(message_of([&] { load_manifest(dir_ / "h.csv"); }).find("header"), std::string::npos);
  write_raw("d.csv", "path,class,view,role\na.pgm,1,1,train\na.pgm,1,1,test\n");
  EXPECT_NE(message_of([&] { load_manifest(dir_ / "d.csv"); }).find("duplicate"), std::string::npos);
  write_raw("t.csv", "path,class,view,role\na.pgm,1,1,train\nb.pgm,1,2,test\n");
  EXPECT_NE(message_of([&] { load_manifest(dir_ / "t.csv"); }).find("no train entry"),
            std::string::npos);
  write_raw("r.csv", "path,class,view,role\na.pgm,1,1,holdout\n");
  EXPECT_EQ(code_of([&] { load_manifest(dir_ / "r.csv"); }), ErrorCode::Ingestion);
}

TEST_F(TempDir, ExportThenLoad) {
  SynthConfig cfg;
  cfg.num_classes = 2;
  cfg.num_views = 2;
  cfg.ambient_dim = 32;
  cfg.subspace_dim = 3;
  cfg.train_per_view_per_class = 2;
  cfg.test_per_view_per_class = 1;
  const SynthDataset ds = synth_generate(cfg);
  export_dataset(dir_ / "out", ds.train, ds.test, 8, 4);
  const DatasetManifest m = load_manifest(dir_ / "out" / "manifest.csv", 8, 4);
  EXPECT_EQ(m.entries.size(), 12u);
  const auto samples = load_samples(m);
  ASSERT_EQ(samples.size(), 12u);
  std::size_t i = 0;
  for (const auto& s : samples) {
    if (s.role != Role::Train) continue;
    const Sample& orig = ds.train[i++];
    EXPECT_EQ(s.class_id, orig.class_id);
    for (std::size_t k = 0; k < orig.values.size(); ++k) {
      EXPECT_NEAR(s.values[k], (orig.values[k] + 1.0) / 2.0, 0.5 / 255.0 + 1e-12);
    }
  }
  EXPECT_EQ(i, ds.train.size());
}

}  // namespace
}  // namespace mvsrc
