#include "mvsrc/data.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>

#include "mvsrc/error.hpp"
#include "mvsrc/kernels.hpp"
#include "mvsrc/rng.hpp"

namespace mvsrc {

namespace {

Matrix random_orthonormal_basis(std::size_t d, std::size_t k, Rng& rng) {
  Matrix B(d, k);
  for (std::size_t j = 0; j < k; ++j) {
    auto col = B.col(j);
    while (true) {
      for (double& e : col) e = rng.normal();
      for (std::size_t p = 0; p < j; ++p) {
        const double proj = kernels::dot(B.col(p), col);
        kernels::axpy(-proj, B.col(p), col);
      }
      const double norm = std::sqrt(kernels::sq_norm(col));
      if (norm > 1e-8) {
        for (double& e : col) e /= norm;
        break;
      }
    }
  }
  return B;
}

Sample draw_sample(const Matrix& B, double noise_std, Rng& rng, const std::string& cls,
                   const std::string& view, Role role) {
  const std::size_t k = B.cols();
  std::vector<double> u(k);
  double norm_sq = 0.0;
  while (norm_sq == 0.0) {
    norm_sq = 0.0;
    for (double& e : u) {
      e = rng.uniform();
      norm_sq += e * e;
    }
  }
  const double inv = 1.0 / std::sqrt(norm_sq);

  Sample s;
  s.class_id = cls;
  s.view_id = view;
  s.role = role;
  s.values.assign(B.rows(), 0.0);
  for (std::size_t j = 0; j < k; ++j) kernels::axpy(u[j] * inv, B.col(j), s.values);
  if (noise_std > 0.0) {
    for (double& e : s.values) e += noise_std * rng.normal();
  }
  for (double& e : s.values) e = std::clamp(e, -1.0, 1.0);
  return s;
}

using GroupKey = std::pair<std::string, std::string>;

struct GroupLess {
  bool operator()(const GroupKey& a, const GroupKey& b) const {
    if (a.first != b.first) return label_less(a.first, b.first);
    return label_less(a.second, b.second);
  }
};

std::vector<std::string> sorted_unique(std::vector<std::string> v) {
  std::sort(v.begin(), v.end(), label_less);
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

void SynthConfig::validate() const {
  if (num_classes < 1 || num_views < 1 || ambient_dim < 1 || subspace_dim < 1 ||
      train_per_view_per_class < 1) {
    fail(ErrorCode::InvalidConfig, "class, view, dimension and train counts must be >= 1");
  }
  if (subspace_dim > ambient_dim) {
    fail(ErrorCode::InvalidConfig, "subspace_dim " + std::to_string(subspace_dim) +
                                       " exceeds ambient_dim " + std::to_string(ambient_dim));
  }
  if (!(noise_std >= 0.0) || !std::isfinite(noise_std)) {
    fail(ErrorCode::InvalidConfig, "noise_std must be finite and >= 0");
  }
}

SynthDataset synth_generate(const SynthConfig& config) {
  config.validate();
  Rng rng(config.seed);
  SynthDataset out;
  for (std::size_t c = 0; c < config.num_classes; ++c) {
    const std::string cls = std::to_string(c + 1);
    for (std::size_t v = 0; v < config.num_views; ++v) {
      const std::string view = std::to_string(v + 1);
      Matrix B = random_orthonormal_basis(config.ambient_dim, config.subspace_dim, rng);
      for (std::size_t i = 0; i < config.train_per_view_per_class; ++i) {
        out.train.push_back(draw_sample(B, config.noise_std, rng, cls, view, Role::Train));
      }
      for (std::size_t i = 0; i < config.test_per_view_per_class; ++i) {
        out.test.push_back(draw_sample(B, config.noise_std, rng, cls, view, Role::Test));
      }
      out.bases.push_back(std::move(B));
    }
  }
  return out;
}

Split split_random(std::span<const Sample> pool, std::size_t train_count, std::size_t test_count,
                   std::uint64_t seed) {
  std::map<GroupKey, std::vector<std::size_t>, GroupLess> groups;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    groups[{pool[i].class_id, pool[i].view_id}].push_back(i);
  }

  Rng rng(seed);
  Split out;
  const std::size_t need = train_count + test_count;
  for (auto& [key, idx] : groups) {
    if (idx.size() < need) {
      fail(ErrorCode::Count, "class '" + key.first + "' view '" + key.second + "' has " +
                                 std::to_string(idx.size()) + " samples, need " +
                                 std::to_string(need));
    }
    for (std::size_t i = 0; i < need; ++i) {
      const std::size_t j = i + rng.below(idx.size() - i);
      std::swap(idx[i], idx[j]);
    }
    for (std::size_t i = 0; i < need; ++i) {
      Sample s = pool[idx[i]];
      s.role = i < train_count ? Role::Train : Role::Test;
      (i < train_count ? out.train : out.test).push_back(std::move(s));
    }
  }
  return out;
}

std::vector<std::string> class_labels_of(std::span<const Sample> samples) {
  std::vector<std::string> v;
  for (const auto& s : samples) v.push_back(s.class_id);
  return sorted_unique(std::move(v));
}

std::vector<std::string> view_labels_of(std::span<const Sample> samples) {
  std::vector<std::string> v;
  for (const auto& s : samples) v.push_back(s.view_id);
  return sorted_unique(std::move(v));
}

std::vector<Sample> first_views(std::span<const Sample> samples, std::size_t count) {
  const auto views = view_labels_of(samples);
  if (count < 1 || count > views.size()) {
    fail(ErrorCode::Count, "requested " + std::to_string(count) + " views, dataset has " +
                               std::to_string(views.size()));
  }
  std::vector<Sample> out;
  for (const auto& s : samples) {
    const auto it = std::find(views.begin(), views.end(), s.view_id);
    if (static_cast<std::size_t>(it - views.begin()) < count) out.push_back(s);
  }
  return out;
}

std::vector<Observation> assemble_observations(std::span<const Sample> test,
                                               std::span<const std::string> view_labels) {
  if (view_labels.empty()) fail(ErrorCode::Dimension, "no views given");
  std::map<GroupKey, std::vector<const Sample*>, GroupLess> groups;
  for (const auto& s : test) {
    if (std::find(view_labels.begin(), view_labels.end(), s.view_id) == view_labels.end()) {
      continue;
    }
    groups[{s.class_id, s.view_id}].push_back(&s);
  }

  std::vector<Observation> out;
  for (const auto& cls : class_labels_of(test)) {
    std::size_t count = 0;
    for (std::size_t m = 0; m < view_labels.size(); ++m) {
      const auto it = groups.find({cls, view_labels[m]});
      const std::size_t n = it == groups.end() ? 0 : it->second.size();
      if (m == 0) {
        count = n;
      } else if (n != count) {
        fail(ErrorCode::Count, "class '" + cls + "' has " + std::to_string(count) +
                                   " test samples in view '" + view_labels[0] + "' but " +
                                   std::to_string(n) + " in view '" + view_labels[m] + "'");
      }
    }
    for (std::size_t j = 0; j < count; ++j) {
      const std::size_t d = groups.at({cls, view_labels[0]})[j]->values.size();
      Observation obs{cls, Matrix(d, view_labels.size())};
      for (std::size_t m = 0; m < view_labels.size(); ++m) {
        const auto& v = groups.at({cls, view_labels[m]})[j]->values;
        if (v.size() != d) fail(ErrorCode::Dimension, "test vectors differ in length");
        std::copy(v.begin(), v.end(), obs.Y.col(m).begin());
      }
      out.push_back(std::move(obs));
    }
  }
  return out;
}

}  // namespace mvsrc
