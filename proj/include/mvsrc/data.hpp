#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mvsrc/matrix.hpp"
#include "mvsrc/sample.hpp"

namespace mvsrc {

// Synthetic multi-view data: every (class, view) pair owns a random
// subspace_dim-dimensional subspace of R^ambient_dim. A sample is B u / ||u||
// for u with i.i.d. U[0,1) entries (a unit-norm nonnegative combination of
// the orthonormal basis B), plus N(0, noise_std^2) noise per entry, clipped
// to [-1, 1]. Classes are labelled "1".."C", views "1".."M".
struct SynthConfig {
  std::size_t num_classes = 5;
  std::size_t num_views = 5;
  std::size_t ambient_dim = 200;
  std::size_t subspace_dim = 4;
  std::size_t train_per_view_per_class = 5;
  std::size_t test_per_view_per_class = 20;
  double noise_std = 0.05;
  std::uint64_t seed = 1;

  void validate() const;
};

struct SynthDataset {
  std::vector<Sample> train;
  std::vector<Sample> test;
  // Orthonormal basis of pair (c, v) at index c * num_views + v.
  std::vector<Matrix> bases;
};

// Draw order, all from one Rng(seed): for each class, for each view: the
// basis (ambient_dim x subspace_dim Gaussian, column by column, then
// modified Gram-Schmidt), its train samples, then its test samples.
SynthDataset synth_generate(const SynthConfig& config);

struct Split {
  std::vector<Sample> train;
  std::vector<Sample> test;
};

// For each (class, view) group, in label order, draws train_count then
// test_count samples without replacement (partial Fisher-Yates with one Rng
// shared across groups in that order). Roles are set on the output.
Split split_random(std::span<const Sample> pool, std::size_t train_count, std::size_t test_count,
                   std::uint64_t seed);

// Samples whose view label is among the first `count` views in label order.
std::vector<Sample> first_views(std::span<const Sample> samples, std::size_t count);

// Sorted distinct labels.
std::vector<std::string> class_labels_of(std::span<const Sample> samples);
std::vector<std::string> view_labels_of(std::span<const Sample> samples);

// One multi-view test observation: column m holds view_labels[m].
struct Observation {
  std::string class_id;
  Matrix Y;
};

// Groups test samples into multi-view observations: for each class, the j-th
// sample of every view forms observation j. Each class must have the same
// number of samples in every view.
std::vector<Observation> assemble_observations(std::span<const Sample> test,
                                               std::span<const std::string> view_labels);

}  // namespace mvsrc
