#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "mvsrc/classify.hpp"
#include "mvsrc/jpcem.hpp"
#include "mvsrc/sample.hpp"

namespace mvsrc {

enum class Method { Jpcem, SrcSingle, SrcMultiview };

std::string_view method_name(Method m);
std::vector<std::string_view> method_names();
std::optional<Method> find_method(std::string_view name);
// Usage error listing the registry when `name` is unknown.
Method parse_method(std::string_view name);

struct MethodParams {
  JpcemConfig jpcem;
  // Uniform l1 weight of the src-single / src-multiview baselines.
  double baseline_weight = 0.01;
  // Worker threads for per-observation classification; 0 = hardware count.
  unsigned threads = 1;
};

// src-single looks only at the first view (column 0 of Y).
ClassificationResult run_method(Method method, const Dictionary& dict, const Matrix& Y,
                                const MethodParams& params);

struct JpcemStats {
  std::size_t view_solves = 0;
  std::size_t unconverged_views = 0;
  int max_outer_iters = 0;

  void merge(const JpcemStats& other);
};

struct AccuracyRun {
  std::size_t correct = 0;
  std::size_t total = 0;
  JpcemStats jpcem;

  double accuracy() const { return total == 0 ? 0.0 : static_cast<double>(correct) / total; }
};

// Builds the dictionary from `train`, groups `test` into multi-view
// observations over the dictionary's views, and counts correct predictions.
AccuracyRun evaluate_method(Method method, std::span<const Sample> train,
                            std::span<const Sample> test, const MethodParams& params);

// correct / total; 0 for an empty list.
double accuracy(std::span<const std::string> predicted, std::span<const std::string> truth);

struct ExperimentRecord {
  double x = 0.0;
  std::vector<double> values;  // one per column
};

struct MethodSummary {
  std::string method;
  double mean = 0.0;
  double std = 0.0;  // population (maximum-likelihood) standard deviation
};

struct ExperimentReport {
  std::string experiment_id;
  nlohmann::json config;
  std::string x_name;                 // first CSV column
  std::vector<std::string> columns;   // remaining CSV columns
  std::vector<ExperimentRecord> records;
  std::vector<MethodSummary> summary;
  JpcemStats jpcem;
  std::vector<double> run_seconds;    // wall clock per (record, method) run
  double total_seconds = 0.0;

  std::string to_csv() const;
  // Timing is the only non-reproducible part and can be left out.
  nlohmann::json to_json(bool include_timing = true) const;
};

// Moment-matched Gaussian: sample mean and population standard deviation.
MethodSummary gaussian_fit(std::string method, std::span<const double> values);

// rho over kappa_j = j / (num_points + 1), j = 1..num_points.
ExperimentReport exp_rho_kappa(double sigma, double lambda, double eps, std::size_t num_points);

struct AccuracyProtocol {
  std::vector<Method> methods;
  MethodParams params;
  std::size_t test_size = 20;  // per view per class
  std::uint64_t seed = 1;
  nlohmann::json dataset;      // descriptor echoed into the report
};

// One split (train_size / test_size per view per class); for each v the
// dictionary and the observations use the first v views.
ExperimentReport exp_accuracy_vs_views(std::span<const Sample> pool,
                                       std::span<const std::size_t> views, std::size_t train_size,
                                       const AccuracyProtocol& protocol);

// For each size a fresh split of the first num_views views with that seed.
ExperimentReport exp_accuracy_vs_train_size(std::span<const Sample> pool,
                                            std::span<const std::size_t> sizes,
                                            std::size_t num_views,
                                            const AccuracyProtocol& protocol);

// num_repeats splits with seeds protocol.seed + r, r = 0..num_repeats-1, plus
// a Gaussian fit per method.
ExperimentReport exp_selection_bias(std::span<const Sample> pool, std::size_t num_repeats,
                                    std::size_t train_size, std::size_t num_views,
                                    const AccuracyProtocol& protocol);

nlohmann::json jpcem_config_json(const JpcemConfig& config);
nlohmann::json classification_json(const ClassificationResult& result, const Dictionary& dict);

// Shortest decimal string that parses back to exactly `v`.
std::string format_double(double v);

}  // namespace mvsrc
