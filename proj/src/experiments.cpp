#include "mvsrc/experiments.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "mvsrc/data.hpp"
#include "mvsrc/error.hpp"
#include "mvsrc/kernels.hpp"
#include "mvsrc/rng.hpp"

namespace mvsrc {

using nlohmann::json;

namespace {

constexpr std::array kMethods{std::pair{Method::Jpcem, std::string_view("jpcem")},
                              std::pair{Method::SrcSingle, std::string_view("src-single")},
                              std::pair{Method::SrcMultiview, std::string_view("src-multiview")}};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Runs fn(i) for i in [0, n) on up to `threads` workers. Results must be
// written by index; the first exception is rethrown.
template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

json method_params_json(const MethodParams& p) {
  return {{"jpcem", jpcem_config_json(p.jpcem)}, {"baseline_weight", p.baseline_weight}};
}

json protocol_json(const AccuracyProtocol& protocol) {
  json methods = json::array();
  for (Method m : protocol.methods) methods.push_back(std::string(method_name(m)));
  return {{"methods", methods},
          {"params", method_params_json(protocol.params)},
          {"test_size", protocol.test_size},
          {"seed", protocol.seed},
          {"dataset", protocol.dataset},
          {"rng", std::string(Rng::kDescription)},
          {"kernels", std::string(kernels::active().name)}};
}

void require_methods(const AccuracyProtocol& protocol) {
  if (protocol.methods.empty()) fail(ErrorCode::Usage, "no methods selected");
}

std::vector<std::string> method_columns(const AccuracyProtocol& protocol) {
  std::vector<std::string> cols;
  for (Method m : protocol.methods) cols.emplace_back(method_name(m));
  return cols;
}

// Appends one record holding each method's accuracy on (train, test).
void run_record(ExperimentReport& report, double x, std::span<const Sample> train,
                std::span<const Sample> test, const AccuracyProtocol& protocol) {
  ExperimentRecord rec{x, {}};
  for (Method m : protocol.methods) {
    const auto start = Clock::now();
    const AccuracyRun run = evaluate_method(m, train, test, protocol.params);
    report.run_seconds.push_back(seconds_since(start));
    rec.values.push_back(run.accuracy());
    report.jpcem.merge(run.jpcem);
  }
  report.records.push_back(std::move(rec));
}

}  // namespace

std::string_view method_name(Method m) {
  for (const auto& [method, name] : kMethods) {
    if (method == m) return name;
  }
  return "unknown";
}

std::vector<std::string_view> method_names() {
  std::vector<std::string_view> out;
  for (const auto& entry : kMethods) out.push_back(entry.second);
  return out;
}

std::optional<Method> find_method(std::string_view name) {
  for (const auto& [method, n] : kMethods) {
    if (n == name) return method;
  }
  return std::nullopt;
}

Method parse_method(std::string_view name) {
  if (auto m = find_method(name)) return *m;
  std::string available;
  for (auto n : method_names()) {
    if (!available.empty()) available += ", ";
    available += n;
  }
  fail(ErrorCode::Usage, "unknown method '" + std::string(name) + "' (available: " + available + ")");
}

ClassificationResult run_method(Method method, const Dictionary& dict, const Matrix& Y,
                                const MethodParams& params) {
  const InnerOptions inner{params.jpcem.inner_tol, params.jpcem.max_inner_iters, false};
  switch (method) {
    case Method::Jpcem:
      return classify_jpcem(dict, Y, params.jpcem);
    case Method::SrcSingle:
      if (Y.cols() == 0) fail(ErrorCode::Dimension, "observation has no views");
      return src_single_baseline(dict, Y.col(0), params.baseline_weight, inner);
    case Method::SrcMultiview:
      return multiview_src_baseline(dict, Y, params.baseline_weight, inner);
  }
  fail(ErrorCode::Usage, "unknown method");
}

void JpcemStats::merge(const JpcemStats& other) {
  view_solves += other.view_solves;
  unconverged_views += other.unconverged_views;
  max_outer_iters = std::max(max_outer_iters, other.max_outer_iters);
}

AccuracyRun evaluate_method(Method method, std::span<const Sample> train,
                            std::span<const Sample> test, const MethodParams& params) {
  const Dictionary dict = Dictionary::build(train);
  const std::vector<Observation> obs = assemble_observations(test, dict.view_labels());

  std::vector<std::string> predicted(obs.size());
  std::vector<JpcemStats> stats(obs.size());
  parallel_for(obs.size(), params.threads, [&](std::size_t i) {
    const ClassificationResult res = run_method(method, dict, obs[i].Y, params);
    predicted[i] = res.predicted_label;
    if (method == Method::Jpcem) {
      const auto& X = res.coefficients;
      for (std::size_t m = 0; m < X.num_views(); ++m) {
        ++stats[i].view_solves;
        if (!X.converged_per_view[m]) ++stats[i].unconverged_views;
        stats[i].max_outer_iters = std::max(stats[i].max_outer_iters, X.outer_iters_per_view[m]);
      }
    }
  });

  AccuracyRun run;
  std::vector<std::string> truth;
  for (const auto& o : obs) truth.push_back(o.class_id);
  run.total = obs.size();
  for (std::size_t i = 0; i < obs.size(); ++i) {
    if (predicted[i] == truth[i]) ++run.correct;
    run.jpcem.merge(stats[i]);
  }
  return run;
}

double accuracy(std::span<const std::string> predicted, std::span<const std::string> truth) {
  if (predicted.size() != truth.size()) {
    fail(ErrorCode::Dimension, "prediction and label counts differ");
  }
  if (predicted.empty()) return 0.0;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) correct += predicted[i] == truth[i];
  return static_cast<double>(correct) / static_cast<double>(predicted.size());
}

MethodSummary gaussian_fit(std::string method, std::span<const double> values) {
  MethodSummary s{std::move(method), 0.0, 0.0};
  if (values.empty()) return s;
  for (double v : values) s.mean += v;
  s.mean /= static_cast<double>(values.size());
  double var = 0.0;
  for (double v : values) var += (v - s.mean) * (v - s.mean);
  s.std = std::sqrt(var / static_cast<double>(values.size()));
  return s;
}

std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

std::string ExperimentReport::to_csv() const {
  std::ostringstream out;
  out << x_name;
  for (const auto& c : columns) out << ',' << c;
  out << '\n';
  for (const auto& r : records) {
    out << format_double(r.x);
    for (double v : r.values) out << ',' << format_double(v);
    out << '\n';
  }
  if (!summary.empty()) {
    out << "\nmethod,mean,std\n";
    for (const auto& s : summary) {
      out << s.method << ',' << format_double(s.mean) << ',' << format_double(s.std) << '\n';
    }
  }
  return out.str();
}

json ExperimentReport::to_json(bool include_timing) const {
  json recs = json::array();
  for (const auto& r : records) {
    json values = json::object();
    for (std::size_t i = 0; i < columns.size(); ++i) values[columns[i]] = r.values[i];
    recs.push_back({{x_name, r.x}, {"values", values}});
  }
  json summ = json::array();
  for (const auto& s : summary) summ.push_back({{"method", s.method}, {"mean", s.mean}, {"std", s.std}});
  json out = {{"experiment", experiment_id},
              {"config", config},
              {"x", x_name},
              {"columns", columns},
              {"records", recs},
              {"summary", summ},
              {"jpcem_diagnostics",
               {{"view_solves", jpcem.view_solves},
                {"unconverged_views", jpcem.unconverged_views},
                {"max_outer_iters", jpcem.max_outer_iters}}}};
  if (include_timing) {
    out["timing"] = {{"run_seconds", run_seconds}, {"total_seconds", total_seconds}};
  }
  return out;
}

ExperimentReport exp_rho_kappa(double sigma, double lambda, double eps, std::size_t num_points) {
  if (!(sigma > 0.0) || !(lambda > 0.0) || !(eps >= 0.0) || num_points < 1) {
    fail(ErrorCode::InvalidParameter, "rho-kappa needs sigma, lambda > 0, eps >= 0, points >= 1");
  }
  const auto start = Clock::now();
  ExperimentReport report;
  report.experiment_id = "rho-kappa";
  report.config = {{"sigma", sigma}, {"lambda", lambda}, {"eps", eps}, {"num_points", num_points}};
  report.x_name = "kappa";
  report.columns = {"rho"};
  Vector kappa(num_points);
  for (std::size_t j = 0; j < num_points; ++j) {
    kappa[j] = static_cast<double>(j + 1) / static_cast<double>(num_points + 1);
  }
  const Vector rho = rho_update(kappa, sigma, lambda, eps);
  for (std::size_t j = 0; j < num_points; ++j) report.records.push_back({kappa[j], {rho[j]}});
  report.total_seconds = seconds_since(start);
  report.run_seconds = {report.total_seconds};
  return report;
}

ExperimentReport exp_accuracy_vs_views(std::span<const Sample> pool,
                                       std::span<const std::size_t> views, std::size_t train_size,
                                       const AccuracyProtocol& protocol) {
  require_methods(protocol);
  const auto start = Clock::now();
  ExperimentReport report;
  report.experiment_id = "views";
  report.config = protocol_json(protocol);
  report.config["views"] = std::vector<std::size_t>(views.begin(), views.end());
  report.config["train_size"] = train_size;
  report.x_name = "x";
  report.columns = method_columns(protocol);

  std::vector<std::size_t> grid(views.begin(), views.end());
  std::sort(grid.begin(), grid.end());
  const Split split = split_random(pool, train_size, protocol.test_size, protocol.seed);
  for (std::size_t v : grid) {
    const auto train = first_views(split.train, v);
    const auto test = first_views(split.test, v);
    run_record(report, static_cast<double>(v), train, test, protocol);
  }
  report.total_seconds = seconds_since(start);
  return report;
}

ExperimentReport exp_accuracy_vs_train_size(std::span<const Sample> pool,
                                            std::span<const std::size_t> sizes,
                                            std::size_t num_views,
                                            const AccuracyProtocol& protocol) {
  require_methods(protocol);
  const auto start = Clock::now();
  ExperimentReport report;
  report.experiment_id = "train-size";
  report.config = protocol_json(protocol);
  report.config["sizes"] = std::vector<std::size_t>(sizes.begin(), sizes.end());
  report.config["num_views"] = num_views;
  report.x_name = "x";
  report.columns = method_columns(protocol);

  std::vector<std::size_t> grid(sizes.begin(), sizes.end());
  std::sort(grid.begin(), grid.end());
  const auto restricted = first_views(pool, num_views);
  for (std::size_t s : grid) {
    const Split split = split_random(restricted, s, protocol.test_size, protocol.seed);
    run_record(report, static_cast<double>(s), split.train, split.test, protocol);
  }
  report.total_seconds = seconds_since(start);
  return report;
}

ExperimentReport exp_selection_bias(std::span<const Sample> pool, std::size_t num_repeats,
                                    std::size_t train_size, std::size_t num_views,
                                    const AccuracyProtocol& protocol) {
  require_methods(protocol);
  if (num_repeats < 1) fail(ErrorCode::InvalidParameter, "num_repeats must be >= 1");
  const auto start = Clock::now();
  ExperimentReport report;
  report.experiment_id = "selection-bias";
  report.config = protocol_json(protocol);
  report.config["num_repeats"] = num_repeats;
  report.config["train_size"] = train_size;
  report.config["num_views"] = num_views;
  report.x_name = "repeat";
  report.columns = method_columns(protocol);

  const auto restricted = first_views(pool, num_views);
  for (std::size_t r = 0; r < num_repeats; ++r) {
    const Split split = split_random(restricted, train_size, protocol.test_size, protocol.seed + r);
    run_record(report, static_cast<double>(r), split.train, split.test, protocol);
  }
  for (std::size_t m = 0; m < protocol.methods.size(); ++m) {
    std::vector<double> acc;
    for (const auto& rec : report.records) acc.push_back(rec.values[m]);
    report.summary.push_back(gaussian_fit(report.columns[m], acc));
  }
  report.total_seconds = seconds_since(start);
  return report;
}

json jpcem_config_json(const JpcemConfig& c) {
  return {{"sigma", c.sigma},         {"lambda", c.lambda},
          {"alpha", c.alpha},         {"eps", c.eps},
          {"outer_tol", c.outer_tol}, {"max_outer_iters", c.max_outer_iters},
          {"inner_tol", c.inner_tol}, {"max_inner_iters", c.max_inner_iters}};
}

json classification_json(const ClassificationResult& result, const Dictionary& dict) {
  const auto& labels = dict.class_labels();
  json residuals = json::object();
  json per_view = json::object();
  for (std::size_t c = 0; c < labels.size(); ++c) {
    residuals[labels[c]] = result.residuals[c];
    std::vector<double> row;
    for (std::size_t m = 0; m < result.per_view_residuals.cols(); ++m) {
      row.push_back(result.per_view_residuals(c, m));
    }
    per_view[labels[c]] = row;
  }
  json tied = json::array();
  for (std::size_t c : result.tied_classes) tied.push_back(labels[c]);

  const auto& X = result.coefficients;
  json views = json::array();
  for (std::size_t m = 0; m < X.num_views(); ++m) {
    const auto x = X.x.col(m);
    const auto g = X.gamma.col(m);
    views.push_back({{"x", std::vector<double>(x.begin(), x.end())},
                     {"gamma", std::vector<double>(g.begin(), g.end())},
                     {"converged", static_cast<bool>(X.converged_per_view[m])},
                     {"outer_iters", X.outer_iters_per_view[m]}});
  }
  return {{"predicted_class", result.predicted_label},
          {"residuals", residuals},
          {"per_view_residuals", per_view},
          {"tied_classes", tied},
          {"coefficients", views}};
}

}  // namespace mvsrc
