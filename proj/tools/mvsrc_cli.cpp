// mvsrc: synthetic data export, the four experiment protocols, and one-off
// classification from a manifest dictionary.

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mvsrc/classify.hpp"
#include "mvsrc/data.hpp"
#include "mvsrc/dictionary.hpp"
#include "mvsrc/error.hpp"
#include "mvsrc/experiments.hpp"
#include "mvsrc/image.hpp"
#include "mvsrc/rng.hpp"

namespace {

using mvsrc::ErrorCode;

struct Hyper {
  mvsrc::JpcemConfig jpcem;
  double baseline_weight = 0.01;
  unsigned threads = 0;
  std::uint64_t seed = 1;
};

void add_hyper_flags(CLI::App& cmd, Hyper& h) {
  cmd.add_option("--sigma", h.jpcem.sigma, "noise standard deviation")->capture_default_str();
  cmd.add_option("--lambda", h.jpcem.lambda, "slab precision / ridge weight")->capture_default_str();
  cmd.add_option("--alpha", h.jpcem.alpha, "kappa cap parameter")->capture_default_str();
  cmd.add_option("--eps", h.jpcem.eps, "stabilizer in the kappa/rho/w updates")->capture_default_str();
  cmd.add_option("--outer-tol", h.jpcem.outer_tol, "outer stopping threshold")->capture_default_str();
  cmd.add_option("--inner-tol", h.jpcem.inner_tol, "inner solver stationarity tolerance")
      ->capture_default_str();
  cmd.add_option("--max-outer", h.jpcem.max_outer_iters, "outer iteration cap")->capture_default_str();
  cmd.add_option("--seed", h.seed, "split seed (base seed for selection-bias)")->capture_default_str();
  cmd.add_option("--baseline-weight", h.baseline_weight, "l1 weight of the SRC baselines")
      ->capture_default_str();
  cmd.add_option("--threads", h.threads, "worker threads (0 = all cores)")->capture_default_str();
}

struct DatasetFlags {
  std::string manifest;
  std::size_t width = 40;
  std::size_t height = 20;
  mvsrc::SynthConfig synth{5, 5, 200, 4, 30, 0, 0.05, 1};
};

void add_dataset_flags(CLI::App& cmd, DatasetFlags& f) {
  cmd.add_option("--manifest", f.manifest, "dataset manifest (path,class,view,role); roles are pooled");
  cmd.add_option("--width", f.width, "image width after rescaling")->capture_default_str();
  cmd.add_option("--height", f.height, "image height after rescaling")->capture_default_str();
  cmd.add_option("--synth-classes", f.synth.num_classes, "synthetic classes")->capture_default_str();
  cmd.add_option("--synth-views", f.synth.num_views, "synthetic views")->capture_default_str();
  cmd.add_option("--synth-dim", f.synth.ambient_dim, "synthetic ambient dimension")->capture_default_str();
  cmd.add_option("--synth-subspace", f.synth.subspace_dim, "synthetic subspace dimension")
      ->capture_default_str();
  cmd.add_option("--synth-per-view", f.synth.train_per_view_per_class,
                 "synthetic samples per view per class")
      ->capture_default_str();
  cmd.add_option("--synth-noise", f.synth.noise_std, "synthetic noise std")->capture_default_str();
  cmd.add_option("--synth-seed", f.synth.seed, "synthetic generator seed")->capture_default_str();
}

std::vector<mvsrc::Sample> load_pool(const DatasetFlags& f, nlohmann::json& descriptor) {
  if (!f.manifest.empty()) {
    const auto manifest = mvsrc::load_manifest(f.manifest, f.width, f.height);
    descriptor = {{"manifest", f.manifest}, {"width", f.width}, {"height", f.height}};
    return mvsrc::load_samples(manifest);
  }
  descriptor = {{"synthetic",
                 {{"num_classes", f.synth.num_classes},
                  {"num_views", f.synth.num_views},
                  {"ambient_dim", f.synth.ambient_dim},
                  {"subspace_dim", f.synth.subspace_dim},
                  {"per_view_per_class", f.synth.train_per_view_per_class},
                  {"noise_std", f.synth.noise_std},
                  {"seed", f.synth.seed},
                  {"rng", std::string(mvsrc::Rng::kDescription)}}}};
  return mvsrc::synth_generate(f.synth).train;
}

// "1-5", "2,4,6" or a mix such as "1-3,5".
std::vector<std::size_t> parse_grid(const std::string& text) {
  std::vector<std::size_t> out;
  auto number = [&](std::string_view s) {
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
      mvsrc::fail(ErrorCode::Usage, "bad grid '" + text + "'");
    }
    return v;
  };
  std::string_view rest = text;
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string_view item = rest.substr(0, comma);
    const auto dash = item.find('-');
    if (dash == std::string_view::npos) {
      out.push_back(number(item));
    } else {
      const std::size_t lo = number(item.substr(0, dash));
      const std::size_t hi = number(item.substr(dash + 1));
      if (hi < lo) mvsrc::fail(ErrorCode::Usage, "bad grid '" + text + "'");
      for (std::size_t v = lo; v <= hi; ++v) out.push_back(v);
    }
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (out.empty()) mvsrc::fail(ErrorCode::Usage, "empty grid");
  return out;
}

std::vector<mvsrc::Method> parse_methods(const std::string& text) {
  std::vector<mvsrc::Method> out;
  std::string_view rest = text;
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    out.push_back(mvsrc::parse_method(rest.substr(0, comma)));
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
  }
  if (out.empty()) mvsrc::fail(ErrorCode::Usage, "no methods given");
  return out;
}

struct OutputFlags {
  std::string csv;
  std::string json;
};

void add_output_flags(CLI::App& cmd, OutputFlags& o) {
  cmd.add_option("--csv", o.csv, "write CSV here (default: stdout)");
  cmd.add_option("--json", o.json, "write the full JSON report here");
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) mvsrc::fail(ErrorCode::Ingestion, path + ": cannot create file");
  out << text;
}

void emit(const mvsrc::ExperimentReport& report, const OutputFlags& o) {
  const std::string csv = report.to_csv();
  if (o.csv.empty()) {
    std::cout << csv;
  } else {
    write_text(o.csv, csv);
  }
  if (!o.json.empty()) write_text(o.json, report.to_json().dump(2) + "\n");
}

mvsrc::AccuracyProtocol make_protocol(const Hyper& h, const std::string& methods,
                                      std::size_t test_size, nlohmann::json dataset) {
  mvsrc::AccuracyProtocol p;
  p.methods = parse_methods(methods);
  p.params.jpcem = h.jpcem;
  p.params.baseline_weight = h.baseline_weight;
  p.params.threads = h.threads;
  p.test_size = test_size;
  p.seed = h.seed;
  p.dataset = std::move(dataset);
  return p;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-view sparse-representation classification with jointly estimated "
               "spike-and-slab priors"};
  app.require_subcommand(1);

  // synth
  auto* synth = app.add_subcommand("synth", "write a synthetic dataset as manifest + PGM images");
  std::string synth_out;
  std::size_t synth_width = 40;
  std::size_t synth_height = 20;
  mvsrc::SynthConfig synth_cfg{5, 5, 0, 4, 5, 20, 0.05, 1};
  synth->add_option("--out", synth_out, "output directory")->required();
  synth->add_option("--width", synth_width, "image width")->capture_default_str();
  synth->add_option("--height", synth_height, "image height")->capture_default_str();
  synth->add_option("--classes", synth_cfg.num_classes, "classes")->capture_default_str();
  synth->add_option("--views", synth_cfg.num_views, "views")->capture_default_str();
  synth->add_option("--subspace-dim", synth_cfg.subspace_dim, "subspace dimension")->capture_default_str();
  synth->add_option("--train", synth_cfg.train_per_view_per_class, "train samples per view per class")
      ->capture_default_str();
  synth->add_option("--test", synth_cfg.test_per_view_per_class, "test samples per view per class")
      ->capture_default_str();
  synth->add_option("--noise", synth_cfg.noise_std, "noise std")->capture_default_str();
  synth->add_option("--seed", synth_cfg.seed, "generator seed")->capture_default_str();

  // experiment
  auto* experiment = app.add_subcommand("experiment", "run an experiment protocol");
  experiment->require_subcommand(1);

  auto* rho_kappa = experiment->add_subcommand("rho-kappa", "rho as a function of kappa");
  double rk_sigma = 0.018;
  double rk_lambda = 0.00002;
  double rk_eps = 0.0;
  std::size_t rk_points = 99;
  OutputFlags rk_out;
  rho_kappa->add_option("--sigma", rk_sigma, "noise standard deviation")->capture_default_str();
  rho_kappa->add_option("--lambda", rk_lambda, "slab precision")->capture_default_str();
  rho_kappa->add_option("--eps", rk_eps, "denominator stabilizer")->capture_default_str();
  rho_kappa->add_option("--points", rk_points, "grid points in (0, 1)")->capture_default_str();
  add_output_flags(*rho_kappa, rk_out);

  auto* views = experiment->add_subcommand("views", "accuracy vs number of views");
  Hyper v_hyper;
  DatasetFlags v_data;
  OutputFlags v_out;
  std::string v_grid = "1-5";
  std::size_t v_train = 5;
  std::size_t v_test = 20;
  std::string v_methods = "jpcem,src-single,src-multiview";
  views->add_option("--views", v_grid, "view counts, e.g. 1-5")->capture_default_str();
  views->add_option("--train-size", v_train, "train samples per view per class")->capture_default_str();
  views->add_option("--test-size", v_test, "test samples per view per class")->capture_default_str();
  views->add_option("--methods", v_methods, "comma-separated methods")->capture_default_str();
  add_hyper_flags(*views, v_hyper);
  add_dataset_flags(*views, v_data);
  add_output_flags(*views, v_out);

  auto* train_size = experiment->add_subcommand("train-size", "accuracy vs training size");
  Hyper t_hyper;
  DatasetFlags t_data;
  OutputFlags t_out;
  std::string t_grid = "2-10";
  std::size_t t_views = 5;
  std::size_t t_test = 20;
  std::string t_methods = "jpcem,src-single,src-multiview";
  train_size->add_option("--sizes", t_grid, "train sizes, e.g. 2-10")->capture_default_str();
  train_size->add_option("--num-views", t_views, "views used")->capture_default_str();
  train_size->add_option("--test-size", t_test, "test samples per view per class")->capture_default_str();
  train_size->add_option("--methods", t_methods, "comma-separated methods")->capture_default_str();
  add_hyper_flags(*train_size, t_hyper);
  add_dataset_flags(*train_size, t_data);
  add_output_flags(*train_size, t_out);

  auto* bias = experiment->add_subcommand("selection-bias", "accuracy over repeated random splits");
  Hyper b_hyper;
  DatasetFlags b_data;
  OutputFlags b_out;
  std::size_t b_repeats = 20;
  std::size_t b_train = 5;
  std::size_t b_views = 5;
  std::size_t b_test = 20;
  std::string b_methods = "jpcem,src-single,src-multiview";
  bias->add_option("--repeats", b_repeats, "number of random splits")->capture_default_str();
  bias->add_option("--train-size", b_train, "train samples per view per class")->capture_default_str();
  bias->add_option("--num-views", b_views, "views used")->capture_default_str();
  bias->add_option("--test-size", b_test, "test samples per view per class")->capture_default_str();
  bias->add_option("--methods", b_methods, "comma-separated methods")->capture_default_str();
  add_hyper_flags(*bias, b_hyper);
  add_dataset_flags(*bias, b_data);
  add_output_flags(*bias, b_out);

  // classify
  auto* classify = app.add_subcommand("classify", "classify one multi-view test sample");
  std::string c_manifest;
  std::vector<std::string> c_tests;
  std::string c_method = "jpcem";
  std::size_t c_width = 40;
  std::size_t c_height = 20;
  Hyper c_hyper;
  classify->add_option("--manifest", c_manifest, "dictionary manifest; train rows are used")->required();
  classify->add_option("--test", c_tests, "one PGM per view, in view label order")->required();
  classify->add_option("--method", c_method, "jpcem, src-single or src-multiview")->capture_default_str();
  classify->add_option("--width", c_width, "image width after rescaling")->capture_default_str();
  classify->add_option("--height", c_height, "image height after rescaling")->capture_default_str();
  add_hyper_flags(*classify, c_hyper);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*synth) {
      synth_cfg.ambient_dim = synth_width * synth_height;
      const auto data = mvsrc::synth_generate(synth_cfg);
      const auto manifest =
          mvsrc::export_dataset(synth_out, data.train, data.test, synth_width, synth_height);
      std::cout << "wrote " << manifest.entries.size() << " images and "
                << (std::filesystem::path(synth_out) / "manifest.csv").string() << '\n';
    } else if (*rho_kappa) {
      emit(mvsrc::exp_rho_kappa(rk_sigma, rk_lambda, rk_eps, rk_points), rk_out);
    } else if (*views) {
      nlohmann::json desc;
      const auto pool = load_pool(v_data, desc);
      const auto grid = parse_grid(v_grid);
      emit(mvsrc::exp_accuracy_vs_views(pool, grid, v_train,
                                        make_protocol(v_hyper, v_methods, v_test, desc)),
           v_out);
    } else if (*train_size) {
      nlohmann::json desc;
      const auto pool = load_pool(t_data, desc);
      const auto grid = parse_grid(t_grid);
      emit(mvsrc::exp_accuracy_vs_train_size(pool, grid, t_views,
                                             make_protocol(t_hyper, t_methods, t_test, desc)),
           t_out);
    } else if (*bias) {
      nlohmann::json desc;
      const auto pool = load_pool(b_data, desc);
      emit(mvsrc::exp_selection_bias(pool, b_repeats, b_train, b_views,
                                     make_protocol(b_hyper, b_methods, b_test, desc)),
           b_out);
    } else if (*classify) {
      const mvsrc::Method method = mvsrc::parse_method(c_method);
      const auto manifest = mvsrc::load_manifest(c_manifest, c_width, c_height);
      std::vector<mvsrc::Sample> train;
      for (auto& s : mvsrc::load_samples(manifest)) {
        if (s.role == mvsrc::Role::Train) train.push_back(std::move(s));
      }
      const auto dict = mvsrc::Dictionary::build(train);
      if (c_tests.size() != dict.num_views()) {
        mvsrc::fail(ErrorCode::Dimension,
                    "got " + std::to_string(c_tests.size()) + " test images, expected M=" +
                        std::to_string(dict.num_views()) + " (one per view)");
      }
      mvsrc::Matrix Y(dict.rows(), dict.num_views());
      for (std::size_t m = 0; m < c_tests.size(); ++m) {
        const auto v = mvsrc::vectorize(mvsrc::read_pgm(c_tests[m]), c_width, c_height);
        std::copy(v.begin(), v.end(), Y.col(m).begin());
      }
      mvsrc::MethodParams params;
      params.jpcem = c_hyper.jpcem;
      params.baseline_weight = c_hyper.baseline_weight;
      const auto result = mvsrc::run_method(method, dict, Y, params);
      auto out = mvsrc::classification_json(result, dict);
      out["method"] = c_method;
      out["config"] = mvsrc::jpcem_config_json(c_hyper.jpcem);
      out["baseline_weight"] = c_hyper.baseline_weight;
      out["views"] = dict.view_labels();
      std::cout << out.dump(2) << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "mvsrc: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
