#include "rjdbase/rjdbase.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace {

constexpr int kConfigExit = 2;

struct CliError {
  int exit_code;
};

void check(rjd_status s) {
  if (s == RJD_OK) return;
  std::cerr << "error: " << rjd_last_error_message() << '\n';
  throw CliError{rjd_status_exit_code(s)};
}

std::string take(char* s) {
  std::string out(s ? s : "");
  rjd_string_free(s);
  return out;
}

using DatasetPtr = std::unique_ptr<rjd_dataset, decltype(&rjd_dataset_free)>;
using ResultPtr = std::unique_ptr<rjd_result, decltype(&rjd_result_free)>;

struct DataSource {
  std::string preset;
  std::string dir;
  std::uint64_t data_seed = 0;
  std::optional<int> n;
  std::optional<int> k;
  std::optional<double> dirichlet;
  int nn_index = 7;
};

void add_source(CLI::App* app, DataSource& src, bool allow_dir) {
  app->add_option("--preset", src.preset, "built-in dataset preset")
      ->check(CLI::IsMember({"sbm-paper"}));
  if (allow_dir) {
    app->add_option("--data", src.dir, "dataset directory (affinity_<i>.bin or features_<i>.csv)");
    app->add_option("--nn-index", src.nn_index, "self-tuning kernel neighbour for feature input")
        ->check(CLI::PositiveNumber);
  }
  app->add_option("--n", src.n, "synthetic node count");
  app->add_option("--dirichlet", src.dirichlet, "Dirichlet concentration for cluster sizes");
}

nlohmann::json synth_json(const DataSource& src, std::uint64_t seed, std::optional<int> k) {
  nlohmann::json j{{"seed", seed}};
  if (src.n) j["n"] = *src.n;
  if (k) j["k"] = *k;
  if (src.dirichlet) j["dirichlet_concentration"] = *src.dirichlet;
  return j;
}

DatasetPtr open_dataset(const DataSource& src, std::optional<int> k) {
  rjd_dataset* d = nullptr;
  if (!src.dir.empty()) {
    if (!src.preset.empty()) {
      std::cerr << "error: --data and --preset are mutually exclusive\n";
      throw CliError{kConfigExit};
    }
    check(rjd_dataset_load(src.dir.c_str(), src.nn_index, &d));
  } else {
    if (src.preset.empty()) {
      std::cerr << "error: give --data DIR or --preset sbm-paper\n";
      throw CliError{kConfigExit};
    }
    check(rjd_dataset_synth(synth_json(src, src.data_seed, k).dump().c_str(), &d));
  }
  return DatasetPtr(d, rjd_dataset_free);
}

struct MethodFlags {
  std::string method = "rjd-base";
  int k = 6;
  int trials = 200;
  int coupling = 5;
  double lambda = 0.5;
  int iterations = 30;
  double step_size = 0.5;
  int max_halvings = 20;
  int sweeps = 200;
  double jd_tol = 1e-12;
  std::string init = "rjd-base";
  int modality = 0;
  std::vector<int> views{0, 1};
  int max_iters = 100;
  std::uint64_t seed = 0;
  std::uint64_t eval_seed = 20240917;
  int restarts = 10;
  std::string sampler = "uniform-normalized";
  std::string coreg_sign = "minus";
};

void add_method(CLI::App* app, MethodFlags& f) {
  app->add_option("--method", f.method, "method to run")
      ->check(CLI::IsMember({"rjd-base", "pga-single", "pga-base", "mvsc", "coreg", "mv-kmeans",
                             "mv-sphkmeans", "jd-refine", "single-laplacian"}));
  app->add_option("--k", f.k, "number of clusters / embedding columns");
  app->add_option("--T", f.trials, "RJD-BASE trial count");
  app->add_option("--J", f.coupling, "co-regularization rounds");
  app->add_option("--lambda", f.lambda, "CoReg coupling weight");
  app->add_option("--iterations", f.iterations, "projected gradient iterations");
  app->add_option("--step-size", f.step_size, "initial projected gradient step");
  app->add_option("--max-halvings", f.max_halvings, "backtracking halvings per iteration");
  app->add_option("--sweeps", f.sweeps, "Jacobi sweep cap");
  app->add_option("--jd-tol", f.jd_tol, "Jacobi stop tolerance on off-diagonal mass decrease");
  app->add_option("--init", f.init, "jd-refine initial basis")
      ->check(CLI::IsMember({"rjd-base", "identity"}));
  app->add_option("--modality", f.modality, "modality index for single-laplacian");
  app->add_option("--views", f.views, "two view indices for mv-kmeans")->expected(2);
  app->add_option("--max-iters", f.max_iters, "co-EM iteration cap");
  app->add_option("--seed", f.seed, "method seed");
  app->add_option("--eval-seed", f.eval_seed, "k-means evaluation seed");
  app->add_option("--restarts", f.restarts, "k-means restarts");
  app->add_option("--sampler", f.sampler, "trial weight distribution")
      ->check(CLI::IsMember({"uniform-normalized", "dirichlet"}));
  app->add_option("--coreg-sign", f.coreg_sign, "CoReg coupling sign")
      ->check(CLI::IsMember({"minus", "plus"}));
}

nlohmann::json method_json(const MethodFlags& f, int threads) {
  return {{"method", f.method},       {"k", f.k},
          {"T", f.trials},            {"J", f.coupling},
          {"lambda", f.lambda},       {"iterations", f.iterations},
          {"step_size", f.step_size}, {"max_halvings", f.max_halvings},
          {"sweeps", f.sweeps},       {"jd_tol", f.jd_tol},
          {"init", f.init},           {"modality", f.modality},
          {"views", f.views},         {"max_iters", f.max_iters},
          {"seed", f.seed},           {"eval_seed", f.eval_seed},
          {"restarts", f.restarts},   {"threads", threads},
          {"sampler", f.sampler},     {"coreg_sign", f.coreg_sign}};
}

// "3", "0-19" and "1,5,9" forms, combinable.
std::vector<std::uint64_t> expand_seeds(const std::vector<std::string>& specs) {
  std::vector<std::uint64_t> seeds;
  for (const auto& spec : specs) {
    const auto dash = spec.find('-');
    try {
      if (dash == std::string::npos) {
        seeds.push_back(std::stoull(spec));
      } else {
        const auto lo = std::stoull(spec.substr(0, dash));
        const auto hi = std::stoull(spec.substr(dash + 1));
        if (hi < lo) throw std::invalid_argument(spec);
        for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
      }
    } catch (const std::logic_error&) {
      std::cerr << "error: bad seed specification '" << spec << "'\n";
      throw CliError{kConfigExit};
    }
  }
  return seeds;
}

void emit(const rjd_result* r, const std::string& out_dir) {
  char* report = nullptr;
  check(rjd_result_report_json(r, &report));
  std::cout << take(report) << '\n';
  check(rjd_result_write(r, out_dir.c_str()));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral clustering of multimodal graphs by randomized joint diagonalization"};
  app.set_config("--config", "", "key=value config file; flags override it");
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(rjd_version()));

  int threads = 1;
  std::string out_dir = "rjdbase-out";
  app.add_option("--threads", threads, "worker threads")
      ->envname("RJDBASE_THREADS")
      ->check(CLI::PositiveNumber);
  app.add_option("--out", out_dir, "output directory")->envname("RJDBASE_OUTPUT_DIR");

  DataSource synth_src;
  std::uint64_t synth_seed = 0;
  std::optional<int> synth_k;
  auto* synth = app.add_subcommand("synth", "generate a synthetic multimodal dataset");
  add_source(synth, synth_src, false);
  synth->add_option("--seed", synth_seed, "generator seed");
  synth->add_option("--k", synth_k, "synthetic cluster count");

  DataSource run_src;
  MethodFlags run_flags;
  auto* run = app.add_subcommand("run", "run one clustering method");
  add_source(run, run_src, true);
  run->add_option("--data-seed", run_src.data_seed, "generator seed for --preset");
  add_method(run, run_flags);

  DataSource sweep_src;
  MethodFlags sweep_flags;
  std::vector<std::string> seed_specs{"0-9"};
  std::string vary = "method";
  auto* sweep = app.add_subcommand("sweep", "repeat a method across seeds");
  add_source(sweep, sweep_src, true);
  sweep->add_option("--data-seed", sweep_src.data_seed, "generator seed for a fixed preset dataset");
  add_method(sweep, sweep_flags);
  sweep->add_option("--seeds", seed_specs, "seeds, e.g. 0-999 or 1,2,3")->delimiter(',');
  sweep->add_option("--vary", vary, "what the sweep seed drives")
      ->check(CLI::IsMember({"method", "dataset", "both"}));

  DataSource info_src;
  auto* info = app.add_subcommand("info", "shape and spectral checks of a dataset");
  add_source(info, info_src, true);
  info->add_option("--data-seed", info_src.data_seed, "generator seed for --preset");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigExit;
  }

  try {
    if (*synth) {
      if (synth_src.preset.empty()) synth_src.preset = "sbm-paper";
      rjd_dataset* d = nullptr;
      check(rjd_dataset_synth(synth_json(synth_src, synth_seed, synth_k).dump().c_str(), &d));
      DatasetPtr data(d, rjd_dataset_free);
      check(rjd_dataset_save(data.get(), out_dir.c_str()));
      char* report = nullptr;
      check(rjd_dataset_info_json(data.get(), &report));
      std::cout << nlohmann::json::parse(take(report))["provenance"].dump(2) << '\n';
    } else if (*run) {
      auto data = open_dataset(run_src, run_flags.k);
      rjd_result* r = nullptr;
      check(rjd_run(data.get(), method_json(run_flags, threads).dump().c_str(), &r));
      ResultPtr result(r, rjd_result_free);
      emit(result.get(), out_dir);
    } else if (*sweep) {
      nlohmann::json cfg{{"method", method_json(sweep_flags, 1)},
                         {"seeds", expand_seeds(seed_specs)},
                         {"vary", vary},
                         {"threads", threads}};
      DatasetPtr data(nullptr, rjd_dataset_free);
      if (vary == "method") {
        data = open_dataset(sweep_src, sweep_flags.k);
      } else {
        if (!sweep_src.dir.empty()) {
          std::cerr << "error: --vary " << vary << " regenerates the dataset; use --preset\n";
          return kConfigExit;
        }
        cfg["synth"] = synth_json(sweep_src, 0, sweep_flags.k);
      }
      rjd_result* r = nullptr;
      check(rjd_sweep(data.get(), cfg.dump().c_str(), &r));
      ResultPtr result(r, rjd_result_free);
      emit(result.get(), out_dir);
    } else if (*info) {
      auto data = open_dataset(info_src, std::nullopt);
      char* report = nullptr;
      check(rjd_dataset_info_json(data.get(), &report));
      std::cout << take(report) << '\n';
    }
  } catch (const CliError& e) {
    return e.exit_code;
  }
  return 0;
}
