#include "rjdbase/experiment.hpp"

#include "rjdbase/error.hpp"
#include "rjdbase/eval.hpp"
#include "rjdbase/matrix_io.hpp"
#include "rjdbase/parallel.hpp"
#include "rjdbase/smoothness.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <map>
#include <regex>
#include <sstream>

namespace rjdbase::experiment {

namespace fs = std::filesystem;

Dataset from_sbm(const sbm::MultimodalDataset& data) {
  Dataset d;
  d.stack = data.laplacians;
  d.affinities = data.affinities;
  d.labels = data.labels;
  nlohmann::json prov;
  sbm::to_json(prov, data.provenance);
  prov["cluster_sizes"] = data.cluster_sizes;
  prov["generator"] = "weighted-sbm";
  d.provenance = std::move(prov);
  return d;
}

Dataset synthesize(const sbm::SbmConfig& config) {
  return from_sbm(sbm::generate(config));
}

namespace {

// Files named <stem>_<index>.<ext>, ordered by index.
std::vector<fs::path> indexed_files(const fs::path& dir, const std::string& stem,
                                    const std::vector<std::string>& extensions) {
  std::map<int, fs::path> found;
  const std::regex pattern(stem + "_([0-9]+)");
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const auto ext = entry.path().extension().string();
    if (std::find(extensions.begin(), extensions.end(), ext) == extensions.end()) continue;
    std::smatch match;
    const std::string name = entry.path().stem().string();
    if (std::regex_match(name, match, pattern)) {
      const int index = std::stoi(match[1].str());
      if (found.contains(index)) {
        throw Error(ErrorCode::Parse, "duplicate " + stem + " index " + std::to_string(index));
      }
      found.emplace(index, entry.path());
    }
  }
  std::vector<fs::path> out;
  int expected = 0;
  for (const auto& [index, path] : found) {
    if (index != expected++) {
      throw Error(ErrorCode::Parse, stem + " files must be numbered consecutively from 0");
    }
    out.push_back(path);
  }
  return out;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc | std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << text;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

Dataset load_dataset(const fs::path& dir, int nn_index) {
  if (!fs::is_directory(dir)) throw Error(ErrorCode::Io, dir.string() + " is not a directory");
  Dataset d;
  std::vector<SymmetricMatrix> laplacians;
  std::vector<std::string> names;

  const auto affinity_files = indexed_files(dir, "affinity", {".bin", ".csv"});
  const auto feature_files = indexed_files(dir, "features", {".bin", ".csv"});
  if (!affinity_files.empty()) {
    for (const auto& f : affinity_files) {
      try {
        d.affinities.emplace_back(io::read_matrix(f));
      } catch (const Error& e) {
        throw Error(e.code(), f.string() + ": " + e.detail());
      }
      names.push_back(f.stem().string());
    }
  } else if (!feature_files.empty()) {
    for (const auto& f : feature_files) {
      d.features.push_back(io::read_matrix(f));
      if (d.features.back().rows() != d.features.front().rows()) {
        throw Error(ErrorCode::DimensionMismatch, f.string() + ": sample count differs between views");
      }
      try {
        d.affinities.push_back(self_tuning_affinity(d.features.back(), nn_index));
      } catch (const Error& e) {
        throw Error(e.code(), f.string() + ": " + e.detail());
      }
      names.push_back(f.stem().string());
    }
  } else {
    throw Error(ErrorCode::Io, dir.string() + " has no affinity_<i> or features_<i> files");
  }
  for (std::size_t i = 0; i < d.affinities.size(); ++i) {
    if (d.affinities[i].size() != d.affinities.front().size()) {
      throw Error(ErrorCode::DimensionMismatch, "modalities differ in node count");
    }
    try {
      laplacians.push_back(normalized_laplacian(d.affinities[i]).matrix);
    } catch (const Error& e) {
      throw Error(e.code(), names[i] + ": " + e.detail());
    }
  }
  d.stack = LaplacianStack(std::move(laplacians), names);

  if (fs::exists(dir / "labels.csv")) {
    auto labels = io::read_labels_csv(dir / "labels.csv");
    if (labels.size() != static_cast<std::size_t>(d.stack.nodes())) {
      throw Error(ErrorCode::LengthMismatch, "labels.csv has " + std::to_string(labels.size()) +
                                                 " rows but the graphs have " +
                                                 std::to_string(d.stack.nodes()) + " nodes");
    }
    d.labels = ClusterLabels(std::move(labels));
  }
  if (fs::exists(dir / "provenance.json")) {
    try {
      d.provenance = nlohmann::json::parse(read_text(dir / "provenance.json"));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::Parse, "provenance.json: " + std::string(e.what()));
    }
  }
  d.provenance["source_directory"] = fs::absolute(dir).string();
  d.provenance["ingest"] = affinity_files.empty() ? "features" : "affinities";
  if (affinity_files.empty()) d.provenance["nn_index"] = nn_index;
  return d;
}

void save_dataset(const Dataset& data, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());
  if (data.labels) io::write_labels_csv(dir / "labels.csv", data.labels->assignments());
  for (std::size_t i = 0; i < data.affinities.size(); ++i) {
    io::write_binary_matrix(dir / ("affinity_" + std::to_string(i) + ".bin"),
                            data.affinities[i].weights());
  }
  write_text(dir / "provenance.json", data.provenance.dump(2) + "\n");
}

nlohmann::json dataset_info(const Dataset& data) {
  nlohmann::json info;
  info["nodes"] = data.stack.nodes();
  info["modalities"] = data.stack.modalities();
  info["has_labels"] = data.labels.has_value();
  if (data.labels) info["label_count"] = data.labels->distinct();
  info["has_features"] = !data.features.empty();
  info["provenance"] = data.provenance;
  bool all_ok = true;
  nlohmann::json mods = nlohmann::json::array();
  for (std::size_t i = 0; i < data.stack.modalities(); ++i) {
    const auto check = check_laplacian(data.stack[i]);
    nlohmann::json m{{"name", data.stack.names()[i]},
                     {"lambda_min", check.min_eigenvalue},
                     {"lambda_max", check.max_eigenvalue},
                     {"zero_multiplicity", check.zero_multiplicity},
                     {"psd", check.psd},
                     {"bounded", check.bounded},
                     {"simple_zero", check.simple_zero}};
    if (i < data.affinities.size()) m["components"] = connectivity(data.affinities[i], 0.0);
    all_ok = all_ok && check.ok();
    mods.push_back(std::move(m));
  }
  info["laplacians"] = std::move(mods);
  info["spectral_checks_pass"] = all_ok;
  return info;
}

// ---------------------------------------------------------------------------

namespace {

const std::map<Method, std::string>& method_names() {
  static const std::map<Method, std::string> names{
      {Method::RjdBase, "rjd-base"},     {Method::PgaSingle, "pga-single"},
      {Method::PgaBase, "pga-base"},     {Method::Mvsc, "mvsc"},
      {Method::Coreg, "coreg"},          {Method::MvKmeans, "mv-kmeans"},
      {Method::MvSphKmeans, "mv-sphkmeans"}, {Method::JdRefine, "jd-refine"},
      {Method::SingleLaplacian, "single-laplacian"},
  };
  return names;
}

}  // namespace

std::string method_name(Method m) { return method_names().at(m); }

Method parse_method(const std::string& name) {
  for (const auto& [m, n] : method_names()) {
    if (n == name) return m;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown method '" + name + "'");
}

void to_json(nlohmann::json& j, const MethodConfig& c) {
  j = nlohmann::json{
      {"method", method_name(c.method)},
      {"k", c.k},
      {"T", c.trials},
      {"J", c.coupling_rounds},
      {"lambda", c.lambda},
      {"iterations", c.iterations},
      {"step_size", c.step_size},
      {"max_halvings", c.max_halvings},
      {"sweeps", c.sweeps},
      {"jd_tol", c.jd_tol},
      {"init", c.init},
      {"modality", c.modality},
      {"views", c.views},
      {"max_iters", c.max_iters},
      {"seed", c.seed},
      {"eval_seed", c.eval_seed},
      {"restarts", c.restarts},
      {"threads", c.threads},
      {"sampler", c.sampler == WeightSampler::FlatDirichlet ? "dirichlet" : "uniform-normalized"},
      {"coreg_sign", c.coreg_sign == baselines::CoregSign::AsPrinted ? "plus" : "minus"},
  };
}

void from_json(const nlohmann::json& j, MethodConfig& c) {
  try {
    c = MethodConfig{};
    if (j.contains("method")) c.method = parse_method(j.at("method").get<std::string>());
    c.k = j.value("k", c.k);
    c.trials = j.value("T", c.trials);
    c.coupling_rounds = j.value("J", c.coupling_rounds);
    c.lambda = j.value("lambda", c.lambda);
    c.iterations = j.value("iterations", c.iterations);
    c.step_size = j.value("step_size", c.step_size);
    c.max_halvings = j.value("max_halvings", c.max_halvings);
    c.sweeps = j.value("sweeps", c.sweeps);
    c.jd_tol = j.value("jd_tol", c.jd_tol);
    c.init = j.value("init", c.init);
    c.modality = j.value("modality", c.modality);
    c.views = j.value("views", c.views);
    c.max_iters = j.value("max_iters", c.max_iters);
    c.seed = j.value("seed", c.seed);
    c.eval_seed = j.value("eval_seed", c.eval_seed);
    c.restarts = j.value("restarts", c.restarts);
    c.threads = j.value("threads", c.threads);
    const std::string sampler = j.value("sampler", std::string("uniform-normalized"));
    if (sampler == "dirichlet") {
      c.sampler = WeightSampler::FlatDirichlet;
    } else if (sampler == "uniform-normalized") {
      c.sampler = WeightSampler::NormalizedUniform;
    } else {
      throw Error(ErrorCode::InvalidArgument, "unknown sampler '" + sampler + "'");
    }
    const std::string sign = j.value("coreg_sign", std::string("minus"));
    if (sign == "plus") {
      c.coreg_sign = baselines::CoregSign::AsPrinted;
    } else if (sign == "minus") {
      c.coreg_sign = baselines::CoregSign::Reward;
    } else {
      throw Error(ErrorCode::InvalidArgument, "coreg_sign must be 'minus' or 'plus'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("method config: ") + e.what());
  }
}

void validate(const MethodConfig& c, const Dataset& data) {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidArgument, what); };
  const auto n = data.stack.nodes();
  const auto m = static_cast<int>(data.stack.modalities());
  if (c.k < 1) fail("k must be positive");
  if (c.k > n - 1) fail("k=" + std::to_string(c.k) + " must be below the node count " + std::to_string(n));
  if (c.restarts < 1) fail("restarts must be positive");
  if (c.threads < 1) fail("threads must be positive");
  switch (c.method) {
    case Method::RjdBase:
      if (c.trials < 1) fail("T must be at least 1");
      break;
    case Method::PgaSingle:
    case Method::PgaBase:
      if (c.iterations < 1) fail("iterations must be at least 1");
      if (!(c.step_size > 0.0)) fail("step size must be positive");
      if (c.max_halvings < 0) fail("max_halvings must be >= 0");
      break;
    case Method::Mvsc:
    case Method::Coreg:
      if (m < 2) fail(method_name(c.method) + " needs at least two modalities");
      if (c.coupling_rounds < 0) fail("J must be >= 0");
      if (!(c.lambda >= 0.0)) fail("lambda must be nonnegative");
      break;
    case Method::MvKmeans:
    case Method::MvSphKmeans:
      if (c.views[0] == c.views[1]) fail("the two views must differ");
      for (int v : c.views) {
        if (v < 0 || v >= m) fail("view index " + std::to_string(v) + " out of range");
      }
      if (c.max_iters < 1) fail("max_iters must be positive");
      break;
    case Method::JdRefine:
      if (c.sweeps < 0) fail("sweeps must be >= 0");
      if (c.init != "rjd-base" && c.init != "identity") fail("init must be rjd-base or identity");
      if (c.init == "rjd-base" && c.trials < 1) fail("T must be at least 1");
      if (!(c.jd_tol >= 0.0)) fail("jd_tol must be nonnegative");
      break;
    case Method::SingleLaplacian:
      if (c.modality < 0 || c.modality >= m) fail("modality index out of range");
      break;
  }
}

// ---------------------------------------------------------------------------

namespace {

std::string to_csv(auto&& writer) {
  std::ostringstream ss;
  writer(ss);
  return ss.str();
}

struct Scored {
  ClusterLabels predicted;
  std::optional<double> nmi;
};

Scored cluster_and_score(const Eigen::MatrixXd& x, const MethodConfig& c, const Dataset& data) {
  Scored s{kmeans(x, c.k, c.restarts, c.eval_seed).labels, std::nullopt};
  if (data.labels) s.nmi = nmi(s.predicted, *data.labels);
  return s;
}

std::optional<double> score(const Eigen::MatrixXd& x, const MethodConfig& c, const Dataset& data) {
  if (!data.labels) return std::nullopt;
  return nmi(kmeans(x, c.k, c.restarts, c.eval_seed).labels, *data.labels);
}

nlohmann::json optional_json(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

Eigen::MatrixXd view_matrix(const Dataset& data, int v, int k) {
  if (!data.features.empty()) return data.features.at(static_cast<std::size_t>(v));
  return bottom_k(data.stack[static_cast<std::size_t>(v)], k).embedding.columns;
}

}  // namespace

RunOutput run_method(const Dataset& data, const MethodConfig& c) {
  validate(c, data);
  const auto start = std::chrono::steady_clock::now();
  RunOutput out;
  nlohmann::json details = nlohmann::json::object();
  std::optional<double> final_nmi;

  switch (c.method) {
    case Method::RjdBase: {
      RjdOptions opts{c.trials, c.k, c.seed, c.sampler, c.threads};
      const RjdResult r = rjd_base(data.stack, opts);
      const Trial& sel = r.selected_trial();
      auto s = cluster_and_score(sel.embedding.columns, c, data);
      out.predicted = std::move(s.predicted);
      details["selected_trial"] = sel.trial_index;
      details["selected_objective"] = sel.objective;
      details["selected_mu"] = std::vector<double>(sel.mu.values().begin(), sel.mu.values().end());
      details["max_ledger_objective"] =
          std::max_element(r.trials.begin(), r.trials.end(), [](const Trial& a, const Trial& b) {
            return a.objective < b.objective;
          })->objective;
      details["trials_completed"] = r.trials.size();
      details["trials_failed"] = r.failures.size();
      int gap_warnings = 0;
      for (const auto& t : r.trials) gap_warnings += t.spectral_gap_warning ? 1 : 0;
      details["spectral_gap_warnings"] = gap_warnings;
      out.artifacts.push_back({"trials.csv", to_csv([&](std::ostream& os) {
                                 write_trial_ledger(os, r.trials);
                               })});
      if (data.labels) {
        const auto land = landscape_stats(r, *data.labels, c.k, c.eval_seed, c.restarts, c.threads);
        final_nmi = land.selected_nmi;
        double sum = 0.0;
        for (double v : land.trial_nmi) sum += v;
        details["landscape"] = {{"mean_trial_nmi", land.mean_nmi},
                                {"std_trial_nmi", land.std_nmi},
                                {"selected_nmi", land.selected_nmi},
                                {"selected_above_mean", land.selected_above_mean},
                                {"trial_count", land.trial_nmi.size()},
                                {"trial_nmi_sum", sum}};
        out.artifacts.push_back({"landscape.csv", to_csv([&](std::ostream& os) {
                                   write_landscape_csv(os, r, land);
                                 })});
      }
      break;
    }
    case Method::PgaSingle:
    case Method::PgaBase: {
      PgaConfig pc;
      pc.iterations = c.iterations;
      pc.step_size = c.step_size;
      pc.max_halvings = c.max_halvings;
      pc.objective_kind =
          c.method == Method::PgaBase ? ObjectiveKind::Base : ObjectiveKind::SingleDirectional;
      pc.k = c.k;
      pc.eval_seed = c.eval_seed;
      pc.eval_restarts = c.restarts;
      const PgaResult r = pga_maximize(data.stack, pc, data.labels ? &*data.labels : nullptr);
      auto s = cluster_and_score(r.embedding.columns, c, data);
      out.predicted = std::move(s.predicted);
      final_nmi = s.nmi;
      details["mu_star"] = std::vector<double>(r.mu_star.values().begin(), r.mu_star.values().end());
      details["final_objective"] = r.trace.empty() ? nlohmann::json(nullptr) : nlohmann::json(r.trace.back().objective);
      details["aborted"] = r.aborted;
      out.artifacts.push_back({"trace.csv", to_csv([&](std::ostream& os) {
                                 write_pga_trace(os, r.trace);
                               })});
      break;
    }
    case Method::Mvsc:
    case Method::Coreg: {
      const Embedding e = c.method == Method::Mvsc
                              ? baselines::mvsc(data.affinities, c.k, c.coupling_rounds)
                              : baselines::coreg_mvsc(data.stack, c.k, c.lambda, c.coupling_rounds,
                                                      c.coreg_sign);
      auto s = cluster_and_score(e.columns, c, data);
      out.predicted = std::move(s.predicted);
      final_nmi = s.nmi;
      details["embedding_columns"] = e.k();
      break;
    }
    case Method::MvKmeans:
    case Method::MvSphKmeans: {
      const Eigen::MatrixXd v1 = view_matrix(data, c.views[0], c.k);
      const Eigen::MatrixXd v2 = view_matrix(data, c.views[1], c.k);
      baselines::MvKmeansOptions o{c.k, c.max_iters, c.seed};
      const auto r = c.method == Method::MvKmeans ? baselines::mv_kmeans(v1, v2, o)
                                                   : baselines::mv_sph_kmeans(v1, v2, o);
      out.predicted = r.labels;
      if (data.labels) final_nmi = nmi(r.labels, *data.labels);
      details["iterations"] = r.iterations;
      details["converged"] = r.converged;
      details["view_source"] = data.features.empty() ? "spectral-embedding" : "features";
      break;
    }
    case Method::JdRefine: {
      baselines::JdOptions jo;
      jo.max_sweeps = c.sweeps;
      jo.tol = c.jd_tol;
      std::optional<double> init_nmi;
      if (c.init == "rjd-base") {
        const RjdResult r = rjd_base(data.stack, RjdOptions{c.trials, c.k, c.seed, c.sampler, c.threads});
        const Trial& sel = r.selected_trial();
        init_nmi = score(sel.embedding.columns, c, data);
        jo.init = sym_eigh(combine(data.stack, sel.mu), data.stack.nodes()).vectors;
        details["rjd_selected_objective"] = sel.objective;
        details["rjd_selected_trial"] = sel.trial_index;
      }
      std::vector<baselines::RefinementPoint> curve;
      auto track = [&](int sweep, const Eigen::MatrixXd& q, double mass) {
        const auto e = baselines::order_modes(q, data.stack, c.k);
        curve.push_back({sweep, score(e.columns, c, data).value_or(0.0), mass});
      };
      jo.on_sweep = track;
      {
        const Eigen::MatrixXd q0 = jo.init ? *jo.init : Eigen::MatrixXd::Identity(data.stack.nodes(), data.stack.nodes());
        std::vector<Eigen::MatrixXd> a;
        for (const auto& l : data.stack.matrices()) a.push_back(q0.transpose() * l.matrix() * q0);
        track(0, q0, baselines::offdiag_mass(a));
      }
      const auto jd = baselines::jacobi_jd(data.stack, jo);
      const auto e = baselines::order_modes(jd.basis, data.stack, c.k);
      auto s = cluster_and_score(e.columns, c, data);
      out.predicted = std::move(s.predicted);
      final_nmi = s.nmi;
      details["init_nmi"] = optional_json(init_nmi);
      details["sweeps_run"] = jd.sweeps;
      details["offdiag_initial"] = jd.offdiag_history.front();
      details["offdiag_final"] = jd.offdiag_history.back();
      out.artifacts.push_back({"learning_curve.csv", to_csv([&](std::ostream& os) {
                                 baselines::write_learning_curve(os, curve);
                               })});
      break;
    }
    case Method::SingleLaplacian: {
      const auto e = bottom_k(data.stack[static_cast<std::size_t>(c.modality)], c.k).embedding;
      auto s = cluster_and_score(e.columns, c, data);
      out.predicted = std::move(s.predicted);
      final_nmi = s.nmi;
      details["modality_name"] = data.stack.names()[static_cast<std::size_t>(c.modality)];
      break;
    }
  }

  nlohmann::json config;
  to_json(config, c);
  out.report = {
      {"method", method_name(c.method)},
      {"nmi", optional_json(final_nmi)},
      {"wall_clock_seconds", seconds_since(start)},
      {"config", config},
      {"seeds", {{"method_seed", c.seed}, {"eval_seed", c.eval_seed}}},
      {"dataset", data.provenance},
      {"details", details},
      {"conventions",
       {{"nmi_normalizer", "arithmetic"},
        {"kmeans", "k-means++ best of restarts by WCSS, Lloyd to fixpoint or 300 iterations"},
        {"coreg_update", c.coreg_sign == baselines::CoregSign::AsPrinted ? "L_i + lambda*sum X_r X_r^T"
                                                                        : "L_i - lambda*sum X_r X_r^T"},
        {"mv_kmeans_posterior", "isotropic Gaussian, shared variance per view, view-averaged"},
        {"nn_index", data.provenance.value("nn_index", nlohmann::json(nullptr))}}},
  };
  if (out.predicted) {
    out.artifacts.push_back({"predicted_labels.csv", to_csv([&](std::ostream& os) {
                               os << "label\n";
                               for (int l : out.predicted->assignments()) os << l << '\n';
                             })});
  }
  if (details.value("aborted", false)) {
    out.report["error"] = "NonFiniteObjective: projected gradient ascent aborted";
  }
  return out;
}

// ---------------------------------------------------------------------------

void to_json(nlohmann::json& j, const SweepConfig& c) {
  nlohmann::json method;
  to_json(method, c.method);
  j = {{"method", method},
       {"seeds", c.seeds},
       {"vary", c.vary == SweepVary::Method ? "method" : c.vary == SweepVary::Dataset ? "dataset" : "both"},
       {"threads", c.threads}};
  if (c.synth) {
    nlohmann::json s;
    sbm::to_json(s, *c.synth);
    j["synth"] = s;
  }
}

void from_json(const nlohmann::json& j, SweepConfig& c) {
  try {
    c = SweepConfig{};
    if (j.contains("method")) from_json(j.at("method"), c.method);
    c.seeds = j.value("seeds", c.seeds);
    const std::string vary = j.value("vary", std::string("method"));
    if (vary == "method") {
      c.vary = SweepVary::Method;
    } else if (vary == "dataset") {
      c.vary = SweepVary::Dataset;
    } else if (vary == "both") {
      c.vary = SweepVary::Both;
    } else {
      throw Error(ErrorCode::InvalidArgument, "vary must be method, dataset or both");
    }
    c.threads = j.value("threads", c.threads);
    if (j.contains("synth")) {
      sbm::SbmConfig s;
      sbm::from_json(j.at("synth"), s);
      c.synth = s;
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("sweep config: ") + e.what());
  }
}

RunOutput run_sweep(const Dataset* fixed, const SweepConfig& config) {
  if (config.seeds.empty()) throw Error(ErrorCode::InvalidArgument, "sweep needs at least one seed");
  if (config.threads < 1) throw Error(ErrorCode::InvalidArgument, "threads must be positive");
  const bool vary_data = config.vary != SweepVary::Method;
  const bool vary_method = config.vary != SweepVary::Dataset;
  if (vary_data && !config.synth) {
    throw Error(ErrorCode::InvalidArgument, "regenerating the dataset needs a synth config");
  }
  if (!vary_data && !fixed) throw Error(ErrorCode::InvalidArgument, "sweep needs a dataset");
  if (fixed) validate(config.method, *fixed);

  const auto start = std::chrono::steady_clock::now();
  const auto count = config.seeds.size();
  std::vector<nlohmann::json> reports(count);
  parallel_for(count, config.threads, [&](std::size_t i) {
    MethodConfig mc = config.method;
    mc.threads = 1;
    if (vary_method) mc.seed = config.seeds[i];
    if (vary_data) {
      sbm::SbmConfig sc = *config.synth;
      sc.seed = config.seeds[i];
      reports[i] = run_method(synthesize(sc), mc).report;
    } else {
      reports[i] = run_method(*fixed, mc).report;
    }
  });

  // RJD-BASE sweeps judge the selected trial against the mean trial NMI:
  // pooled over all seeds for a fixed dataset, per seed when it varies.
  const bool landscape = config.method.method == Method::RjdBase &&
                         reports.front()["details"].contains("landscape");
  double pooled_mean = 0.0;
  if (landscape && !vary_data) {
    double sum = 0.0, n = 0.0;
    for (const auto& r : reports) {
      sum += r["details"]["landscape"]["trial_nmi_sum"].get<double>();
      n += r["details"]["landscape"]["trial_count"].get<double>();
    }
    pooled_mean = sum / n;
  }

  std::ostringstream csv;
  csv << std::setprecision(17) << "seed,nmi,objective,mean_trial_nmi,above_mean,seconds\n";
  int above = 0;
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < count; ++i) {
    const auto& r = reports[i];
    const auto& d = r["details"];
    csv << config.seeds[i] << ',';
    if (!r["nmi"].is_null()) csv << r["nmi"].get<double>();
    csv << ',';
    if (d.contains("selected_objective")) csv << d["selected_objective"].get<double>();
    csv << ',';
    nlohmann::json row{{"seed", config.seeds[i]}, {"nmi", r["nmi"]}};
    if (landscape) {
      const double mean = vary_data ? d["landscape"]["mean_trial_nmi"].get<double>() : pooled_mean;
      const bool is_above = r["nmi"].get<double>() >= mean - 1e-12;
      above += is_above ? 1 : 0;
      csv << mean << ',' << (is_above ? 1 : 0);
      row["mean_trial_nmi"] = mean;
      row["above_mean"] = is_above;
    } else {
      csv << ',';
    }
    csv << ',' << r["wall_clock_seconds"].get<double>() << '\n';
    row["wall_clock_seconds"] = r["wall_clock_seconds"];
    rows.push_back(std::move(row));
  }

  RunOutput out;
  nlohmann::json cfg;
  to_json(cfg, config);
  out.report = {{"sweep", cfg},
                {"seed_count", count},
                {"rows", rows},
                {"wall_clock_seconds", seconds_since(start)},
                {"dataset", fixed && !vary_data ? fixed->provenance : nlohmann::json(nullptr)}};
  if (landscape) {
    out.report["above_mean_fraction"] = static_cast<double>(above) / static_cast<double>(count);
    out.report["mean_rule"] = vary_data ? "per-seed trial mean" : "pooled trial mean over all seeds";
    if (!vary_data) out.report["pooled_mean_trial_nmi"] = pooled_mean;
  } else {
    out.report["above_mean_fraction"] = nullptr;
  }
  out.artifacts.push_back({"sweep.csv", csv.str()});
  return out;
}

void write_artifacts(const RunOutput& out, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());
  for (const auto& a : out.artifacts) write_text(dir / a.filename, a.contents);
}

}  // namespace rjdbase::experiment
