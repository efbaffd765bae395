#include "rjdbase/sbm.hpp"

#include "rjdbase/error.hpp"
#include "rjdbase/matrix_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

namespace rjdbase::sbm {

void SbmConfig::validate() const {
  if (k < 2) throw Error(ErrorCode::InvalidArgument, "k must be at least 2");
  if (n < k) {
    throw Error(ErrorCode::InvalidArgument,
                "n=" + std::to_string(n) + " must be at least k=" + std::to_string(k));
  }
  if (recipes.empty()) throw Error(ErrorCode::InvalidArgument, "at least one modality required");
  for (int r : recipes) {
    if (r < 1 || r > 4) throw Error(ErrorCode::UnknownRecipe, "unknown recipe " + std::to_string(r));
  }
  if (sigma_per_modality.size() != recipes.size()) {
    throw Error(ErrorCode::InvalidArgument, "one sigma per modality required");
  }
  for (double s : sigma_per_modality) {
    if (!(s > 0.0) || !std::isfinite(s)) {
      throw Error(ErrorCode::NonPositiveSigma, "modality sigma must be positive");
    }
  }
  const auto& b = block_params;
  for (double v : {b.alpha, b.beta, b.gamma, b.delta, b.zeta, b.theta, b.xi, b.epsilon, b.eta,
                   b.chi}) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCode::InvalidArgument, "block parameters must be nonnegative");
    }
  }
  if (!(dirichlet_concentration > 0.0) || !std::isfinite(dirichlet_concentration)) {
    throw Error(ErrorCode::InvalidArgument, "Dirichlet concentration must be positive");
  }
}

SbmConfig SbmConfig::standard_preset(std::uint64_t seed) {
  SbmConfig c;
  c.seed = seed;
  return c;
}

Eigen::MatrixXd block_matrix(int recipe, const BlockParams& p, int k) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be positive");
  const int first = (k + 1) / 2;
  const Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(k, k);
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(k, k);
  Eigen::VectorXd diag(k);
  switch (recipe) {
    case 1:
      for (int j = 0; j < k; ++j) diag(j) = j < first ? p.alpha : p.beta;
      return Eigen::MatrixXd(diag.asDiagonal()) + p.epsilon * ones;
    case 2:
      for (int j = 0; j < k; ++j) diag(j) = j < first ? p.zeta : p.xi;
      return Eigen::MatrixXd(diag.asDiagonal()) + p.eta * ones;
    case 3:
      return (p.gamma + p.chi) * ones;
    case 4:
      return p.theta * eye + p.delta * (ones - eye);
    default:
      throw Error(ErrorCode::UnknownRecipe, "unknown recipe " + std::to_string(recipe));
  }
}

std::vector<int> round_sizes(const std::vector<double>& proportions, int n) {
  const auto k = proportions.size();
  std::vector<int> sizes(k);
  std::vector<double> remainder(k);
  int assigned = 0;
  for (std::size_t j = 0; j < k; ++j) {
    const double exact = proportions[j] * n;
    sizes[j] = static_cast<int>(std::floor(exact));
    remainder[j] = exact - sizes[j];
    assigned += sizes[j];
  }
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t i = 0; assigned < n; i = (i + 1) % k, ++assigned) ++sizes[order[i]];
  for (std::size_t j = 0; j < k; ++j) {
    if (sizes[j] == 0) {
      auto largest = std::max_element(sizes.begin(), sizes.end());
      --*largest;
      sizes[j] = 1;
    }
  }
  return sizes;
}

MultimodalDataset generate(const SbmConfig& config) {
  config.validate();
  Rng rng(config.seed);

  std::gamma_distribution<double> gamma(config.dirichlet_concentration, 1.0);
  std::vector<double> proportions(static_cast<std::size_t>(config.k));
  double total = 0.0;
  do {
    for (auto& v : proportions) v = gamma(rng);
    total = std::accumulate(proportions.begin(), proportions.end(), 0.0);
  } while (!(total > 0.0));
  for (auto& v : proportions) v /= total;
  const std::vector<int> sizes = round_sizes(proportions, config.n);
  if (std::any_of(sizes.begin(), sizes.end(), [](int s) { return s < 1; })) {
    throw Error(ErrorCode::EmptyCluster, "cluster size rounding produced an empty cluster");
  }

  std::vector<int> y;
  y.reserve(static_cast<std::size_t>(config.n));
  for (int j = 0; j < config.k; ++j) y.insert(y.end(), static_cast<std::size_t>(sizes[j]), j);
  std::shuffle(y.begin(), y.end(), rng);

  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<AffinityMatrix> affinities;
  std::vector<SymmetricMatrix> laplacians;
  std::vector<std::string> names;
  for (int i = 0; i < config.m(); ++i) {
    std::vector<double> x(static_cast<std::size_t>(config.n));
    for (auto& v : x) v = normal(rng);
    const Eigen::MatrixXd b = block_matrix(config.recipes[i], config.block_params, config.k);
    Eigen::MatrixXd w = rbf_affinity(x, config.sigma_per_modality[i]).weights();
    for (int p = 0; p < config.n; ++p) {
      for (int q = 0; q < config.n; ++q) w(p, q) *= b(y[p], y[q]);
    }
    w.diagonal().setZero();
    AffinityMatrix a(std::move(w));
    laplacians.push_back(normalized_laplacian(a).matrix);
    affinities.push_back(std::move(a));
    names.push_back("modality_" + std::to_string(i + 1));
  }

  return MultimodalDataset{ClusterLabels(std::move(y), config.k), sizes, std::move(affinities),
                           LaplacianStack(std::move(laplacians), std::move(names)), config};
}

void to_json(nlohmann::json& j, const SbmConfig& c) {
  const auto& b = c.block_params;
  j = nlohmann::json{
      {"n", c.n},
      {"k", c.k},
      {"m", c.m()},
      {"recipes", c.recipes},
      {"sigma_per_modality", c.sigma_per_modality},
      {"block_params",
       {{"alpha", b.alpha}, {"beta", b.beta}, {"gamma", b.gamma}, {"delta", b.delta},
        {"zeta", b.zeta}, {"theta", b.theta}, {"xi", b.xi}, {"epsilon", b.epsilon},
        {"eta", b.eta}, {"chi", b.chi}}},
      {"dirichlet_concentration", c.dirichlet_concentration},
      {"seed", c.seed},
      {"size_rounding", kRoundingRule},
  };
}

void from_json(const nlohmann::json& j, SbmConfig& c) {
  c = SbmConfig{};
  c.n = j.value("n", c.n);
  c.k = j.value("k", c.k);
  c.recipes = j.value("recipes", c.recipes);
  c.sigma_per_modality = j.value("sigma_per_modality", c.sigma_per_modality);
  c.dirichlet_concentration = j.value("dirichlet_concentration", c.dirichlet_concentration);
  c.seed = j.value("seed", c.seed);
  if (j.contains("block_params")) {
    const auto& bj = j.at("block_params");
    auto& b = c.block_params;
    b.alpha = bj.value("alpha", b.alpha);
    b.beta = bj.value("beta", b.beta);
    b.gamma = bj.value("gamma", b.gamma);
    b.delta = bj.value("delta", b.delta);
    b.zeta = bj.value("zeta", b.zeta);
    b.theta = bj.value("theta", b.theta);
    b.xi = bj.value("xi", b.xi);
    b.epsilon = bj.value("epsilon", b.epsilon);
    b.eta = bj.value("eta", b.eta);
    b.chi = bj.value("chi", b.chi);
  }
  if (j.contains("m") && j.at("m").get<int>() != c.m()) {
    throw Error(ErrorCode::InvalidArgument, "m disagrees with the number of recipes");
  }
}

void export_dataset(const MultimodalDataset& data, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());
  io::write_labels_csv(dir / "labels.csv", data.labels.assignments());
  for (std::size_t i = 0; i < data.affinities.size(); ++i) {
    io::write_binary_matrix(dir / ("affinity_" + std::to_string(i) + ".bin"),
                            data.affinities[i].weights());
  }
  nlohmann::json prov;
  to_json(prov, data.provenance);
  prov["cluster_sizes"] = data.cluster_sizes;
  prov["generator"] = "weighted-sbm";
  std::ofstream out(dir / "provenance.json", std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write provenance.json");
  out << prov.dump(2) << '\n';
}

}  // namespace rjdbase::sbm
