#pragma once

#include "rjdbase/graph.hpp"
#include "rjdbase/labels.hpp"
#include "rjdbase/linalg.hpp"

#include <json.hpp>

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <vector>

namespace rjdbase::sbm {

/// Block strengths of the four modality recipes:
///   1: diag(alpha x ceil(k/2), beta x floor(k/2)) + epsilon
///   2: diag(zeta  x ceil(k/2), xi   x floor(k/2)) + eta
///   3: gamma * ones + chi
///   4: theta * I + delta * (ones - I)
struct BlockParams {
  double alpha = 0.9;
  double beta = 0.05;
  double gamma = 0.06;
  double delta = 0.2;
  double zeta = 0.05;
  double theta = 0.7;
  double xi = 0.9;
  double epsilon = 0.005;
  double eta = 0.005;
  double chi = 0.005;
};

struct SbmConfig {
  int n = 300;
  int k = 6;
  std::vector<int> recipes{1, 2, 3, 4};  // one modality per entry
  std::vector<double> sigma_per_modality{1.0, 1.0, 1e6, 1.0};
  BlockParams block_params;
  double dirichlet_concentration = 1.0;
  std::uint64_t seed = 0;

  int m() const noexcept { return static_cast<int>(recipes.size()); }
  void validate() const;

  /// N = 300, k = 6, m = 4 with the published block parameters.
  static SbmConfig standard_preset(std::uint64_t seed);
};

/// Size-rounding rule recorded in dataset provenance.
inline constexpr const char* kRoundingRule =
    "largest-remainder; one node donated from the largest cluster to each empty cluster";

struct MultimodalDataset {
  ClusterLabels labels;
  std::vector<int> cluster_sizes;
  std::vector<AffinityMatrix> affinities;
  LaplacianStack laplacians;
  SbmConfig provenance;
};

Eigen::MatrixXd block_matrix(int recipe, const BlockParams& params, int k);

/// Integer cluster sizes from proportions by largest remainder, then a
/// post-pass so that every cluster has at least one member.
std::vector<int> round_sizes(const std::vector<double>& proportions, int n);

MultimodalDataset generate(const SbmConfig& config);

void to_json(nlohmann::json& j, const SbmConfig& c);
void from_json(const nlohmann::json& j, SbmConfig& c);

/// Writes labels.csv, affinity_<i>.bin per modality and provenance.json.
void export_dataset(const MultimodalDataset& data, const std::filesystem::path& dir);

}  // namespace rjdbase::sbm
