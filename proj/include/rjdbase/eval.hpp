#pragma once

#include "rjdbase/labels.hpp"
#include "rjdbase/linalg.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace rjdbase {

struct RjdResult;

inline constexpr int kKmeansMaxIterations = 300;
inline constexpr int kDefaultRestarts = 10;
inline constexpr std::uint64_t kDefaultEvalSeed = 20240917;

struct KmeansResult {
  ClusterLabels labels;
  Eigen::MatrixXd centroids;
  double wcss = 0.0;
  int iterations = 0;
};

/// One k-means++ seeded Lloyd run, to a fixpoint or max_iterations.
KmeansResult kmeans_single(const Eigen::MatrixXd& rows, int k, Rng& rng,
                           int max_iterations = kKmeansMaxIterations);

/// Best of `restarts` k-means++ initializations by within-cluster sum of
/// squares. Deterministic given the seed.
KmeansResult kmeans(const Eigen::MatrixXd& rows, int k, int restarts = kDefaultRestarts,
                    std::uint64_t seed = kDefaultEvalSeed);

/// Within-cluster sum of squared distances to the cluster means.
double wcss(const Eigen::MatrixXd& rows, const ClusterLabels& labels);

/// Normalized mutual information with the arithmetic-mean normalizer
/// (H(a) + H(b)) / 2.
double nmi(const ClusterLabels& a, const ClusterLabels& b);

struct LandscapeSummary {
  std::vector<double> trial_nmi;  // aligned with RjdResult::trials
  double mean_nmi = 0.0;
  double std_nmi = 0.0;  // population standard deviation
  double selected_nmi = 0.0;
  bool selected_above_mean = false;
};

/// Clusters every trial embedding and compares it with the ground truth.
LandscapeSummary landscape_stats(const RjdResult& result, const ClusterLabels& truth, int k,
                                 std::uint64_t eval_seed = kDefaultEvalSeed,
                                 int restarts = kDefaultRestarts, int threads = 1);

/// CSV with columns trial_index,objective,nmi.
void write_landscape_csv(std::ostream& out, const RjdResult& result,
                         const LandscapeSummary& summary);

}  // namespace rjdbase
