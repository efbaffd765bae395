#pragma once

#include "rjdbase/linalg.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace rjdbase {

/// n x k matrix with orthonormal columns; row p is the embedding of node p.
struct Embedding {
  Eigen::MatrixXd columns;

  Eigen::Index n() const noexcept { return columns.rows(); }
  Eigen::Index k() const noexcept { return columns.cols(); }
};

/// Bottom-k spectral data of one convex combination, zero mode excluded.
struct SpectralSlice {
  Eigen::VectorXd eigenvalues;  // lambda_1..lambda_k
  Embedding embedding;
  /// lambda_{k+1} - lambda_k, or +inf when k + 1 == n - 1 leaves nothing above.
  double gap_above = 0.0;
};

/// Eigendecomposes L(mu) and drops the smallest (zero) mode. Throws
/// ZeroModeAmbiguity when lambda_1 < 1e-10, i.e. the combined graph is
/// disconnected.
SpectralSlice bottom_k(const LaplacianStack& stack, const SimplexWeights& mu, int k);
SpectralSlice bottom_k(const SymmetricMatrix& l, int k);

struct Trial {
  SimplexWeights mu;
  Eigen::VectorXd eigenvalues;
  Embedding embedding;
  double objective = 0.0;
  int trial_index = 0;
  std::uint64_t seed_offset = 0;
  bool spectral_gap_warning = false;
};

Trial run_trial(const LaplacianStack& stack, int k, const SimplexWeights& mu,
                int trial_index = 0, std::uint64_t seed_offset = 0);

enum class WeightSampler { NormalizedUniform, FlatDirichlet };

struct RjdOptions {
  int trials = 200;
  int k = 6;
  std::uint64_t seed = 0;
  WeightSampler sampler = WeightSampler::NormalizedUniform;
  int threads = 1;
};

struct TrialFailure {
  int trial_index = 0;
  std::string message;
};

struct RjdResult {
  std::vector<Trial> trials;  // successful trials, ascending trial_index
  std::vector<TrialFailure> failures;
  std::size_t selected = 0;  // index into trials

  const Trial& selected_trial() const { return trials.at(selected); }
};

/// Weights drawn by trial t with the given sampler; trial t uses its own
/// stream seeded with seed + t.
SimplexWeights trial_weights(std::size_t m, std::uint64_t seed, int trial_index,
                             WeightSampler sampler);

/// Samples T random convex combinations, eigendecomposes each and selects the
/// one maximizing the bottom-k eigenvalue sum. Ties within 1e-12 go to the
/// lowest trial index.
RjdResult rjd_base(const LaplacianStack& stack, const RjdOptions& options);

/// Deterministic argmax over trial objectives with the lowest-index tie-break.
std::size_t select_trial(const std::vector<Trial>& trials);

/// CSV with columns trial_index,mu_1..mu_m,objective,lambda_1..lambda_k.
void write_trial_ledger(std::ostream& out, const std::vector<Trial>& trials);

}  // namespace rjdbase
