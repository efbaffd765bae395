#pragma once

#include "rjdbase/graph.hpp"
#include "rjdbase/labels.hpp"
#include "rjdbase/linalg.hpp"
#include "rjdbase/rjd.hpp"

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

namespace rjdbase::baselines {

// ---------------------------------------------------------------------------
// Multiview spectral clustering
// ---------------------------------------------------------------------------

/// Per-view embeddings after J rounds of affinity-level co-regularization,
/// concatenated into an n x (m*k) matrix. Each round replaces view i's
/// affinity with sym(sum_{r != i} X_r X_r^T W_i), negatives clamped to zero
/// and the diagonal zeroed, and re-embeds from its normalized Laplacian.
Embedding mvsc(const std::vector<AffinityMatrix>& affinities, int k, int iterations);

enum class CoregSign {
  Reward,    // L_i - lambda * sum_{r != i} X_r X_r^T  (default)
  AsPrinted  // L_i + lambda * sum_{r != i} X_r X_r^T
};

/// Laplacian-level co-regularization: each round re-embeds view i from
/// L_i -/+ lambda * sum_{r != i} X_r X_r^T; output is the concatenation.
Embedding coreg_mvsc(const LaplacianStack& stack, int k, double lambda, int iterations,
                     CoregSign sign = CoregSign::Reward);

/// Bottom-k eigenvectors of a single symmetric matrix, zero mode excluded,
/// without the disconnected-graph check.
Eigen::MatrixXd bottom_eigenvectors(const SymmetricMatrix& l, int k);

// ---------------------------------------------------------------------------
// Two-view co-EM k-means
// ---------------------------------------------------------------------------

struct MvKmeansOptions {
  int k = 2;
  int max_iterations = 100;
  std::uint64_t seed = 0;
  int max_empty_restarts = 10;
};

struct MvKmeansResult {
  ClusterLabels labels;
  int iterations = 0;
  bool converged = false;
  std::array<Eigen::MatrixXd, 2> centroids;
};

/// Each view's centroids are estimated from the partition produced in the
/// other view. Final labels maximize the view-averaged posterior of an
/// isotropic Gaussian mixture with one shared variance per view.
MvKmeansResult mv_kmeans(const Eigen::MatrixXd& view1, const Eigen::MatrixXd& view2,
                         const MvKmeansOptions& options);

/// Spherical variant: rows are scaled to unit length and assignments use
/// cosine similarity. Rows of zero norm are rejected.
MvKmeansResult mv_sph_kmeans(const Eigen::MatrixXd& view1, const Eigen::MatrixXd& view2,
                             const MvKmeansOptions& options);

// ---------------------------------------------------------------------------
// Jacobi joint diagonalization
// ---------------------------------------------------------------------------

struct JdResult {
  Eigen::MatrixXd basis;               // orthogonal Q
  std::vector<double> offdiag_history; // entry 0 is the initial mass
  int sweeps = 0;
};

/// Sum over the family of squared off-diagonal entries of Q^T A_i Q.
double offdiag_mass(const std::vector<Eigen::MatrixXd>& transformed);

struct JdOptions {
  int max_sweeps = 100;
  double tol = 1e-12;  // stop when a sweep lowers the mass by less than this
  std::optional<Eigen::MatrixXd> init;
  /// Called after every completed sweep with (sweep index, current Q, mass).
  std::function<void(int, const Eigen::MatrixXd&, double)> on_sweep;
};

/// Cyclic Jacobi sweeps of Givens rotations; each rotation is the closed-form
/// minimizer of the joint off-diagonal mass in its (p, q) plane.
JdResult jacobi_jd(const LaplacianStack& stack, const JdOptions& options);

/// Scores column j of Q by the average Rayleigh quotient over the stack,
/// sorts ascending, drops the lowest-scoring column and returns the next k.
Embedding order_modes(const Eigen::MatrixXd& q, const LaplacianStack& stack, int k);

struct RefinementPoint {
  int iteration = 0;
  double nmi = 0.0;
  double offdiag = 0.0;
};

/// CSV with columns iteration,nmi,offdiag_mass.
void write_learning_curve(std::ostream& out, const std::vector<RefinementPoint>& curve);

}  // namespace rjdbase::baselines
