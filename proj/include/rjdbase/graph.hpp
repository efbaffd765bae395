#pragma once

#include "rjdbase/linalg.hpp"

#include <Eigen/Dense>

#include <span>

namespace rjdbase {

/// Rows are samples, columns are features.
using FeatureMatrix = Eigen::MatrixXd;

/// Nonnegative symmetric weights with a zero diagonal.
class AffinityMatrix {
 public:
  AffinityMatrix() = default;
  /// Symmetrizes by averaging; rejects negative, non-finite or non-square
  /// input and a nonzero diagonal.
  explicit AffinityMatrix(Eigen::MatrixXd weights);

  Eigen::Index size() const noexcept { return w_.rows(); }
  const Eigen::MatrixXd& weights() const noexcept { return w_; }
  double operator()(Eigen::Index p, Eigen::Index q) const { return w_(p, q); }

 private:
  Eigen::MatrixXd w_;
};

/// L = I - D^{-1/2} W D^{-1/2} together with the degrees used to build it.
struct GraphLaplacian {
  SymmetricMatrix matrix;
  Eigen::VectorXd degrees;
};

inline constexpr int kDefaultNearestNeighbor = 7;

/// exp(-(x_p - x_q)^2 / (2 sigma^2)) off the diagonal.
AffinityMatrix rbf_affinity(std::span<const double> x, double sigma);

/// Self-tuning kernel exp(-||z_p - z_q||^2 / (sigma_p sigma_q)), where
/// sigma_p is the Euclidean distance from sample p to its nn_index-th nearest
/// other sample. Bandwidths are clamped from below at 1e-12 times the data
/// diameter so that duplicated samples do not produce a zero bandwidth.
AffinityMatrix self_tuning_affinity(const FeatureMatrix& z,
                                    int nn_index = kDefaultNearestNeighbor);

GraphLaplacian normalized_laplacian(const AffinityMatrix& w);

/// Number of connected components of the graph with edges w_pq > threshold.
int connectivity(const AffinityMatrix& w, double threshold = 0.0);

/// Spectral sanity checks a normalized Laplacian must pass.
struct LaplacianCheck {
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
  int zero_multiplicity = 0;
  bool psd = false;
  bool bounded = false;
  bool simple_zero = false;
  bool ok() const noexcept { return psd && bounded && simple_zero; }
};

LaplacianCheck check_laplacian(const SymmetricMatrix& l, double zero_tol = 1e-8);

}  // namespace rjdbase
