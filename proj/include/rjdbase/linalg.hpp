#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace rjdbase {

// Numerical tolerances used across the library. Tests and validators read
// these instead of hard-coding their own.
namespace tol {
inline constexpr double kOrthonormality = 1e-10;
inline constexpr double kResidual = 1e-8;
inline constexpr double kSimplexSum = 1e-12;
inline constexpr double kSpectralGap = 1e-10;
inline constexpr double kGradientGap = 1e-8;
inline constexpr double kZeroMode = 1e-10;
inline constexpr double kPsd = 1e-9;
}  // namespace tol

using Rng = std::mt19937_64;

/// Dense real symmetric matrix. Construction symmetrizes by averaging with the
/// transpose and rejects non-finite entries, so the stored matrix is exactly
/// symmetric.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;
  explicit SymmetricMatrix(Eigen::MatrixXd entries);

  static SymmetricMatrix identity(Eigen::Index n);

  Eigen::Index size() const noexcept { return m_.rows(); }
  const Eigen::MatrixXd& matrix() const noexcept { return m_; }
  double operator()(Eigen::Index p, Eigen::Index q) const { return m_(p, q); }

 private:
  Eigen::MatrixXd m_;
};

/// Ascending eigenvalues with matching orthonormal eigenvector columns.
struct EigenPairs {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};

/// A point on the standard simplex: nonnegative weights summing to one.
class SimplexWeights {
 public:
  explicit SimplexWeights(std::vector<double> weights);

  static SimplexWeights uniform(std::size_t m);
  static SimplexWeights vertex(std::size_t m, std::size_t j);

  std::size_t size() const noexcept { return w_.size(); }
  double operator[](std::size_t i) const { return w_[i]; }
  std::span<const double> values() const noexcept { return w_; }
  Eigen::VectorXd to_vector() const;

  bool operator==(const SimplexWeights&) const = default;

 private:
  std::vector<double> w_;
};

/// Ordered family of symmetric matrices over the same nodes. Usually graph
/// Laplacians, one per modality.
class LaplacianStack {
 public:
  LaplacianStack() = default;
  explicit LaplacianStack(std::vector<SymmetricMatrix> matrices,
                          std::vector<std::string> names = {});

  std::size_t modalities() const noexcept { return mats_.size(); }
  Eigen::Index nodes() const noexcept {
    return mats_.empty() ? 0 : mats_.front().size();
  }
  const SymmetricMatrix& operator[](std::size_t i) const { return mats_[i]; }
  std::span<const SymmetricMatrix> matrices() const noexcept { return mats_; }
  const std::vector<std::string>& names() const noexcept { return names_; }

 private:
  std::vector<SymmetricMatrix> mats_;
  std::vector<std::string> names_;
};

/// The `count` algebraically smallest eigenpairs of `a`, ascending.
EigenPairs sym_eigh(const SymmetricMatrix& a, Eigen::Index count);

/// Sum_i mu_i * stack[i].
SymmetricMatrix combine(const LaplacianStack& stack, const SimplexWeights& mu);

/// I.i.d. Uniform(0,1) draws normalized by their sum.
SimplexWeights sample_simplex(std::size_t m, Rng& rng);

/// Flat Dirichlet(1,...,1) draw, i.e. the uniform law on the simplex.
SimplexWeights sample_simplex_dirichlet(std::size_t m, Rng& rng);

/// Euclidean projection onto the standard simplex (sort and threshold).
SimplexWeights project_simplex(std::span<const double> v);

bool all_finite(const Eigen::MatrixXd& m) noexcept;

/// || X^T X - I ||_F
double orthonormality_defect(const Eigen::MatrixXd& x);

}  // namespace rjdbase
