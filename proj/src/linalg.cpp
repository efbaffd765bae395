#include "rjdbase/linalg.hpp"

#include "rjdbase/error.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rjdbase {

bool all_finite(const Eigen::MatrixXd& m) noexcept {
  return m.allFinite();
}

double orthonormality_defect(const Eigen::MatrixXd& x) {
  const Eigen::MatrixXd gram = x.transpose() * x;
  return (gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).norm();
}

SymmetricMatrix::SymmetricMatrix(Eigen::MatrixXd entries) {
  if (entries.rows() != entries.cols()) {
    throw Error(ErrorCode::DimensionMismatch,
                "symmetric matrix must be square, got " +
                    std::to_string(entries.rows()) + "x" +
                    std::to_string(entries.cols()));
  }
  if (!entries.allFinite()) {
    throw Error(ErrorCode::NonFinite, "matrix contains NaN or Inf");
  }
  m_ = 0.5 * (entries + entries.transpose());
}

SymmetricMatrix SymmetricMatrix::identity(Eigen::Index n) {
  return SymmetricMatrix(Eigen::MatrixXd::Identity(n, n));
}

SimplexWeights::SimplexWeights(std::vector<double> weights) : w_(std::move(weights)) {
  if (w_.empty()) {
    throw Error(ErrorCode::InvalidArgument, "simplex weights must be non-empty");
  }
  double sum = 0.0;
  for (double w : w_) {
    if (!std::isfinite(w)) throw Error(ErrorCode::NonFinite, "simplex weight is not finite");
    if (w < 0.0) throw Error(ErrorCode::InvalidArgument, "simplex weight is negative");
    sum += w;
  }
  if (std::abs(sum - 1.0) > tol::kSimplexSum) {
    throw Error(ErrorCode::InvalidArgument,
                "simplex weights sum to " + std::to_string(sum) + ", expected 1");
  }
}

SimplexWeights SimplexWeights::uniform(std::size_t m) {
  return SimplexWeights(std::vector<double>(m, 1.0 / static_cast<double>(m)));
}

SimplexWeights SimplexWeights::vertex(std::size_t m, std::size_t j) {
  std::vector<double> w(m, 0.0);
  w.at(j) = 1.0;
  return SimplexWeights(std::move(w));
}

Eigen::VectorXd SimplexWeights::to_vector() const {
  return Eigen::Map<const Eigen::VectorXd>(w_.data(), static_cast<Eigen::Index>(w_.size()));
}

LaplacianStack::LaplacianStack(std::vector<SymmetricMatrix> matrices,
                               std::vector<std::string> names)
    : mats_(std::move(matrices)), names_(std::move(names)) {
  if (mats_.empty()) {
    throw Error(ErrorCode::InvalidArgument, "stack needs at least one matrix");
  }
  const auto n = mats_.front().size();
  for (const auto& m : mats_) {
    if (m.size() != n) {
      throw Error(ErrorCode::DimensionMismatch, "stack matrices differ in size");
    }
  }
  if (!names_.empty() && names_.size() != mats_.size()) {
    throw Error(ErrorCode::DimensionMismatch, "one name per modality required");
  }
  if (names_.empty()) {
    for (std::size_t i = 0; i < mats_.size(); ++i) {
      names_.push_back("modality_" + std::to_string(i));
    }
  }
}

// LAPACK dsyevr with an index range computes only the requested eigenpairs
// (MRRR), which is an order of magnitude cheaper than a full decomposition
// when count << n.
EigenPairs sym_eigh(const SymmetricMatrix& a, Eigen::Index count) {
  const Eigen::Index n = a.size();
  if (count < 1) throw Error(ErrorCode::InvalidArgument, "eigenpair count must be positive");
  if (count > n) {
    throw Error(ErrorCode::CountExceedsDim,
                "requested " + std::to_string(count) + " eigenpairs of a " +
                    std::to_string(n) + "x" + std::to_string(n) + " matrix");
  }
  if (!a.matrix().allFinite()) throw Error(ErrorCode::NonFinite, "matrix contains NaN or Inf");

  Eigen::MatrixXd work = a.matrix();
  Eigen::VectorXd w(n);
  EigenPairs out;
  out.vectors.resize(n, count);
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(n));
  lapack_int found = 0;
  const auto ln = static_cast<lapack_int>(n);
  const char range = count == n ? 'A' : 'I';
  const lapack_int info =
      LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', range, 'L', ln, work.data(), ln, 0.0, 0.0, 1,
                     static_cast<lapack_int>(count), 0.0, &found, w.data(),
                     out.vectors.data(), ln, support.data());
  if (info != 0 || found != count) {
    throw Error(ErrorCode::EigenSolverFailure,
                "dsyevr failed (info=" + std::to_string(info) + ")");
  }
  out.values = w.head(count);
  return out;
}

SymmetricMatrix combine(const LaplacianStack& stack, const SimplexWeights& mu) {
  if (stack.modalities() != mu.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "stack has " + std::to_string(stack.modalities()) + " matrices but " +
                    std::to_string(mu.size()) + " weights were given");
  }
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(stack.nodes(), stack.nodes());
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (mu[i] != 0.0) acc.noalias() += mu[i] * stack[i].matrix();
  }
  return SymmetricMatrix(std::move(acc));
}

SimplexWeights sample_simplex(std::size_t m, Rng& rng) {
  if (m < 1) throw Error(ErrorCode::InvalidArgument, "simplex dimension must be positive");
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> w(m);
  double sum = 0.0;
  do {
    for (auto& x : w) x = unif(rng);
    sum = std::accumulate(w.begin(), w.end(), 0.0);
  } while (sum <= 0.0);
  for (auto& x : w) x /= sum;
  return SimplexWeights(std::move(w));
}

SimplexWeights sample_simplex_dirichlet(std::size_t m, Rng& rng) {
  if (m < 1) throw Error(ErrorCode::InvalidArgument, "simplex dimension must be positive");
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> w(m);
  double sum = 0.0;
  do {
    for (auto& x : w) x = expo(rng);
    sum = std::accumulate(w.begin(), w.end(), 0.0);
  } while (sum <= 0.0);
  for (auto& x : w) x /= sum;
  return SimplexWeights(std::move(w));
}

SimplexWeights project_simplex(std::span<const double> v) {
  if (v.empty()) throw Error(ErrorCode::InvalidArgument, "cannot project an empty vector");
  for (double x : v) {
    if (!std::isfinite(x)) throw Error(ErrorCode::NonFinite, "projection input is not finite");
  }
  std::vector<double> u(v.begin(), v.end());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    cumulative += u[j];
    const double t = (cumulative - 1.0) / static_cast<double>(j + 1);
    if (u[j] - t > 0.0) theta = t;
  }
  std::vector<double> x(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) x[i] = std::max(v[i] - theta, 0.0);
  return SimplexWeights(std::move(x));
}

}  // namespace rjdbase
