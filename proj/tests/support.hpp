#pragma once

#include "rjdbase/graph.hpp"
#include "rjdbase/linalg.hpp"

#include <Eigen/Dense>

#include <random>
#include <vector>

namespace testing {

inline Eigen::MatrixXd k2() {
  Eigen::MatrixXd l(2, 2);
  l << 1, -1, -1, 1;
  return l;
}

inline rjdbase::AffinityMatrix path3() {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(3, 3);
  w(0, 1) = w(1, 0) = w(1, 2) = w(2, 1) = 1.0;
  return rjdbase::AffinityMatrix(w);
}

inline Eigen::MatrixXd gaussian(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = g(rng);
  return m;
}

inline Eigen::MatrixXd random_orthonormal(Eigen::Index n, Eigen::Index k, std::mt19937_64& rng) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(gaussian(n, k, rng));
  return qr.householderQ() * Eigen::MatrixXd::Identity(n, k);
}

inline Eigen::MatrixXd random_psd(Eigen::Index n, std::mt19937_64& rng) {
  const Eigen::MatrixXd g = gaussian(n, n, rng);
  return g * g.transpose() / static_cast<double>(n);
}

// Dense random graph with weights in (0.05, 1]; always connected.
inline rjdbase::AffinityMatrix random_affinity(Eigen::Index n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index p = 0; p < n; ++p)
    for (Eigen::Index q = p + 1; q < n; ++q) w(p, q) = w(q, p) = u(rng);
  return rjdbase::AffinityMatrix(w);
}

inline rjdbase::LaplacianStack random_stack(Eigen::Index n, int m, std::mt19937_64& rng) {
  std::vector<rjdbase::SymmetricMatrix> ls;
  for (int i = 0; i < m; ++i) ls.push_back(rjdbase::normalized_laplacian(random_affinity(n, rng)).matrix);
  return rjdbase::LaplacianStack(std::move(ls));
}

// Family U diag(0, a_i) U^T sharing the eigenbasis U, with U's first column
// the zero mode. Distinct random spectra keep every combination gap-clear.
inline rjdbase::LaplacianStack commuting_stack(Eigen::Index n, int m, std::mt19937_64& rng,
                                               Eigen::MatrixXd* basis = nullptr) {
  const Eigen::MatrixXd u = random_orthonormal(n, n, rng);
  std::uniform_real_distribution<double> a(0.1, 2.0);
  std::vector<rjdbase::SymmetricMatrix> ls;
  for (int i = 0; i < m; ++i) {
    Eigen::VectorXd d(n);
    d(0) = 0.0;
    for (Eigen::Index j = 1; j < n; ++j) d(j) = a(rng);
    ls.emplace_back(u * d.asDiagonal() * u.transpose());
  }
  if (basis) *basis = u;
  return rjdbase::LaplacianStack(std::move(ls));
}

// Brute-force bottom-k sum of a full Eigen decomposition, zero mode dropped.
inline double oracle_base(const Eigen::MatrixXd& l, int k) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(l);
  return es.eigenvalues().segment(1, k).sum();
}

inline Eigen::MatrixXd oracle_combine(const rjdbase::LaplacianStack& s, const std::vector<double>& mu) {
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(s.nodes(), s.nodes());
  for (std::size_t i = 0; i < mu.size(); ++i) l += mu[i] * s[i].matrix();
  return l;
}

}  // namespace testing
