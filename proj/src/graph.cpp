#include "rjdbase/graph.hpp"

#include "rjdbase/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

namespace rjdbase {

AffinityMatrix::AffinityMatrix(Eigen::MatrixXd weights) {
  if (weights.rows() != weights.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "affinity matrix must be square");
  }
  if (!weights.allFinite()) throw Error(ErrorCode::NonFinite, "affinity contains NaN or Inf");
  if ((weights.array() < 0.0).any()) {
    throw Error(ErrorCode::InvalidArgument, "affinity weights must be nonnegative");
  }
  if (weights.diagonal().cwiseAbs().maxCoeff() != 0.0) {
    throw Error(ErrorCode::InvalidArgument, "affinity diagonal must be zero");
  }
  w_ = 0.5 * (weights + weights.transpose());
}

AffinityMatrix rbf_affinity(std::span<const double> x, double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw Error(ErrorCode::NonPositiveSigma, "RBF width must be positive, got " + std::to_string(sigma));
  }
  const auto n = static_cast<Eigen::Index>(x.size());
  const double denom = 2.0 * sigma * sigma;
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index p = 0; p < n; ++p) {
    for (Eigen::Index q = p + 1; q < n; ++q) {
      const double d = x[p] - x[q];
      const double v = std::exp(-(d * d) / denom);
      s(p, q) = v;
      s(q, p) = v;
    }
  }
  return AffinityMatrix(std::move(s));
}

namespace {

Eigen::MatrixXd squared_distances(const FeatureMatrix& z) {
  const Eigen::VectorXd norms = z.rowwise().squaredNorm();
  Eigen::MatrixXd d2 = -2.0 * (z * z.transpose());
  d2.colwise() += norms;
  d2.rowwise() += norms.transpose();
  // Cancellation on near-duplicates can leave small negatives.
  d2 = d2.cwiseMax(0.0);
  d2.diagonal().setZero();
  return d2;
}

}  // namespace

AffinityMatrix self_tuning_affinity(const FeatureMatrix& z, int nn_index) {
  const Eigen::Index n = z.rows();
  if (!z.allFinite()) throw Error(ErrorCode::NonFinite, "feature matrix contains NaN or Inf");
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "need at least two samples");
  if (nn_index < 1 || nn_index > n - 1) {
    throw Error(ErrorCode::InvalidArgument,
                "nn_index must lie in [1, " + std::to_string(n - 1) + "], got " +
                    std::to_string(nn_index));
  }
  const Eigen::MatrixXd d2 = squared_distances(z);
  const double diameter = std::sqrt(d2.maxCoeff());

  Eigen::VectorXd sigma(n);
  std::vector<double> row(static_cast<std::size_t>(n - 1));
  for (Eigen::Index p = 0; p < n; ++p) {
    std::size_t j = 0;
    for (Eigen::Index q = 0; q < n; ++q) {
      if (q != p) row[j++] = d2(p, q);
    }
    std::nth_element(row.begin(), row.begin() + (nn_index - 1), row.end());
    sigma(p) = std::max(std::sqrt(row[static_cast<std::size_t>(nn_index - 1)]), 1e-12 * diameter);
    if (!(sigma(p) > 0.0)) {
      throw Error(ErrorCode::DegenerateBandwidth,
                  "bandwidth of sample " + std::to_string(p) + " is zero (all samples coincide)");
    }
  }

  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index p = 0; p < n; ++p) {
    for (Eigen::Index q = p + 1; q < n; ++q) {
      const double v = std::exp(-d2(p, q) / (sigma(p) * sigma(q)));
      w(p, q) = v;
      w(q, p) = v;
    }
  }
  return AffinityMatrix(std::move(w));
}

GraphLaplacian normalized_laplacian(const AffinityMatrix& w) {
  const Eigen::Index n = w.size();
  const Eigen::VectorXd degrees = w.weights().rowwise().sum();
  std::vector<Eigen::Index> isolated;
  for (Eigen::Index p = 0; p < n; ++p) {
    if (!(degrees(p) > 0.0)) isolated.push_back(p);
  }
  if (!isolated.empty()) {
    std::string list;
    for (std::size_t i = 0; i < isolated.size() && i < 20; ++i) {
      if (i) list += ",";
      list += std::to_string(isolated[i]);
    }
    if (isolated.size() > 20) list += ",...";
    throw Error(ErrorCode::IsolatedNode,
                std::to_string(isolated.size()) + " isolated node(s): " + list);
  }
  const Eigen::VectorXd inv_sqrt = degrees.cwiseSqrt().cwiseInverse();
  Eigen::MatrixXd l = -(inv_sqrt.asDiagonal() * w.weights() * inv_sqrt.asDiagonal());
  l.diagonal().array() += 1.0;
  return GraphLaplacian{SymmetricMatrix(std::move(l)), degrees};
}

int connectivity(const AffinityMatrix& w, double threshold) {
  const Eigen::Index n = w.size();
  std::vector<Eigen::Index> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), Eigen::Index{0});
  auto find = [&](Eigen::Index x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  int components = static_cast<int>(n);
  for (Eigen::Index p = 0; p < n; ++p) {
    for (Eigen::Index q = p + 1; q < n; ++q) {
      if (w(p, q) > threshold) {
        const auto a = find(p);
        const auto b = find(q);
        if (a != b) {
          parent[a] = b;
          --components;
        }
      }
    }
  }
  return components;
}

LaplacianCheck check_laplacian(const SymmetricMatrix& l, double zero_tol) {
  const EigenPairs eig = sym_eigh(l, l.size());
  LaplacianCheck c;
  c.min_eigenvalue = eig.values(0);
  c.max_eigenvalue = eig.values(eig.values.size() - 1);
  c.zero_multiplicity = static_cast<int>((eig.values.array().abs() < zero_tol).count());
  c.psd = c.min_eigenvalue >= -tol::kPsd;
  c.bounded = c.max_eigenvalue <= 2.0 + tol::kPsd;
  c.simple_zero = c.zero_multiplicity == 1;
  return c;
}

}  // namespace rjdbase
