#include "rjdbase/baselines.hpp"

#include "rjdbase/error.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <ostream>

namespace rjdbase::baselines {

Eigen::MatrixXd bottom_eigenvectors(const SymmetricMatrix& l, int k) {
  if (k < 1 || k > l.size() - 1) throw Error(ErrorCode::CountExceedsDim, "k must lie in [1, n-1]");
  return sym_eigh(l, k + 1).vectors.middleCols(1, k);
}

namespace {

Eigen::MatrixXd concatenate(const std::vector<Eigen::MatrixXd>& views) {
  const Eigen::Index n = views.front().rows();
  const Eigen::Index k = views.front().cols();
  Eigen::MatrixXd x(n, k * static_cast<Eigen::Index>(views.size()));
  for (std::size_t i = 0; i < views.size(); ++i) {
    x.middleCols(k * static_cast<Eigen::Index>(i), k) = views[i];
  }
  return x;
}

}  // namespace

Embedding mvsc(const std::vector<AffinityMatrix>& affinities, int k, int iterations) {
  if (affinities.size() < 2) throw Error(ErrorCode::InvalidArgument, "MVSC needs at least two views");
  if (iterations < 0) throw Error(ErrorCode::InvalidArgument, "iteration count must be >= 0");
  const auto m = affinities.size();
  std::vector<Eigen::MatrixXd> x(m);
  for (std::size_t i = 0; i < m; ++i) {
    x[i] = bottom_eigenvectors(normalized_laplacian(affinities[i]).matrix, k);
  }
  for (int j = 1; j <= iterations; ++j) {
    std::vector<Eigen::MatrixXd> next(m);
    for (std::size_t i = 0; i < m; ++i) {
      const Eigen::MatrixXd& w = affinities[i].weights();
      Eigen::MatrixXd s = Eigen::MatrixXd::Zero(w.rows(), w.cols());
      for (std::size_t r = 0; r < m; ++r) {
        if (r != i) s.noalias() += x[r] * (x[r].transpose() * w);
      }
      s = (0.5 * (s + s.transpose())).cwiseMax(0.0);
      s.diagonal().setZero();
      try {
        next[i] = bottom_eigenvectors(normalized_laplacian(AffinityMatrix(std::move(s))).matrix, k);
      } catch (const Error& e) {
        throw Error(e.code(), "MVSC view " + std::to_string(i) + ", iteration " +
                                  std::to_string(j) + ": " + e.detail());
      }
    }
    x = std::move(next);
  }
  return Embedding{concatenate(x)};
}

Embedding coreg_mvsc(const LaplacianStack& stack, int k, double lambda, int iterations,
                     CoregSign sign) {
  const auto m = stack.modalities();
  if (m < 2) throw Error(ErrorCode::InvalidArgument, "CoReg-MVSC needs at least two views");
  if (!(lambda >= 0.0)) throw Error(ErrorCode::InvalidArgument, "lambda must be nonnegative");
  if (iterations < 0) throw Error(ErrorCode::InvalidArgument, "iteration count must be >= 0");
  if (k < 1 || k > stack.nodes() - 1) throw Error(ErrorCode::CountExceedsDim, "k must lie in [1, n-1]");

  std::vector<Eigen::MatrixXd> x(m);
  std::vector<Eigen::VectorXd> trivial(m);
  for (std::size_t i = 0; i < m; ++i) {
    const EigenPairs eig = sym_eigh(stack[i], k + 1);
    trivial[i] = eig.vectors.col(0);
    x[i] = eig.vectors.middleCols(1, k);
  }
  const double coupling = sign == CoregSign::Reward ? -lambda : lambda;
  for (int j = 1; j <= iterations; ++j) {
    std::vector<Eigen::MatrixXd> next(m);
    for (std::size_t i = 0; i < m; ++i) {
      Eigen::MatrixXd l = stack[i].matrix();
      for (std::size_t r = 0; r < m; ++r) {
        if (r != i) l.noalias() += coupling * (x[r] * x[r].transpose());
      }
      // The coupling can push informative directions below the zero mode, so
      // the discarded mode is the one best aligned with this view's zero mode
      // rather than simply the smallest.
      const EigenPairs eig = sym_eigh(SymmetricMatrix(std::move(l)), k + 1);
      Eigen::Index drop = 0;
      (eig.vectors.transpose() * trivial[i]).cwiseAbs().maxCoeff(&drop);
      next[i].resize(stack.nodes(), k);
      for (Eigen::Index c = 0, out = 0; c <= k; ++c) {
        if (c != drop) next[i].col(out++) = eig.vectors.col(c);
      }
    }
    x = std::move(next);
  }
  return Embedding{concatenate(x)};
}

// ---------------------------------------------------------------------------

namespace {

Eigen::MatrixXd squared_distances(const Eigen::MatrixXd& x, const Eigen::MatrixXd& c) {
  Eigen::MatrixXd d = -2.0 * x * c.transpose();
  d.colwise() += x.rowwise().squaredNorm();
  d.rowwise() += c.rowwise().squaredNorm().transpose();
  return d.cwiseMax(0.0);
}

std::vector<int> assign(const Eigen::MatrixXd& x, const Eigen::MatrixXd& c) {
  const Eigen::MatrixXd d = squared_distances(x, c);
  std::vector<int> out(static_cast<std::size_t>(x.rows()));
  for (Eigen::Index p = 0; p < x.rows(); ++p) {
    Eigen::Index best = 0;
    d.row(p).minCoeff(&best);
    out[p] = static_cast<int>(best);
  }
  return out;
}

Eigen::MatrixXd plus_plus(const Eigen::MatrixXd& x, int k, Rng& rng) {
  const Eigen::Index n = x.rows();
  std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Eigen::MatrixXd c(k, x.cols());
  c.row(0) = x.row(pick(rng));
  Eigen::VectorXd d2 = (x.rowwise() - c.row(0)).rowwise().squaredNorm();
  for (int j = 1; j < k; ++j) {
    const double total = d2.sum();
    Eigen::Index chosen = pick(rng);
    if (total > 0.0) {
      double target = unif(rng) * total;
      for (Eigen::Index p = 0; p < n; ++p) {
        if (d2(p) <= 0.0) continue;
        chosen = p;
        target -= d2(p);
        if (target < 0.0) break;
      }
    }
    c.row(j) = x.row(chosen);
    d2 = d2.cwiseMin((x.rowwise() - c.row(j)).rowwise().squaredNorm());
  }
  return c;
}

Eigen::MatrixXd normalize_rows(const Eigen::MatrixXd& x) {
  Eigen::MatrixXd out = x;
  for (Eigen::Index p = 0; p < x.rows(); ++p) {
    const double norm = x.row(p).norm();
    if (!(norm > 0.0)) {
      throw Error(ErrorCode::ZeroNormRow, "row " + std::to_string(p) + " has zero norm");
    }
    out.row(p) /= norm;
  }
  return out;
}

struct CoEm {
  const Eigen::MatrixXd* views[2];
  bool spherical = false;
  MvKmeansOptions options;
  int restarts_used = 0;

  // Centroids of view v under a partition computed in the other view. An
  // empty cluster gets the point farthest from its current centroid.
  Eigen::MatrixXd centers(int v, const std::vector<int>& partition, const Eigen::MatrixXd& previous) {
    const Eigen::MatrixXd& x = *views[v];
    const int k = options.k;
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(k, x.cols());
    std::vector<int> counts(static_cast<std::size_t>(k), 0);
    for (Eigen::Index p = 0; p < x.rows(); ++p) {
      c.row(partition[p]) += x.row(p);
      ++counts[partition[p]];
    }
    for (int j = 0; j < k; ++j) {
      if (counts[j] > 0) {
        c.row(j) /= counts[j];
        continue;
      }
      if (++restarts_used > options.max_empty_restarts) {
        throw Error(ErrorCode::EmptyClusterRestart,
                    "cluster " + std::to_string(j) + " stayed empty after " +
                        std::to_string(options.max_empty_restarts) + " re-seeds");
      }
      const Eigen::MatrixXd d = squared_distances(x, previous);
      Eigen::Index far = 0;
      double worst = -1.0;
      for (Eigen::Index p = 0; p < x.rows(); ++p) {
        if (d(p, partition[p]) > worst) {
          worst = d(p, partition[p]);
          far = p;
        }
      }
      c.row(j) = x.row(far);
    }
    if (spherical) {
      for (int j = 0; j < k; ++j) {
        const double norm = c.row(j).norm();
        if (norm > 0.0) c.row(j) /= norm;
      }
    }
    return c;
  }

  MvKmeansResult run() {
    const int k = options.k;
    const Eigen::Index n = views[0]->rows();
    Rng rng(options.seed);
    MvKmeansResult result;
    result.centroids[1] = plus_plus(*views[1], k, rng);
    result.centroids[0] = plus_plus(*views[0], k, rng);
    if (spherical) {
      for (auto& c : result.centroids) c = c.rowwise().normalized();
    }
    std::array<std::vector<int>, 2> parts{std::vector<int>(static_cast<std::size_t>(n), -1),
                                          assign(*views[1], result.centroids[1])};
    for (int it = 1; it <= options.max_iterations; ++it) {
      const auto previous = parts;
      for (int v = 0; v < 2; ++v) {
        result.centroids[v] = centers(v, parts[1 - v], result.centroids[v]);
        parts[v] = assign(*views[v], result.centroids[v]);
      }
      result.iterations = it;
      if (parts == previous) {
        result.converged = true;
        break;
      }
    }

    // Shared-variance isotropic Gaussian responsibilities per view, averaged.
    Eigen::MatrixXd posterior = Eigen::MatrixXd::Zero(n, k);
    for (int v = 0; v < 2; ++v) {
      const Eigen::MatrixXd d = squared_distances(*views[v], result.centroids[v]);
      double spread = 0.0;
      for (Eigen::Index p = 0; p < n; ++p) spread += d(p, parts[v][p]);
      const double variance =
          std::max(spread / static_cast<double>(n * views[v]->cols()), 1e-300);
      for (Eigen::Index p = 0; p < n; ++p) {
        Eigen::RowVectorXd logits = -d.row(p) / (2.0 * variance);
        logits.array() -= logits.maxCoeff();
        Eigen::RowVectorXd r = logits.array().exp();
        posterior.row(p) += 0.5 * r / r.sum();
      }
    }
    std::vector<int> labels(static_cast<std::size_t>(n));
    for (Eigen::Index p = 0; p < n; ++p) {
      Eigen::Index best = 0;
      posterior.row(p).maxCoeff(&best);
      labels[p] = static_cast<int>(best);
    }
    result.labels = ClusterLabels(std::move(labels), k);
    return result;
  }
};

void check_views(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const MvKmeansOptions& o) {
  if (a.rows() != b.rows()) throw Error(ErrorCode::LengthMismatch, "views differ in sample count");
  if (o.k < 1) throw Error(ErrorCode::InvalidArgument, "k must be positive");
  if (o.k > a.rows()) throw Error(ErrorCode::KExceedsN, "k exceeds the number of samples");
  if (o.max_iterations < 1) throw Error(ErrorCode::InvalidArgument, "max_iterations must be positive");
  if (!a.allFinite() || !b.allFinite()) throw Error(ErrorCode::NonFinite, "view contains NaN or Inf");
}

}  // namespace

MvKmeansResult mv_kmeans(const Eigen::MatrixXd& view1, const Eigen::MatrixXd& view2,
                         const MvKmeansOptions& options) {
  check_views(view1, view2, options);
  CoEm em{{&view1, &view2}, false, options};
  return em.run();
}

MvKmeansResult mv_sph_kmeans(const Eigen::MatrixXd& view1, const Eigen::MatrixXd& view2,
                             const MvKmeansOptions& options) {
  check_views(view1, view2, options);
  const Eigen::MatrixXd a = normalize_rows(view1);
  const Eigen::MatrixXd b = normalize_rows(view2);
  CoEm em{{&a, &b}, true, options};
  return em.run();
}

// ---------------------------------------------------------------------------

double offdiag_mass(const std::vector<Eigen::MatrixXd>& transformed) {
  double total = 0.0;
  for (const auto& a : transformed) {
    total += a.squaredNorm() - a.diagonal().squaredNorm();
  }
  return total;
}

JdResult jacobi_jd(const LaplacianStack& stack, const JdOptions& options) {
  const Eigen::Index n = stack.nodes();
  if (options.max_sweeps < 0) throw Error(ErrorCode::InvalidArgument, "sweep count must be >= 0");
  if (!(options.tol >= 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be >= 0");

  JdResult result;
  result.basis = Eigen::MatrixXd::Identity(n, n);
  if (options.init) {
    const Eigen::MatrixXd& q0 = *options.init;
    if (q0.rows() != n || q0.cols() != n) {
      throw Error(ErrorCode::DimensionMismatch, "initial basis has the wrong shape");
    }
    if ((q0.transpose() * q0 - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-8) {
      throw Error(ErrorCode::NonOrthogonalInit, "initial basis is not orthogonal");
    }
    result.basis = q0;
  }
  std::vector<Eigen::MatrixXd> a;
  a.reserve(stack.modalities());
  for (const auto& l : stack.matrices()) {
    a.push_back(result.basis.transpose() * l.matrix() * result.basis);
  }
  double mass = offdiag_mass(a);
  result.offdiag_history.push_back(mass);

  for (int sweep = 1; sweep <= options.max_sweeps; ++sweep) {
    bool rotated = false;
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        double g11 = 0.0, g12 = 0.0, g22 = 0.0;
        for (const auto& ai : a) {
          const double h1 = ai(p, p) - ai(q, q);
          const double h2 = ai(p, q) + ai(q, p);
          g11 += h1 * h1;
          g12 += h1 * h2;
          g22 += h2 * h2;
        }
        const double ton = g11 - g22;
        const double toff = 2.0 * g12;
        const double theta = 0.5 * std::atan2(toff, ton + std::hypot(ton, toff));
        const double c = std::cos(theta);
        const double s = std::sin(theta);
        if (std::abs(s) < 1e-15) continue;
        rotated = true;
        for (auto& ai : a) {
          // A <- G^T A G with G = [c -s; s c] acting on coordinates (p, q).
          const Eigen::VectorXd cp = ai.col(p);
          ai.col(p) = c * cp + s * ai.col(q);
          ai.col(q) = -s * cp + c * ai.col(q);
          const Eigen::RowVectorXd rp = ai.row(p);
          ai.row(p) = c * rp + s * ai.row(q);
          ai.row(q) = -s * rp + c * ai.row(q);
        }
        const Eigen::VectorXd bp = result.basis.col(p);
        result.basis.col(p) = c * bp + s * result.basis.col(q);
        result.basis.col(q) = -s * bp + c * result.basis.col(q);
      }
    }
    const double next = offdiag_mass(a);
    result.offdiag_history.push_back(next);
    result.sweeps = sweep;
    if (options.on_sweep) options.on_sweep(sweep, result.basis, next);
    const bool stalled = mass - next < options.tol;
    mass = next;
    if (!rotated || stalled) break;
  }
  return result;
}

Embedding order_modes(const Eigen::MatrixXd& q, const LaplacianStack& stack, int k) {
  const Eigen::Index n = q.cols();
  if (k < 1 || k > n - 1) throw Error(ErrorCode::CountExceedsDim, "k must lie in [1, n-1]");
  Eigen::VectorXd score = Eigen::VectorXd::Zero(n);
  for (const auto& l : stack.matrices()) {
    score += (q.array() * (l.matrix() * q).array()).colwise().sum().transpose().matrix();
  }
  score /= static_cast<double>(stack.modalities());
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return score(a) < score(b); });
  Embedding e;
  e.columns.resize(q.rows(), k);
  for (int j = 0; j < k; ++j) e.columns.col(j) = q.col(order[static_cast<std::size_t>(j + 1)]);
  return e;
}

void write_learning_curve(std::ostream& out, const std::vector<RefinementPoint>& curve) {
  out << "iteration,nmi,offdiag_mass\n" << std::setprecision(17);
  for (const auto& p : curve) out << p.iteration << ',' << p.nmi << ',' << p.offdiag << '\n';
}

}  // namespace rjdbase::baselines
