#include "rjdbase/smoothness.hpp"

#include "rjdbase/error.hpp"
#include "rjdbase/eval.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

namespace rjdbase {

double base_objective(const LaplacianStack& stack, const SimplexWeights& mu, int k) {
  return bottom_k(stack, mu, k).eigenvalues.sum();
}

double single_directional_objective(const LaplacianStack& stack, const SimplexWeights& mu) {
  return base_objective(stack, mu, 1);
}

Eigen::VectorXd smoothness_vector(const LaplacianStack& stack, const Embedding& x) {
  if (x.n() != stack.nodes()) {
    throw Error(ErrorCode::DimensionMismatch, "embedding rows do not match stack size");
  }
  Eigen::VectorXd s(static_cast<Eigen::Index>(stack.modalities()));
  for (std::size_t i = 0; i < stack.modalities(); ++i) {
    s(static_cast<Eigen::Index>(i)) =
        (x.columns.transpose() * stack[i].matrix() * x.columns).trace();
  }
  return s;
}

double worst_case_smoothness(const LaplacianStack& stack, const Embedding& x, double p) {
  if (!(p > 1.0)) throw Error(ErrorCode::InvalidArgument, "p must exceed 1");
  if (orthonormality_defect(x.columns) > tol::kOrthonormality * std::max<double>(1.0, x.k())) {
    throw Error(ErrorCode::NonOrthonormalEmbedding, "embedding columns are not orthonormal");
  }
  const Eigen::VectorXd s = smoothness_vector(stack, x);
  if (std::isinf(p)) return s.cwiseAbs().maxCoeff();
  return std::pow(s.cwiseAbs().array().pow(p).sum(), 1.0 / p);
}

ObjectiveGradient objective_gradient(const LaplacianStack& stack, const SimplexWeights& mu,
                                     int k) {
  const SymmetricMatrix l = combine(stack, mu);
  const Eigen::Index n = l.size();
  if (k < 1 || k > n - 1) {
    throw Error(ErrorCode::CountExceedsDim, "k must lie in [1, n-1]");
  }
  Eigen::Index count = std::min<Eigen::Index>(k + 2, n);
  EigenPairs eig = sym_eigh(l, count);
  if (eig.values(1) < tol::kZeroMode) {
    throw Error(ErrorCode::ZeroModeAmbiguity, "combined graph is disconnected");
  }

  // Indices are into the full spectrum; lambda_0 is the zero mode.
  Eigen::Index first = k;
  Eigen::Index last = k;
  while (first > 1 && eig.values(k) - eig.values(first - 1) < tol::kGradientGap) --first;
  for (;;) {
    while (last + 1 < count && eig.values(last + 1) - eig.values(k) < tol::kGradientGap) ++last;
    if (last + 1 < count || count == n) break;
    count = std::min<Eigen::Index>(2 * count, n);
    eig = sym_eigh(l, count);
  }

  ObjectiveGradient g;
  g.spectral_gap_warning = last > k;
  g.values.resize(static_cast<Eigen::Index>(stack.modalities()));
  const double share =
      static_cast<double>(k - first + 1) / static_cast<double>(last - first + 1);
  for (std::size_t i = 0; i < stack.modalities(); ++i) {
    const Eigen::MatrixXd& li = stack[i].matrix();
    double below = 0.0;
    for (Eigen::Index j = 1; j < first; ++j) below += eig.vectors.col(j).dot(li * eig.vectors.col(j));
    double cluster = 0.0;
    for (Eigen::Index j = first; j <= last; ++j) {
      cluster += eig.vectors.col(j).dot(li * eig.vectors.col(j));
    }
    g.values(static_cast<Eigen::Index>(i)) = below + share * cluster;
  }
  return g;
}

void PgaConfig::validate() const {
  if (iterations < 1) throw Error(ErrorCode::InvalidArgument, "iterations must be at least 1");
  if (!(step_size > 0.0) || !std::isfinite(step_size)) {
    throw Error(ErrorCode::InvalidArgument, "step size must be positive");
  }
  if (max_halvings < 0) throw Error(ErrorCode::InvalidArgument, "max_halvings must be >= 0");
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be positive");
  if (eval_restarts < 1) throw Error(ErrorCode::InvalidArgument, "restarts must be positive");
}

namespace {

std::vector<double> ascent_point(const SimplexWeights& mu, const Eigen::VectorXd& grad,
                                 double step) {
  std::vector<double> v(mu.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = mu[i] + step * grad(static_cast<Eigen::Index>(i));
  return v;
}

}  // namespace

PgaResult pga_maximize(const LaplacianStack& stack, const PgaConfig& config,
                       const ClusterLabels* labels) {
  config.validate();
  const int objective_k = config.objective_kind == ObjectiveKind::Base ? config.k : 1;
  auto objective = [&](const SimplexWeights& mu) { return base_objective(stack, mu, objective_k); };

  PgaResult result{SimplexWeights::uniform(stack.modalities()), {}, {}, false};
  SimplexWeights mu = result.mu_star;
  double value = objective(mu);

  auto record = [&](int iteration) {
    if (!config.record_trace) return;
    std::optional<double> score;
    if (labels) {
      const auto x = bottom_k(stack, mu, config.k).embedding;
      score = nmi(kmeans(x.columns, config.k, config.eval_restarts, config.eval_seed).labels,
                  *labels);
    }
    result.trace.push_back(PgaRecord{iteration, mu, value, score});
  };

  if (!std::isfinite(value)) {
    result.aborted = true;
    return result;
  }
  record(0);

  for (int it = 1; it <= config.iterations; ++it) {
    const Eigen::VectorXd grad = objective_gradient(stack, mu, objective_k).values;
    double step = config.step_size;
    for (int h = 0; h <= config.max_halvings; ++h, step *= 0.5) {
      SimplexWeights candidate = project_simplex(ascent_point(mu, grad, step));
      const double cv = objective(candidate);
      if (!std::isfinite(cv)) {
        result.aborted = true;
        result.mu_star = mu;
        result.embedding = bottom_k(stack, mu, config.k).embedding;
        return result;
      }
      if (cv >= value) {
        mu = std::move(candidate);
        value = cv;
        break;
      }
    }
    record(it);
  }

  result.mu_star = mu;
  result.embedding = bottom_k(stack, mu, config.k).embedding;
  return result;
}

void write_pga_trace(std::ostream& out, const std::vector<PgaRecord>& trace) {
  const std::size_t m = trace.empty() ? 0 : trace.front().mu.size();
  out << "iteration,objective,nmi";
  for (std::size_t i = 1; i <= m; ++i) out << ",mu_" << i;
  out << '\n' << std::setprecision(17);
  for (const auto& r : trace) {
    out << r.iteration << ',' << r.objective << ',';
    if (r.nmi) out << *r.nmi;
    for (double w : r.mu.values()) out << ',' << w;
    out << '\n';
  }
}

}  // namespace rjdbase
