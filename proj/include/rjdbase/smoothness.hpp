#pragma once

#include "rjdbase/labels.hpp"
#include "rjdbase/linalg.hpp"
#include "rjdbase/rjd.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <vector>

namespace rjdbase {

/// g(mu) = lambda_1 + ... + lambda_k of L(mu), zero mode excluded.
double base_objective(const LaplacianStack& stack, const SimplexWeights& mu, int k);

/// lambda_1(L(mu)).
double single_directional_objective(const LaplacianStack& stack, const SimplexWeights& mu);

struct ObjectiveGradient {
  Eigen::VectorXd values;
  /// Set when lambda_k and lambda_{k+1} are within 1e-8. The gradient is then
  /// the averaged trace over the whole near-degenerate eigenspace.
  bool spectral_gap_warning = false;
};

/// Component i is trace(X^T L_i X) for X the bottom-k eigenvectors of L(mu).
ObjectiveGradient objective_gradient(const LaplacianStack& stack, const SimplexWeights& mu, int k);

/// [trace(X^T L_1 X), ..., trace(X^T L_m X)]
Eigen::VectorXd smoothness_vector(const LaplacianStack& stack, const Embedding& x);

/// l_p norm of the per-modality smoothness vector; p = +inf gives the
/// worst-case smoothness. Requires X column-orthonormal.
double worst_case_smoothness(const LaplacianStack& stack, const Embedding& x,
                             double p = std::numeric_limits<double>::infinity());

enum class ObjectiveKind { SingleDirectional, Base };

struct PgaConfig {
  int iterations = 30;
  double step_size = 0.5;
  int max_halvings = 20;
  ObjectiveKind objective_kind = ObjectiveKind::Base;
  int k = 6;  // embedding dimension for NMI; also the objective's k for Base
  bool record_trace = true;
  std::uint64_t eval_seed = 20240917;
  int eval_restarts = 10;

  void validate() const;
};

struct PgaRecord {
  int iteration = 0;
  SimplexWeights mu;
  double objective = 0.0;
  std::optional<double> nmi;
};

struct PgaResult {
  SimplexWeights mu_star;
  std::vector<PgaRecord> trace;  // iteration 0 is the uniform start
  Embedding embedding;           // bottom-k embedding at mu_star
  bool aborted = false;          // a non-finite objective stopped the run
};

/// Projected gradient ascent from uniform weights:
/// mu <- project(mu + step * grad g(mu)), halving the step (up to
/// max_halvings times) while the objective would decrease. If no halving
/// helps, mu is kept for that iteration.
PgaResult pga_maximize(const LaplacianStack& stack, const PgaConfig& config,
                       const ClusterLabels* labels = nullptr);

/// CSV with columns iteration,objective,nmi,mu_1..mu_m.
void write_pga_trace(std::ostream& out, const std::vector<PgaRecord>& trace);

}  // namespace rjdbase
