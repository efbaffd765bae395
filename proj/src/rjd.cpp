#include "rjdbase/rjd.hpp"

#include "rjdbase/error.hpp"
#include "rjdbase/parallel.hpp"

#include <algorithm>
#include <iomanip>
#include <limits>
#include <ostream>

namespace rjdbase {

SpectralSlice bottom_k(const SymmetricMatrix& l, int k) {
  const Eigen::Index n = l.size();
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be positive");
  if (k > n - 1) {
    throw Error(ErrorCode::CountExceedsDim,
                "k=" + std::to_string(k) + " needs at least k+1 nodes, have " + std::to_string(n));
  }
  const Eigen::Index count = std::min<Eigen::Index>(k + 2, n);
  const EigenPairs eig = sym_eigh(l, count);
  if (eig.values(1) < tol::kZeroMode) {
    throw Error(ErrorCode::ZeroModeAmbiguity,
                "second eigenvalue " + std::to_string(eig.values(1)) +
                    " is numerically zero; the combined graph is disconnected");
  }
  SpectralSlice s;
  s.eigenvalues = eig.values.segment(1, k);
  s.embedding.columns = eig.vectors.middleCols(1, k);
  s.gap_above = count > k + 1 ? eig.values(k + 1) - eig.values(k)
                              : std::numeric_limits<double>::infinity();
  return s;
}

SpectralSlice bottom_k(const LaplacianStack& stack, const SimplexWeights& mu, int k) {
  return bottom_k(combine(stack, mu), k);
}

Trial run_trial(const LaplacianStack& stack, int k, const SimplexWeights& mu, int trial_index,
                std::uint64_t seed_offset) {
  SpectralSlice s = bottom_k(stack, mu, k);
  Trial t{mu, std::move(s.eigenvalues), std::move(s.embedding), 0.0, trial_index, seed_offset,
          s.gap_above < tol::kSpectralGap};
  t.objective = t.eigenvalues.sum();
  return t;
}

SimplexWeights trial_weights(std::size_t m, std::uint64_t seed, int trial_index,
                             WeightSampler sampler) {
  Rng rng(seed + static_cast<std::uint64_t>(trial_index));
  return sampler == WeightSampler::FlatDirichlet ? sample_simplex_dirichlet(m, rng)
                                                 : sample_simplex(m, rng);
}

std::size_t select_trial(const std::vector<Trial>& trials) {
  if (trials.empty()) throw Error(ErrorCode::AllTrialsFailed, "no trials to select from");
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& t : trials) best = std::max(best, t.objective);
  std::size_t chosen = 0;
  int chosen_index = std::numeric_limits<int>::max();
  for (std::size_t i = 0; i < trials.size(); ++i) {
    if (trials[i].objective >= best - 1e-12 && trials[i].trial_index < chosen_index) {
      chosen = i;
      chosen_index = trials[i].trial_index;
    }
  }
  return chosen;
}

RjdResult rjd_base(const LaplacianStack& stack, const RjdOptions& options) {
  if (options.trials < 1) throw Error(ErrorCode::InvalidArgument, "T must be at least 1");
  const auto count = static_cast<std::size_t>(options.trials);
  std::vector<std::optional<Trial>> slots(count);
  std::vector<std::string> errors(count);

  parallel_for(count, options.threads, [&](std::size_t i) {
    const int index = static_cast<int>(i);
    try {
      const auto mu = trial_weights(stack.modalities(), options.seed, index, options.sampler);
      slots[i] = run_trial(stack, options.k, mu, index, options.seed + i);
    } catch (const Error& e) {
      // Configuration errors are the same for every trial; do not bury them.
      if (e.code() == ErrorCode::CountExceedsDim || e.code() == ErrorCode::InvalidArgument ||
          e.code() == ErrorCode::DimensionMismatch) {
        throw;
      }
      errors[i] = e.what();
    }
  });

  RjdResult result;
  for (std::size_t i = 0; i < count; ++i) {
    if (slots[i]) {
      result.trials.push_back(std::move(*slots[i]));
    } else {
      result.failures.push_back({static_cast<int>(i), errors[i]});
    }
  }
  if (result.trials.empty()) {
    throw Error(ErrorCode::AllTrialsFailed,
                "all " + std::to_string(count) + " trials failed; first: " + errors.front());
  }
  result.selected = select_trial(result.trials);
  return result;
}

void write_trial_ledger(std::ostream& out, const std::vector<Trial>& trials) {
  if (trials.empty()) return;
  const auto m = trials.front().mu.size();
  const auto k = trials.front().eigenvalues.size();
  out << "trial_index";
  for (std::size_t i = 1; i <= m; ++i) out << ",mu_" << i;
  out << ",objective";
  for (Eigen::Index j = 1; j <= k; ++j) out << ",lambda_" << j;
  out << '\n' << std::setprecision(17);
  for (const auto& t : trials) {
    out << t.trial_index;
    for (double w : t.mu.values()) out << ',' << w;
    out << ',' << t.objective;
    for (Eigen::Index j = 0; j < k; ++j) out << ',' << t.eigenvalues(j);
    out << '\n';
  }
}

}  // namespace rjdbase
