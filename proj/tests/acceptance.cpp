// Acceptance run: one PASS/FAIL line per criterion. `--only N` runs a single one.
#include "rjdbase/baselines.hpp"
#include "rjdbase/eval.hpp"
#include "rjdbase/experiment.hpp"
#include "rjdbase/graph.hpp"
#include "rjdbase/rjd.hpp"
#include "rjdbase/sbm.hpp"
#include "rjdbase/smoothness.hpp"
#include "support.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

using namespace rjdbase;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool report(int id, bool ok, const std::string& detail) {
  std::printf("AC%d %s: %s\n", id, ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  return ok;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

bool laplacian_ok(const SymmetricMatrix& l, double& worst_min, double& worst_max) {
  const auto c = check_laplacian(l);
  worst_min = std::min(worst_min, c.min_eigenvalue);
  worst_max = std::max(worst_max, c.max_eigenvalue);
  return c.min_eigenvalue >= -1e-9 && c.max_eigenvalue <= 2.0 + 1e-9 && c.zero_multiplicity == 1;
}

bool ac1() {
  const auto t0 = Clock::now();
  bool ok = true;
  double lo = 1, hi = 0;
  auto data = experiment::synthesize(sbm::SbmConfig::standard_preset(0));
  for (const auto& l : data.stack.matrices()) ok &= laplacian_ok(l, lo, hi);
  const double preset_seconds = seconds_since(t0);

  // Ingested: the same dataset written to disk and read back.
  const auto dir = std::filesystem::temp_directory_path() / "rjdbase_acceptance_ac1";
  std::filesystem::remove_all(dir);
  experiment::save_dataset(data, dir);
  auto loaded = experiment::load_dataset(dir);
  for (const auto& l : loaded.stack.matrices()) ok &= laplacian_ok(l, lo, hi);

  // Ingested from features through the self-tuning kernel.
  std::mt19937_64 rng(1);
  std::vector<FeatureMatrix> feats;
  for (int v = 0; v < 2; ++v) feats.emplace_back(testing::gaussian(120, 5, rng));
  for (const auto& f : feats) ok &= laplacian_ok(normalized_laplacian(self_tuning_affinity(f, 7)).matrix, lo, hi);

  ok &= preset_seconds < 10.0;
  return report(1, ok,
                fmt("lambda_min %.3g, lambda_max %.12f, preset checks %.2f s (< 10 s)", lo, hi, preset_seconds));
}

bool ac2() {
  std::mt19937_64 rng(2);
  double worst = -1e300;
  for (int rep = 0; rep < 50; ++rep) {
    const Eigen::MatrixXd a = testing::random_psd(6, rng);
    const auto eig = sym_eigh(SymmetricMatrix(a), 6);
    for (int k = 1; k <= 3; ++k) {
      const Eigen::MatrixXd v = eig.vectors.leftCols(k);
      const double best = (v.transpose() * a * v).trace();
      for (int s = 0; s < 10000; ++s) {
        const Eigen::MatrixXd x = testing::random_orthonormal(6, k, rng);
        worst = std::max(worst, best - (x.transpose() * a * x).trace());
      }
    }
  }
  return report(2, worst <= 1e-9, fmt("largest margin by which a sample beat the eigenvector trace: %.3g (<= 1e-9)",
                                       std::max(worst, 0.0)));
}

bool ac3() {
  std::mt19937_64 rng(3);
  Rng r(3);
  const double h = 1e-6;
  const int k = 2;
  double worst = 0;
  int points = 0;
  for (int s = 0; s < 3; ++s) {
    auto stack = testing::random_stack(8, 3, rng);
    int here = 0;
    while (here < 20) {
      auto mu = sample_simplex(3, r);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
          testing::oracle_combine(stack, {mu[0], mu[1], mu[2]}));
      const auto& ev = es.eigenvalues();
      if (ev(k + 1) - ev(k) < 1e-3 || ev(1) - ev(0) < 1e-3) continue;
      const auto g = objective_gradient(stack, mu, k);
      for (int i = 0; i < 3; ++i) {
        std::vector<double> up{mu[0], mu[1], mu[2]}, dn = up;
        up[i] += h;
        dn[i] -= h;
        const double fd = (testing::oracle_base(testing::oracle_combine(stack, up), k) -
                           testing::oracle_base(testing::oracle_combine(stack, dn), k)) /
                          (2 * h);
        worst = std::max(worst, std::abs(fd - g.values(i)) / std::abs(g.values(i)));
      }
      ++here;
      ++points;
    }
  }
  return report(3, worst < 1e-5, fmt("%d gap-clear points, worst relative error %.3g (< 1e-5)", points, worst));
}

double g_oracle(const LaplacianStack& s, double t, int k) {
  return testing::oracle_base(testing::oracle_combine(s, {1 - t, t}), k);
}

bool ac4() {
  std::mt19937_64 rng(4);
  Rng r(4);
  const int k = 2;
  double worst_gap = 0, worst_duality = -1e300;
  for (int rep = 0; rep < 5; ++rep) {
    auto stack = testing::random_stack(10, 2, rng);
    double best = -1, t_star = 0;
    for (int i = 0; i <= 1000; ++i) {
      const double t = i / 1000.0;
      const double g = g_oracle(stack, t, k);
      if (g > best) {
        best = g;
        t_star = t;
      }
    }
    // The grid point only brackets an interior maximizer; the optimality
    // condition s_1(X(t)) == s_2(X(t)) is located by bisection inside the cell.
    if (t_star > 0 && t_star < 1) {
      double a = std::max(0.0, t_star - 1e-3), b = std::min(1.0, t_star + 1e-3);
      auto slope = [&](double t) {
        const auto x = bottom_k(stack, SimplexWeights({1 - t, t}), k).embedding;
        const Eigen::VectorXd sv = smoothness_vector(stack, x);
        return sv(1) - sv(0);
      };
      for (int it = 0; it < 60; ++it) {
        const double m = 0.5 * (a + b);
        (slope(m) > 0 ? a : b) = m;
      }
      t_star = 0.5 * (a + b);
      best = g_oracle(stack, t_star, k);
    }
    const auto x_star = bottom_k(stack, SimplexWeights({1 - t_star, t_star}), k).embedding;
    worst_gap = std::max(worst_gap, std::abs(worst_case_smoothness(stack, x_star) - best));

    for (int p = 0; p < 1000; ++p) {
      auto mu = sample_simplex(2, r);
      auto nu = sample_simplex(2, r);
      const auto x = bottom_k(stack, nu, k).embedding;
      worst_duality = std::max(worst_duality, base_objective(stack, mu, k) - worst_case_smoothness(stack, x));
    }
  }
  return report(4, worst_gap < 1e-6 && worst_duality <= 1e-9,
                fmt("|s_G(X*) - g(mu*)| max %.3g (< 1e-6); max g(mu) - s_G(X) %.3g (<= 1e-9)", worst_gap,
                    worst_duality));
}

bool ac5() {
  std::mt19937_64 rng(5);
  double worst = 0;
  for (int rep = 0; rep < 10; ++rep) {
    auto stack = testing::commuting_stack(8, 3, rng);
    const auto res = rjd_base(stack, RjdOptions{20, 3, static_cast<std::uint64_t>(rep)});
    const auto& x = res.selected_trial().embedding.columns;
    for (const auto& l : stack.matrices())
      for (Eigen::Index j = 0; j < x.cols(); ++j) {
        const Eigen::VectorXd v = x.col(j);
        worst = std::max(worst, (l.matrix() * v - v.dot(l.matrix() * v) * v).norm());
      }
  }
  return report(5, worst < 1e-8, fmt("10 commuting stacks, worst eigen-residual %.3g (< 1e-8)", worst));
}

bool ac6() {
  int in_band = 0, above = 0;
  double slowest = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto t0 = Clock::now();
    auto data = sbm::generate(sbm::SbmConfig::standard_preset(seed));
    const auto res = rjd_base(data.laplacians, RjdOptions{200, 6, seed});
    const auto land = landscape_stats(res, data.labels, 6);
    const double secs = seconds_since(t0);
    slowest = std::max(slowest, secs);
    const bool band = land.mean_nmi >= 0.65 && land.mean_nmi <= 0.77;
    in_band += band;
    above += land.selected_above_mean;
    std::printf("  seed %2llu: mean trial NMI %.4f (std %.4f)%s, selected %.4f%s, %.1f s\n",
                static_cast<unsigned long long>(seed), land.mean_nmi, land.std_nmi, band ? "" : " [out of band]",
                land.selected_nmi, land.selected_above_mean ? " >= mean" : " < mean", secs);
  }
  const bool ok = in_band >= 16 && above >= 12 && slowest <= 60.0;
  return report(6, ok,
                fmt("(a) mean trial NMI in [0.65, 0.77] for %d/20 (need >= 16); (b) selected >= mean for %d/20 "
                    "(need >= 12); slowest seed %.1f s (<= 60 s)",
                    in_band, above, slowest));
}

bool ac7() {
  std::vector<double> deltas;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto data = experiment::synthesize(sbm::SbmConfig::standard_preset(seed));
    experiment::MethodConfig cfg;
    cfg.method = experiment::Method::JdRefine;
    cfg.seed = seed;
    const auto out = experiment::run_method(data, cfg);
    const double refined = out.report["nmi"];
    const double init = out.report["details"]["init_nmi"];
    deltas.push_back(refined - init);
    std::printf("  seed %llu: RJD-BASE NMI %.4f -> refined %.4f (%d sweeps)\n",
                static_cast<unsigned long long>(seed), init, refined,
                out.report["details"]["sweeps_run"].get<int>());
  }
  std::sort(deltas.begin(), deltas.end());
  const double median = 0.5 * (deltas[4] + deltas[5]);
  return report(7, median <= 0.02, fmt("median NMI change after refinement %+.4f (<= +0.02)", median));
}

bool ac8() {
  int ok_count = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto data = sbm::generate(sbm::SbmConfig::standard_preset(seed));
    PgaConfig cfg;
    cfg.k = 6;
    cfg.iterations = 30;
    cfg.record_trace = false;
    cfg.objective_kind = ObjectiveKind::Base;
    const auto base = pga_maximize(data.laplacians, cfg);
    cfg.objective_kind = ObjectiveKind::SingleDirectional;
    const auto single = pga_maximize(data.laplacians, cfg);
    const double nb = nmi(kmeans(base.embedding.columns, 6).labels, data.labels);
    const double ns = nmi(kmeans(single.embedding.columns, 6).labels, data.labels);
    ok_count += nb >= ns - 0.03;
    std::printf("  seed %2llu: base %.4f, single %.4f\n", static_cast<unsigned long long>(seed), nb, ns);
  }
  return report(8, ok_count >= 12,
                fmt("base >= single - 0.03 in %d/20 seeds (need >= 12)", ok_count));
}

bool ac9() {
  const ClusterLabels a({0, 0, 1, 1, 2, 2});
  const ClusterLabels perm({1, 1, 2, 2, 0, 0});
  const ClusterLabels p({0, 0, 1, 1}), q({0, 1, 0, 1});
  const double same = nmi(a, a), permuted = nmi(a, perm), indep = nmi(p, q);
  bool symmetric = true;
  std::mt19937_64 rng(9);
  for (int rep = 0; rep < 1000; ++rep) {
    std::vector<int> x(40), y(40);
    for (int i = 0; i < 40; ++i) {
      x[i] = static_cast<int>(rng() % 5);
      y[i] = static_cast<int>(rng() % 3);
    }
    symmetric &= nmi(ClusterLabels(x), ClusterLabels(y)) == nmi(ClusterLabels(y), ClusterLabels(x));
  }
  const bool ok = std::abs(same - 1) < 1e-12 && std::abs(permuted - 1) < 1e-12 && std::abs(indep) < 1e-12 &&
                  symmetric;
  return report(9, ok, fmt("identical %.15f, permuted %.15f, independent %.3g, symmetry exact: %s", same, permuted,
                           indep, symmetric ? "yes" : "no"));
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<bool()>> criteria{ac1, ac2, ac3, ac4, ac5, ac6, ac7, ac8, ac9};
  int only = 0;
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) only = std::atoi(argv[++i]);
  if (only < 0 || only > static_cast<int>(criteria.size())) {
    std::fprintf(stderr, "--only expects 1..%zu\n", criteria.size());
    return 2;
  }
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only && static_cast<int>(i) + 1 != only) continue;
    try {
      failed += !criteria[i]();
    } catch (const std::exception& e) {
      report(static_cast<int>(i) + 1, false, std::string("threw: ") + e.what());
      ++failed;
    }
  }
  return failed == 0 ? 0 : 1;
}
