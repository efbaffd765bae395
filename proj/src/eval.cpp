#include "rjdbase/eval.hpp"

#include "rjdbase/error.hpp"
#include "rjdbase/parallel.hpp"
#include "rjdbase/rjd.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>

namespace rjdbase {

ClusterLabels::ClusterLabels(std::vector<int> assignments, int k) : a_(std::move(assignments)) {
  if (a_.empty()) throw Error(ErrorCode::InvalidArgument, "labels must be non-empty");
  const int max_label = *std::max_element(a_.begin(), a_.end());
  const int min_label = *std::min_element(a_.begin(), a_.end());
  if (min_label < 0) throw Error(ErrorCode::InvalidArgument, "labels must be nonnegative");
  k_ = k < 0 ? max_label + 1 : k;
  if (max_label >= k_) {
    throw Error(ErrorCode::InvalidArgument,
                "label " + std::to_string(max_label) + " out of range for k=" + std::to_string(k_));
  }
}

int ClusterLabels::distinct() const {
  std::vector<char> seen(static_cast<std::size_t>(k_), 0);
  for (int l : a_) seen[static_cast<std::size_t>(l)] = 1;
  return static_cast<int>(std::count(seen.begin(), seen.end(), 1));
}

namespace {

Eigen::MatrixXd plus_plus_init(const Eigen::MatrixXd& x, int k, Rng& rng) {
  const Eigen::Index n = x.rows();
  Eigen::MatrixXd c(k, x.cols());
  std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
  c.row(0) = x.row(pick(rng));
  Eigen::VectorXd d2 = (x.rowwise() - c.row(0)).rowwise().squaredNorm();
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int j = 1; j < k; ++j) {
    const double total = d2.sum();
    Eigen::Index chosen = 0;
    if (total > 0.0) {
      double target = unif(rng) * total;
      chosen = n - 1;
      for (Eigen::Index p = 0; p < n; ++p) {
        target -= d2(p);
        if (target < 0.0 && d2(p) > 0.0) {
          chosen = p;
          break;
        }
      }
      while (d2(chosen) <= 0.0 && chosen > 0) --chosen;
    } else {
      chosen = pick(rng);
    }
    c.row(j) = x.row(chosen);
    d2 = d2.cwiseMin((x.rowwise() - c.row(j)).rowwise().squaredNorm());
  }
  return c;
}

// Squared distances from every row to every centroid (n x k).
Eigen::MatrixXd distances(const Eigen::MatrixXd& x, const Eigen::MatrixXd& c) {
  Eigen::MatrixXd d = -2.0 * x * c.transpose();
  d.colwise() += x.rowwise().squaredNorm();
  d.rowwise() += c.rowwise().squaredNorm().transpose();
  return d.cwiseMax(0.0);
}

}  // namespace

KmeansResult kmeans_single(const Eigen::MatrixXd& x, int k, Rng& rng, int max_iterations) {
  const Eigen::Index n = x.rows();
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be positive");
  if (k > n) {
    throw Error(ErrorCode::KExceedsN,
                "k=" + std::to_string(k) + " exceeds the number of points " + std::to_string(n));
  }
  if (!x.allFinite()) throw Error(ErrorCode::NonFinite, "k-means input contains NaN or Inf");

  Eigen::MatrixXd c = plus_plus_init(x, k, rng);
  std::vector<int> assign(static_cast<std::size_t>(n), -1);
  int iter = 0;
  for (; iter < max_iterations; ++iter) {
    const Eigen::MatrixXd d = distances(x, c);
    bool changed = false;
    for (Eigen::Index p = 0; p < n; ++p) {
      Eigen::Index best = 0;
      d.row(p).minCoeff(&best);
      if (assign[p] != static_cast<int>(best)) {
        assign[p] = static_cast<int>(best);
        changed = true;
      }
    }
    if (!changed && iter > 0) break;

    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, x.cols());
    std::vector<int> counts(static_cast<std::size_t>(k), 0);
    for (Eigen::Index p = 0; p < n; ++p) {
      sums.row(assign[p]) += x.row(p);
      ++counts[assign[p]];
    }
    for (int j = 0; j < k; ++j) {
      if (counts[j] > 0) {
        c.row(j) = sums.row(j) / counts[j];
        continue;
      }
      // Empty cluster: move its centroid onto the worst-fit point.
      Eigen::Index far = 0;
      double worst = -1.0;
      for (Eigen::Index p = 0; p < n; ++p) {
        if (counts[assign[p]] > 1 && d(p, assign[p]) > worst) {
          worst = d(p, assign[p]);
          far = p;
        }
      }
      --counts[assign[far]];
      assign[far] = j;
      counts[j] = 1;
      c.row(j) = x.row(far);
    }
  }

  KmeansResult r;
  r.labels = ClusterLabels(assign, k);
  r.centroids = std::move(c);
  r.wcss = wcss(x, r.labels);
  r.iterations = iter;
  return r;
}

KmeansResult kmeans(const Eigen::MatrixXd& rows, int k, int restarts, std::uint64_t seed) {
  if (restarts < 1) throw Error(ErrorCode::InvalidArgument, "restarts must be positive");
  Rng rng(seed);
  KmeansResult best;
  best.wcss = std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    KmeansResult candidate = kmeans_single(rows, k, rng);
    if (candidate.wcss < best.wcss) best = std::move(candidate);
  }
  return best;
}

double wcss(const Eigen::MatrixXd& rows, const ClusterLabels& labels) {
  if (static_cast<std::size_t>(rows.rows()) != labels.size()) {
    throw Error(ErrorCode::LengthMismatch, "rows and labels differ in length");
  }
  const int k = labels.k();
  Eigen::MatrixXd means = Eigen::MatrixXd::Zero(k, rows.cols());
  std::vector<int> counts(static_cast<std::size_t>(k), 0);
  for (std::size_t p = 0; p < labels.size(); ++p) {
    means.row(labels[p]) += rows.row(static_cast<Eigen::Index>(p));
    ++counts[labels[p]];
  }
  for (int j = 0; j < k; ++j) {
    if (counts[j]) means.row(j) /= counts[j];
  }
  double total = 0.0;
  for (std::size_t p = 0; p < labels.size(); ++p) {
    total += (rows.row(static_cast<Eigen::Index>(p)) - means.row(labels[p])).squaredNorm();
  }
  return total;
}

namespace {

double entropy(const std::map<int, double>& counts, double n) {
  double h = 0.0;
  for (const auto& [label, c] : counts) {
    const double p = c / n;
    h -= p * std::log(p);
  }
  return h;
}

}  // namespace

double nmi(const ClusterLabels& a, const ClusterLabels& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::LengthMismatch, "label vectors differ in length: " +
                                               std::to_string(a.size()) + " vs " +
                                               std::to_string(b.size()));
  }
  const double n = static_cast<double>(a.size());
  std::map<int, double> ca, cb;
  std::map<std::pair<int, int>, double> joint;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ca[a[i]] += 1.0;
    cb[b[i]] += 1.0;
    joint[{a[i], b[i]}] += 1.0;
  }
  if (ca.size() == 1 && cb.size() == 1) return 1.0;

  // Terms are summed in sorted order so that nmi(a, b) == nmi(b, a) exactly.
  std::vector<double> terms;
  terms.reserve(joint.size());
  for (const auto& [cell, nij] : joint) {
    terms.push_back(nij / n * std::log(n * nij / (ca[cell.first] * cb[cell.second])));
  }
  std::sort(terms.begin(), terms.end());
  double mi = 0.0;
  for (double t : terms) mi += t;

  const double ha = entropy(ca, n);
  const double hb = entropy(cb, n);
  const double denom = 0.5 * (std::min(ha, hb) + std::max(ha, hb));
  if (denom <= 0.0) return 0.0;
  return std::clamp(mi / denom, 0.0, 1.0);
}

LandscapeSummary landscape_stats(const RjdResult& result, const ClusterLabels& truth, int k,
                                 std::uint64_t eval_seed, int restarts, int threads) {
  if (result.trials.empty()) throw Error(ErrorCode::InvalidArgument, "no trials to summarize");
  LandscapeSummary s;
  s.trial_nmi.resize(result.trials.size());
  parallel_for(result.trials.size(), threads, [&](std::size_t i) {
    const auto labels = kmeans(result.trials[i].embedding.columns, k, restarts, eval_seed).labels;
    s.trial_nmi[i] = nmi(labels, truth);
  });
  const double count = static_cast<double>(s.trial_nmi.size());
  s.mean_nmi = std::accumulate(s.trial_nmi.begin(), s.trial_nmi.end(), 0.0) / count;
  double var = 0.0;
  for (double v : s.trial_nmi) var += (v - s.mean_nmi) * (v - s.mean_nmi);
  s.std_nmi = std::sqrt(var / count);
  s.selected_nmi = s.trial_nmi[result.selected];
  // Ties count as above the mean; the slack absorbs rounding in the mean.
  s.selected_above_mean = s.selected_nmi >= s.mean_nmi - 1e-12;
  return s;
}

void write_landscape_csv(std::ostream& out, const RjdResult& result,
                         const LandscapeSummary& summary) {
  out << "trial_index,objective,nmi,selected\n" << std::setprecision(17);
  for (std::size_t i = 0; i < result.trials.size(); ++i) {
    out << result.trials[i].trial_index << ',' << result.trials[i].objective << ','
        << summary.trial_nmi[i] << ',' << (i == result.selected ? 1 : 0) << '\n';
  }
}

}  // namespace rjdbase
