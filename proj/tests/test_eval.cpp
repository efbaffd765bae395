#include "rjdbase/error.hpp"
#include "rjdbase/eval.hpp"
#include "rjdbase/rjd.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

using namespace rjdbase;

namespace {

// Plain contingency-table NMI, arithmetic normalizer.
double oracle_nmi(const std::vector<int>& a, const std::vector<int>& b) {
  const double n = static_cast<double>(a.size());
  std::map<int, double> ca, cb;
  std::map<std::pair<int, int>, double> joint;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ca[a[i]]++;
    cb[b[i]]++;
    joint[{a[i], b[i]}]++;
  }
  double mi = 0, ha = 0, hb = 0;
  for (auto& [c, v] : joint) mi += v / n * std::log(v * n / (ca[c.first] * cb[c.second]));
  for (auto& [c, v] : ca) ha -= v / n * std::log(v / n);
  for (auto& [c, v] : cb) hb -= v / n * std::log(v / n);
  return mi / ((ha + hb) / 2);
}

}  // namespace

TEST_CASE("nmi examples") {
  ClusterLabels a({0, 0, 1, 1, 2, 2});
  CHECK(nmi(a, a) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(nmi(a, ClusterLabels({2, 2, 0, 0, 1, 1})) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(nmi(ClusterLabels({0, 0, 1, 1}), ClusterLabels({0, 1, 0, 1}))) < 1e-12);
  CHECK(nmi(ClusterLabels({0, 0, 0}), ClusterLabels({0, 0, 0})) == 1.0);
  CHECK(nmi(ClusterLabels({0, 0, 0, 0}), ClusterLabels({0, 1, 0, 1})) == 0.0);
  CHECK_THROWS_WITH_AS(nmi(a, ClusterLabels({0, 1})), doctest::Contains("LengthMismatch"), Error);
}

TEST_CASE("nmi matches a contingency oracle and is symmetric") {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 200; ++rep) {
    const int n = 5 + static_cast<int>(rng() % 60);
    std::uniform_int_distribution<int> ka(1, 6), kb(2, 6);
    std::uniform_int_distribution<int> la(0, ka(rng) - 1), lb(0, kb(rng) - 1);
    std::vector<int> a(n), b(n);
    for (int i = 0; i < n; ++i) {
      a[i] = la(rng);
      b[i] = lb(rng);
    }
    const double v = nmi(ClusterLabels(a), ClusterLabels(b));
    CHECK(v == nmi(ClusterLabels(b), ClusterLabels(a)));
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    bool single_a = std::all_of(a.begin(), a.end(), [&](int x) { return x == a[0]; });
    if (!single_a) CHECK(std::abs(v - oracle_nmi(a, b)) < 1e-12);
  }
}

TEST_CASE("kmeans on separated groups") {
  std::mt19937_64 rng(12);
  Eigen::MatrixXd x = 0.01 * testing::gaussian(30, 2, rng);
  std::vector<int> truth(30);
  for (int i = 0; i < 30; ++i) {
    truth[i] = i / 10;
    x(i, 0) += 10.0 * (i / 10);
  }
  auto r = kmeans(x, 3);
  CHECK(nmi(r.labels, ClusterLabels(truth)) == doctest::Approx(1.0));
  CHECK(r.wcss == doctest::Approx(wcss(x, r.labels)));
  CHECK(kmeans(x, 3).labels == r.labels);  // deterministic

  auto one = kmeans(x, 1);
  CHECK(one.wcss == doctest::Approx((x.rowwise() - x.colwise().mean()).squaredNorm()));

  Rng g(3);
  auto single = kmeans_single(x, 3, g);
  CHECK(single.iterations >= 1);
  CHECK(r.wcss <= single.wcss + 1e-12);
}

TEST_CASE("landscape with one trial and with identical trials") {
  std::mt19937_64 rng(13);
  auto stack = testing::random_stack(20, 2, rng);
  std::vector<int> truth(20);
  for (int i = 0; i < 20; ++i) truth[i] = i % 2;

  auto one = rjd_base(stack, RjdOptions{1, 2, 0});
  auto s1 = landscape_stats(one, ClusterLabels(truth), 2);
  CHECK(s1.trial_nmi.size() == 1);
  CHECK(s1.std_nmi == 0.0);
  CHECK(s1.selected_nmi == s1.mean_nmi);
  CHECK(s1.selected_above_mean);

  const auto l = stack[0];
  LaplacianStack same({l, l});
  auto r = rjd_base(same, RjdOptions{6, 2, 0});
  auto s = landscape_stats(r, ClusterLabels(truth), 2);
  for (double v : s.trial_nmi) CHECK(std::abs(v - s.trial_nmi[0]) < 1e-12);
  CHECK(s.selected_above_mean);
}
