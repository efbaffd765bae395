#include "rjdbase/error.hpp"
#include "rjdbase/graph.hpp"
#include "support.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace rjdbase;

TEST_CASE("affinity validation") {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(2, 2);
  w(0, 1) = w(1, 0) = -1.0;
  CHECK_THROWS_AS(AffinityMatrix{w}, Error);
  w(0, 1) = w(1, 0) = 1.0;
  w(0, 0) = 0.5;
  CHECK_THROWS_AS(AffinityMatrix{w}, Error);
}

TEST_CASE("rbf_affinity examples") {
  const double sigma = 0.7;
  std::vector<double> same{1.5, 1.5};
  CHECK(rbf_affinity(same, sigma).weights()(0, 1) == 1.0);

  std::vector<double> x{0.0, sigma * std::sqrt(2.0)};
  auto w = rbf_affinity(x, sigma);
  CHECK(w.weights()(0, 1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  CHECK(w.weights()(0, 0) == 0.0);

  std::vector<double> wide{0.0, 3.0, 10.0, -0.0, 7.5};
  auto s = rbf_affinity(wide, 1e6);
  for (int p = 0; p < 5; ++p)
    for (int q = 0; q < 5; ++q)
      if (p != q) {
        CHECK(s.weights()(p, q) >= 1.0 - 1e-10);
        CHECK(s.weights()(p, q) <= 1.0);
      }
  CHECK_THROWS_WITH_AS(rbf_affinity(x, 0.0), doctest::Contains("NonPositiveSigma"), Error);
  CHECK_THROWS_AS(rbf_affinity(x, -1.0), Error);
}

TEST_CASE("self_tuning_affinity two samples") {
  Eigen::MatrixXd z(2, 3);
  z << 0, 0, 0, 1, 2, 2;  // distance 3
  auto w = self_tuning_affinity(z, 1);
  CHECK(w.weights()(0, 1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
}

TEST_CASE("self_tuning_affinity identical rows are degenerate") {
  Eigen::MatrixXd z = Eigen::MatrixXd::Constant(4, 2, 3.0);
  CHECK_THROWS_WITH_AS(self_tuning_affinity(z, 1), doctest::Contains("DegenerateBandwidth"), Error);
}

TEST_CASE("self_tuning_affinity against a brute-force pairwise oracle") {
  const std::vector<double> pts{0, 1, 2, 3, 10};
  const int nn = 2;
  Eigen::MatrixXd z(5, 1);
  for (int i = 0; i < 5; ++i) z(i, 0) = pts[i];
  auto w = self_tuning_affinity(z, nn);

  std::vector<double> sigma(5);
  for (int p = 0; p < 5; ++p) {
    std::vector<double> d;
    for (int q = 0; q < 5; ++q)
      if (q != p) d.push_back(std::abs(pts[p] - pts[q]));
    std::sort(d.begin(), d.end());
    sigma[p] = d[nn - 1];
  }
  // Hand values: sigma = {2, 1, 1, 2, 8}.
  CHECK(sigma == std::vector<double>{2, 1, 1, 2, 8});
  for (int p = 0; p < 5; ++p)
    for (int q = 0; q < 5; ++q) {
      const double expected =
          p == q ? 0.0 : std::exp(-(pts[p] - pts[q]) * (pts[p] - pts[q]) / (sigma[p] * sigma[q]));
      CHECK(w.weights()(p, q) == doctest::Approx(expected).epsilon(1e-13));
    }
}

TEST_CASE("self_tuning_affinity with near-duplicate rows is clamped, not rejected") {
  Eigen::MatrixXd z(4, 1);
  z << 0.0, 0.0, 5.0, 6.0;
  auto w = self_tuning_affinity(z, 1);
  CHECK(w.weights().allFinite());
  CHECK(w.weights()(0, 1) == doctest::Approx(1.0));
}

TEST_CASE("normalized_laplacian examples") {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(2, 2);
  w(0, 1) = w(1, 0) = 1.0;
  CHECK(normalized_laplacian(AffinityMatrix(w)).matrix.matrix().isApprox(testing::k2(), 1e-15));
  w(0, 1) = w(1, 0) = 37.5;
  CHECK(normalized_laplacian(AffinityMatrix(w)).matrix.matrix().isApprox(testing::k2(), 1e-15));

  auto l = normalized_laplacian(testing::path3());
  auto e = sym_eigh(l.matrix, 3);
  CHECK(std::abs(e.values(0)) < 1e-12);
  CHECK(e.values(1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(e.values(2) == doctest::Approx(2.0).epsilon(1e-12));

  Eigen::MatrixXd iso = Eigen::MatrixXd::Zero(3, 3);
  iso(0, 1) = iso(1, 0) = 1.0;
  CHECK_THROWS_WITH_AS(normalized_laplacian(AffinityMatrix(iso)), doctest::Contains("2"), Error);
  CHECK_THROWS_WITH_AS(normalized_laplacian(AffinityMatrix(iso)), doctest::Contains("IsolatedNode"), Error);
}

TEST_CASE("laplacian invariants on random graphs") {
  std::mt19937_64 rng(17);
  for (int rep = 0; rep < 10; ++rep) {
    auto w = testing::random_affinity(15, rng);
    auto l = normalized_laplacian(w);
    auto check = check_laplacian(l.matrix);
    CHECK(check.ok());
    CHECK(check.min_eigenvalue >= -tol::kPsd);
    CHECK(check.max_eigenvalue <= 2.0 + tol::kPsd);
    CHECK(check.zero_multiplicity == 1);

    // Zero mode is D^{1/2} 1.
    Eigen::VectorXd v = l.degrees.cwiseSqrt();
    CHECK((l.matrix.matrix() * v).norm() < 1e-12 * v.norm());

    for (int t = 0; t < 100; ++t) {
      const Eigen::VectorXd x = testing::gaussian(15, 1, rng);
      CHECK(x.dot(l.matrix.matrix() * x) >= -1e-10);
    }
  }
}

TEST_CASE("connectivity") {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(2, 2);
  w(0, 1) = w(1, 0) = 1.0;
  CHECK(connectivity(AffinityMatrix(w), 0.0) == 1);
  CHECK(connectivity(AffinityMatrix(Eigen::MatrixXd::Zero(3, 3)), 0.0) == 3);

  Eigen::MatrixXd blocks = Eigen::MatrixXd::Zero(6, 6);
  for (int b = 0; b < 2; ++b)
    for (int p = 0; p < 3; ++p)
      for (int q = 0; q < 3; ++q)
        if (p != q) blocks(3 * b + p, 3 * b + q) = 1.0;
  CHECK(connectivity(AffinityMatrix(blocks), 0.0) == 2);
  auto check = check_laplacian(normalized_laplacian(AffinityMatrix(blocks)).matrix);
  CHECK(check.zero_multiplicity == 2);
  CHECK_FALSE(check.simple_zero);
}
