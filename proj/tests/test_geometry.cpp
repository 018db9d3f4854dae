#include <doctest.h>

#include <random>

#include "fw/geometry.hpp"

using namespace fw;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<int>(xs.size()));
  int i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

Vector random_gaussian(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector g(d);
  for (int i = 0; i < d; ++i) g[i] = gauss(rng);
  return g;
}

}  // namespace

TEST_CASE("l2 lmo points against the gradient at full radius") {
  const Vector g = vec({3.0, -4.0});
  const Vector v = lmo_l2(g, 2.0);
  CHECK(v[0] == doctest::Approx(-1.2).epsilon(1e-12));
  CHECK(v[1] == doctest::Approx(1.6).epsilon(1e-12));
  CHECK(v.norm() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(lmo_l2(Vector::Zero(3), 1.0).isZero());
}

TEST_CASE("l1 lmo picks the largest-magnitude coordinate, ties to lowest index") {
  const Vector v = lmo_l1(vec({1.0, -5.0, 3.0}), 2.0);
  CHECK(v[0] == 0.0);
  CHECK(v[1] == 2.0);
  CHECK(v[2] == 0.0);

  // exact tie between |g_0| and |g_2|
  const Vector t = lmo_l1(vec({4.0, 1.0, -4.0}), 1.0);
  CHECK(t[0] == -1.0);
  CHECK(t[1] == 0.0);
  CHECK(t[2] == 0.0);
  CHECK(lmo_l1(Vector::Zero(2), 1.0).isZero());
}

TEST_CASE("n-support lmo: scaled negative gradient on the top-n support") {
  // g = (3, 4, 0, -12), n = 2 -> support {1, 3}, -R g_S / ||g_S||
  const Vector v = lmo_nsupport(vec({3.0, 4.0, 0.0, -12.0}), 4.0, 2);
  const double norm = std::sqrt(16.0 + 144.0);
  CHECK(v[0] == 0.0);
  CHECK(v[1] == doctest::Approx(-4.0 * 4.0 / norm).epsilon(1e-12));
  CHECK(v[2] == 0.0);
  CHECK(v[3] == doctest::Approx(4.0 * 12.0 / norm).epsilon(1e-12));
  CHECK(v.norm() == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("n-support lmo with n = dim matches the l2 lmo") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 50; ++t) {
    const Vector g = random_gaussian(6, rng);
    const Vector a = lmo_nsupport(g, 1.5, 6);
    const Vector b = lmo_l2(g, 1.5);
    CHECK((a - b).lpNorm<Eigen::Infinity>() < 1e-12);
  }
}

TEST_CASE("n-support norm: hand-computed values") {
  // fully concentrated vector: equals the l2 norm when nnz <= n
  CHECK(nsupport_norm(vec({3.0, 0.0, 0.0}), 2) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(nsupport_norm(vec({3.0, 4.0}), 2) == doctest::Approx(5.0).epsilon(1e-12));
  // spread vector with n = 1: degenerates to the l1 norm
  CHECK(nsupport_norm(vec({1.0, 1.0, 1.0}), 1) == doctest::Approx(3.0).epsilon(1e-12));
  // n >= nnz: l2 norm again
  CHECK(nsupport_norm(vec({1.0, 1.0, 1.0}), 3) ==
        doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
  CHECK(nsupport_norm(Vector::Zero(4), 2) == 0.0);
}

TEST_CASE("nuclear lmo on hand-checkable matrices") {
  SUBCASE("diagonal matrix") {
    Matrix g(2, 2);
    g << 3.0, 0.0, 0.0, 1.0;
    const auto res = lmo_nuclear(g, 2.0);
    REQUIRE(res.converged);
    CHECK(res.sigma == doctest::Approx(3.0).epsilon(1e-9));
    // atom = -R p q^T with p = q = +-e_0
    Eigen::Map<const Matrix> atom(res.atom.data(), 2, 2);
    CHECK(atom(0, 0) == doctest::Approx(-2.0).epsilon(1e-8));
    CHECK(std::abs(atom(0, 1)) < 1e-8);
    CHECK(std::abs(atom(1, 0)) < 1e-8);
    CHECK(std::abs(atom(1, 1)) < 1e-8);
  }
  SUBCASE("rank-1 matrix recovers its factors") {
    Vector p = vec({1.0, 2.0});
    Vector q = vec({-1.0, 1.0, 0.5});
    Matrix g = p * q.transpose();
    const auto res = lmo_nuclear(g, 1.0);
    REQUIRE(res.converged);
    CHECK(res.sigma == doctest::Approx(p.norm() * q.norm()).epsilon(1e-9));
    Eigen::Map<const Matrix> atom(res.atom.data(), 2, 3);
    const Matrix expect = -(p / p.norm()) * (q / q.norm()).transpose();
    CHECK((atom - expect).cwiseAbs().maxCoeff() < 1e-8);
  }
  SUBCASE("zero matrix") {
    CHECK(lmo_nuclear(Matrix::Zero(3, 2), 1.0).atom.isZero());
  }
}

TEST_CASE("nuclear lmo agrees with a dense SVD") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 20; ++t) {
    Matrix g(5, 4);
    for (int i = 0; i < g.size(); ++i) g.data()[i] = random_gaussian(1, rng)[0];
    const auto res = lmo_nuclear(g, 1.0, 1e-12, 2000, t);
    REQUIRE(res.converged);
    Eigen::JacobiSVD<Matrix> svd(g, Eigen::ComputeThinU | Eigen::ComputeThinV);
    CHECK(res.sigma == doctest::Approx(svd.singularValues()[0]).epsilon(1e-8));
    // compare by inner product: <atom, g> should equal -R sigma_max
    Eigen::Map<const Matrix> atom(res.atom.data(), 5, 4);
    CHECK((atom.array() * g.array()).sum() ==
          doctest::Approx(-svd.singularValues()[0]).epsilon(1e-8));
  }
}

TEST_CASE("closed-form lmos match exhaustive enumeration") {
  std::mt19937_64 rng(5);
  const auto l1 = FeasibleRegion::l1_ball(8, 1.3);
  const auto ns2 = FeasibleRegion::nsupport_ball(8, 2.0, 2);
  const auto ns3 = FeasibleRegion::nsupport_ball(7, 0.7, 3);
  for (int t = 0; t < 300; ++t) {
    for (const auto* region : {&l1, &ns2, &ns3}) {
      const Vector g = random_gaussian(region->dim(), rng);
      const Vector fast = region->lmo(g);
      const Vector brute = lmo_bruteforce(g, *region);
      CHECK((fast - brute).lpNorm<Eigen::Infinity>() < 1e-12);
    }
  }
}

TEST_CASE("lmo outputs are feasible and optimal among sampled points") {
  std::mt19937_64 rng(29);
  const auto regions = {
      FeasibleRegion::l2_ball(9, 1.7),
      FeasibleRegion::l1_ball(9, 0.4),
      FeasibleRegion::nsupport_ball(9, 2.2, 3),
      FeasibleRegion::nuclear_ball(4, 5, 1.1),
  };
  for (const auto& region : regions) {
    for (int t = 0; t < 100; ++t) {
      const Vector g = random_gaussian(region.dim(), rng);
      const Vector v = region.lmo(g);
      CHECK(region.contains(v, 1e-8));
      const double lmo_score = g.dot(v);
      for (int s = 0; s < 10; ++s) {
        const Vector y = region.sample(rng);
        REQUIRE(region.contains(y, 1e-8));
        CHECK(lmo_score <= g.dot(y) + 1e-8);
      }
    }
  }
}

TEST_CASE("membership tests on boundary and exterior points") {
  const auto l2 = FeasibleRegion::l2_ball(3, 2.0);
  CHECK(l2.contains(vec({2.0, 0.0, 0.0})));
  CHECK_FALSE(l2.contains(vec({2.1, 0.0, 0.0})));

  const auto l1 = FeasibleRegion::l1_ball(3, 1.0);
  CHECK(l1.contains(vec({0.5, -0.5, 0.0})));
  CHECK_FALSE(l1.contains(vec({0.7, -0.5, 0.0})));

  const auto ns = FeasibleRegion::nsupport_ball(3, 1.0, 2);
  CHECK(ns.contains(vec({1.0, 0.0, 0.0})));
  // (1,1,1)/sqrt(3) has 3-support l2 norm 1 but a larger 2-support norm
  const Vector spread = vec({1.0, 1.0, 1.0}) / std::sqrt(3.0);
  CHECK_FALSE(ns.contains(spread));
  CHECK(FeasibleRegion::nsupport_ball(3, 1.0, 3).contains(spread));

  const auto nuc = FeasibleRegion::nuclear_ball(2, 2, 1.0);
  CHECK(nuc.contains(vec({1.0, 0.0, 0.0, 0.0})));        // rank-1, sigma = 1
  CHECK_FALSE(nuc.contains(vec({1.0, 0.0, 0.0, 1.0})));  // identity: nuclear norm 2
}

TEST_CASE("structure statistic: nnz for vectors, numerical rank for matrices") {
  const auto l1 = FeasibleRegion::l1_ball(4, 5.0);
  CHECK(l1.structure_stat(vec({1.0, 0.0, -2.0, 0.0})) == 2.0);

  const auto nuc = FeasibleRegion::nuclear_ball(3, 3, 10.0);
  Matrix m = Matrix::Zero(3, 3);
  m(0, 0) = 2.0;
  m(1, 1) = 1.0;
  CHECK(nuc.structure_stat(Eigen::Map<Vector>(m.data(), 9)) == 2.0);
}

TEST_CASE("region validation rejects bad parameters") {
  CHECK_THROWS_AS(FeasibleRegion::l2_ball(0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(FeasibleRegion::l2_ball(3, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(FeasibleRegion::nsupport_ball(3, 1.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(FeasibleRegion::nsupport_ball(3, 1.0, 4), std::invalid_argument);
  CHECK_THROWS_AS(FeasibleRegion::nuclear_ball(0, 2, 1.0), std::invalid_argument);
  const auto l2 = FeasibleRegion::l2_ball(3, 1.0);
  CHECK_THROWS_AS(l2.lmo(Vector::Zero(4)), std::invalid_argument);
  CHECK_THROWS_AS(nsupport_norm(vec({1.0}), 0), std::invalid_argument);
}
