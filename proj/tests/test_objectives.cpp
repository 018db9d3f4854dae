#include <doctest.h>

#include <random>

#include "fw/objectives.hpp"
#include "fw/synthetic.hpp"

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

// two-sample logistic instance small enough to evaluate by hand
LogisticObjective tiny_logistic() {
  std::vector<SparseRow> rows(2);
  rows[0].idx = {0};
  rows[0].val = {1.0};
  rows[1].idx = {1};
  rows[1].val = {2.0};
  return LogisticObjective(rows, {1.0, -1.0}, 2);
}

}  // namespace

TEST_CASE("quadratic value/gradient/lipschitz") {
  QuadraticObjective f(vec({1.0, -2.0}));
  CHECK(f.value(vec({1.0, -2.0})) == 0.0);
  CHECK(f.value(vec({2.0, 0.0})) == doctest::Approx(2.5).epsilon(1e-15));
  const Vector g = f.gradient(vec({2.0, 0.0}));
  CHECK(g[0] == 1.0);
  CHECK(g[1] == 2.0);
  CHECK(f.global_lipschitz() == 1.0);
  CHECK(f.directional_lipschitz(vec({0.0, 0.0}), vec({1.0, 1.0})) == 1.0);
}

TEST_CASE("logistic value at hand-checkable points") {
  auto f = tiny_logistic();
  // at x = 0 every margin is 0: f = ln 2
  CHECK(f.value(Vector::Zero(2)) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  // gradient at 0: -(1/2N) sum b_i a_i
  const Vector g0 = f.gradient(Vector::Zero(2));
  CHECK(g0[0] == doctest::Approx(-0.25).epsilon(1e-14));
  CHECK(g0[1] == doctest::Approx(0.5).epsilon(1e-14));
  // L = (1/4N) sum ||a_i||^2 = (1 + 4) / 8
  CHECK(f.global_lipschitz() == doctest::Approx(0.625).epsilon(1e-14));
}

TEST_CASE("logistic is numerically stable at huge margins") {
  auto f = tiny_logistic();
  const Vector far = vec({1e4, -1e4});
  // both samples are correctly classified with margin 1e4 and 2e4
  CHECK(std::isfinite(f.value(far)));
  CHECK(f.value(far) < 1e-300);
  CHECK(f.gradient(far).allFinite());
  const Vector wrong = vec({-1e4, 1e4});
  CHECK(f.value(wrong) == doctest::Approx(1.5e4).epsilon(1e-12));
  CHECK(f.gradient(wrong).allFinite());
}

TEST_CASE("logistic rejects malformed construction") {
  std::vector<SparseRow> rows(1);
  rows[0].idx = {0};
  rows[0].val = {1.0};
  CHECK_THROWS_AS(LogisticObjective({}, {}, 2), std::invalid_argument);
  CHECK_THROWS_AS(LogisticObjective(rows, {0.5}, 2), std::invalid_argument);
  std::vector<SparseRow> bad(1);
  bad[0].idx = {5};
  bad[0].val = {1.0};
  CHECK_THROWS_AS(LogisticObjective(bad, {1.0}, 2), std::invalid_argument);
}

TEST_CASE("matrix completion value/gradient on a 2x2 instance") {
  using E = MatrixCompletionObjective::Entry;
  MatrixCompletionObjective f({E{0, 0, 2.0}, E{1, 1, -1.0}}, 2, 2);
  // X = [[1, 9], [9, 0]]: only observed cells count
  Vector x(4);
  x << 1.0, 9.0, 9.0, 0.0;  // column-major: X00, X10, X01, X11
  CHECK(f.value(x) == doctest::Approx(0.5 * (1.0 + 1.0)).epsilon(1e-15));
  const Vector g = f.gradient(x);
  CHECK(g[0] == -1.0);  // X00 - 2
  CHECK(g[1] == 0.0);   // unobserved
  CHECK(g[2] == 0.0);
  CHECK(g[3] == 1.0);  // X11 + 1
  CHECK(f.global_lipschitz() == 1.0);

  CHECK_THROWS_AS(MatrixCompletionObjective({E{0, 0, 1.0}, E{0, 0, 2.0}}, 2, 2),
                  std::invalid_argument);
  CHECK_THROWS_AS(MatrixCompletionObjective({E{2, 0, 1.0}}, 2, 2), std::invalid_argument);
}

TEST_CASE("directional curvature never exceeds the global constant") {
  std::mt19937_64 rng(41);
  auto logi = make_logistic(30, 12, 0.5, 1);
  auto mc = make_matcomp(6, 5, 2, 0.5, 2);
  for (int t = 0; t < 50; ++t) {
    const Vector x = random_gaussian(12, rng), y = random_gaussian(12, rng);
    CHECK(logi->directional_lipschitz(x, y) <= logi->global_lipschitz() + 1e-12);
    const Vector xm = random_gaussian(30, rng), ym = random_gaussian(30, rng);
    CHECK(mc->directional_lipschitz(xm, ym) <= mc->global_lipschitz() + 1e-12);
  }
  CHECK_THROWS_AS(logi->directional_lipschitz(Vector::Zero(12), Vector::Zero(12)),
                  std::invalid_argument);
}

TEST_CASE("segment curvature bounds the Bregman gap along the segment") {
  // f(y) <= f(x) + <grad f(x), y - x> + L(x,y)/2 ||y - x||^2
  std::mt19937_64 rng(43);
  auto logi = make_logistic(25, 10, 0.5, 7);
  for (int t = 0; t < 100; ++t) {
    const Vector x = random_gaussian(10, rng);
    const Vector y = x + 0.5 * random_gaussian(10, rng);
    const double lip = logi->directional_lipschitz(x, y);
    const double quad_bound = logi->value(x) + logi->gradient(x).dot(y - x) +
                              0.5 * lip * (y - x).squaredNorm();
    CHECK(logi->value(y) <= quad_bound + 1e-10);
  }
}

TEST_CASE("convexity spot check: chords lie above the graph") {
  std::mt19937_64 rng(47);
  auto logi = make_logistic(20, 8, 0.6, 9);
  for (int t = 0; t < 50; ++t) {
    const Vector x = random_gaussian(8, rng), y = random_gaussian(8, rng);
    const double lam = 0.3;
    CHECK(logi->value(lam * x + (1 - lam) * y) <=
          lam * logi->value(x) + (1 - lam) * logi->value(y) + 1e-12);
  }
}

TEST_CASE("line search beats a fine grid scan") {
  std::mt19937_64 rng(53);
  auto quad = make_quadratic(6, 0.8, 11);
  auto logi = make_logistic(15, 6, 0.7, 13);
  for (const Objective* f : {static_cast<const Objective*>(quad.get()),
                             static_cast<const Objective*>(logi.get())}) {
    for (int t = 0; t < 20; ++t) {
      const Vector x = 0.3 * random_gaussian(6, rng);
      const Vector v = 0.3 * random_gaussian(6, rng);
      const double eta = f->line_search(x, v, 1e-12);
      REQUIRE(eta >= 0.0);
      REQUIRE(eta <= 1.0);
      const double best = f->value((1 - eta) * x + eta * v);
      for (int i = 0; i <= 200; ++i) {
        const double e = i / 200.0;
        CHECK(best <= f->value((1 - e) * x + e * v) + 1e-8);
      }
    }
  }
}

TEST_CASE("central differences confirm every analytic gradient") {
  std::mt19937_64 rng(59);
  auto quad = make_quadratic(10, 0.5, 21);
  auto logi = make_logistic(25, 10, 0.4, 22);
  auto mc = make_matcomp(7, 5, 2, 0.4, 23);
  for (int t = 0; t < 10; ++t) {
    CHECK(finite_difference_check(*quad, random_gaussian(10, rng)) < 1e-7);
    CHECK(finite_difference_check(*logi, random_gaussian(10, rng)) < 1e-5);
    CHECK(finite_difference_check(*mc, random_gaussian(35, rng)) < 1e-7);
  }
  CHECK_THROWS_AS(finite_difference_check(*quad, Vector::Zero(10), 1.0),
                  std::invalid_argument);
}

TEST_CASE("dimension mismatches are rejected") {
  QuadraticObjective f(vec({0.0, 0.0}));
  CHECK_THROWS_AS(f.value(Vector::Zero(3)), std::invalid_argument);
  CHECK_THROWS_AS(f.gradient(Vector::Zero(1)), std::invalid_argument);
}
