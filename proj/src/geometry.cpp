#include "fw/geometry.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace fw {

namespace {

constexpr double kZeroGradTol = 1e-15;

void require_finite(const Vector& g, const char* who) {
  if (!g.allFinite()) {
    throw std::invalid_argument(std::string(who) + ": non-finite entries in gradient");
  }
}

}  // namespace

Vector lmo_l2(const Vector& g, double radius) {
  require_finite(g, "lmo_l2");
  if (radius <= 0.0) throw std::invalid_argument("lmo_l2: radius must be positive");
  const double nrm = g.norm();
  if (nrm <= kZeroGradTol) return Vector::Zero(g.size());
  return (-radius / nrm) * g;
}

Vector lmo_l1(const Vector& g, double radius) {
  require_finite(g, "lmo_l1");
  if (radius <= 0.0) throw std::invalid_argument("lmo_l1: radius must be positive");
  Vector v = Vector::Zero(g.size());
  int best = -1;
  double best_abs = 0.0;
  for (int i = 0; i < g.size(); ++i) {
    const double a = std::abs(g[i]);
    if (a > best_abs) {  // strict: ties go to the lowest index
      best_abs = a;
      best = i;
    }
  }
  if (best < 0 || best_abs <= kZeroGradTol) return v;
  v[best] = g[best] > 0.0 ? -radius : radius;
  return v;
}

Vector lmo_nsupport(const Vector& g, double radius, int n) {
  require_finite(g, "lmo_nsupport");
  if (radius <= 0.0) throw std::invalid_argument("lmo_nsupport: radius must be positive");
  const int d = static_cast<int>(g.size());
  if (n < 1 || n > d) throw std::invalid_argument("lmo_nsupport: n out of range [1, d]");
  std::vector<int> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return std::abs(g[a]) > std::abs(g[b]);
  });
  double norm_sq = 0.0;
  for (int i = 0; i < n; ++i) norm_sq += g[order[i]] * g[order[i]];
  Vector v = Vector::Zero(d);
  const double nrm = std::sqrt(norm_sq);
  if (nrm <= kZeroGradTol) return v;
  for (int i = 0; i < n; ++i) {
    const int j = order[i];
    v[j] = -radius * g[j] / nrm;
  }
  return v;
}

NuclearLmoResult lmo_nuclear(const Eigen::Ref<const Matrix>& g, double radius,
                             double tol, int max_iter, std::uint64_t seed) {
  if (!g.allFinite()) throw std::invalid_argument("lmo_nuclear: non-finite gradient");
  if (radius <= 0.0) throw std::invalid_argument("lmo_nuclear: radius must be positive");
  if (tol <= 0.0) throw std::invalid_argument("lmo_nuclear: tol must be positive");

  NuclearLmoResult out;
  const double fro = g.norm();
  if (fro <= kZeroGradTol) {
    out.atom = Vector::Zero(g.rows() * g.cols());
    return out;
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector q(g.cols());
  for (int i = 0; i < q.size(); ++i) q[i] = gauss(rng);
  q.normalize();

  Vector p;
  double sigma = 0.0;
  out.converged = false;
  for (int it = 0; it < max_iter; ++it) {
    p = g * q;
    const double pn = p.norm();
    if (pn <= kZeroGradTol) {
      // restart from a fresh direction; g != 0 so some q works
      for (int i = 0; i < q.size(); ++i) q[i] = gauss(rng);
      q.normalize();
      continue;
    }
    p /= pn;
    q = g.transpose() * p;
    sigma = q.norm();
    q /= sigma;
    if ((g * q - sigma * p).norm() <= tol * fro) {
      out.converged = true;
      break;
    }
  }

  Matrix atom = -radius * (p * q.transpose());
  out.atom = Eigen::Map<Vector>(atom.data(), atom.size());
  out.p = p;
  out.q = q;
  out.sigma = sigma;
  return out;
}

double nsupport_norm(const Vector& x, int n) {
  const int d = static_cast<int>(x.size());
  if (n < 1 || n > d) throw std::invalid_argument("nsupport_norm: n out of range");
  std::vector<double> a(d);
  for (int i = 0; i < d; ++i) a[i] = std::abs(x[i]);
  std::sort(a.begin(), a.end(), std::greater<double>());
  // Argyriou et al. formula: find r in {0..n-1} with
  //   a[n-r-2] > T_r/(r+1) >= a[n-r-1], T_r = sum of the trailing d-n+r+1 values
  double tail = 0.0;
  for (int i = n - 1; i < d; ++i) tail += a[i];
  for (int r = 0; r < n; ++r) {
    const double head = (r == n - 1) ? std::numeric_limits<double>::infinity() : a[n - r - 2];
    const double avg = tail / (r + 1);
    if (head > avg && avg >= a[n - r - 1] - 1e-15 * (1.0 + a[n - r - 1])) {
      double sq = 0.0;
      for (int i = 0; i < n - r - 1; ++i) sq += a[i] * a[i];
      sq += tail * tail / (r + 1);
      return std::sqrt(sq);
    }
    if (r + 1 < n) tail += a[n - r - 2];
  }
  // unreachable for valid input; fall back to the r = n-1 branch
  double total = 0.0;
  for (int i = 0; i < d; ++i) total += a[i];
  return total / std::sqrt(static_cast<double>(n));
}

FeasibleRegion FeasibleRegion::l2_ball(int dim, double radius) {
  if (dim < 1 || radius <= 0.0) throw std::invalid_argument("l2_ball: bad parameters");
  FeasibleRegion r;
  r.kind_ = RegionKind::L2Ball;
  r.dim_ = dim;
  r.radius_ = radius;
  return r;
}

FeasibleRegion FeasibleRegion::l1_ball(int dim, double radius) {
  if (dim < 1 || radius <= 0.0) throw std::invalid_argument("l1_ball: bad parameters");
  FeasibleRegion r;
  r.kind_ = RegionKind::L1Ball;
  r.dim_ = dim;
  r.radius_ = radius;
  return r;
}

FeasibleRegion FeasibleRegion::nsupport_ball(int dim, double radius, int n) {
  if (dim < 1 || radius <= 0.0 || n < 1 || n > dim) {
    throw std::invalid_argument("nsupport_ball: bad parameters");
  }
  FeasibleRegion r;
  r.kind_ = RegionKind::NSupportBall;
  r.dim_ = dim;
  r.radius_ = radius;
  r.sparsity_ = n;
  return r;
}

FeasibleRegion FeasibleRegion::nuclear_ball(int rows, int cols, double radius,
                                            std::uint64_t power_seed) {
  if (rows < 1 || cols < 1 || radius <= 0.0) {
    throw std::invalid_argument("nuclear_ball: bad parameters");
  }
  FeasibleRegion r;
  r.kind_ = RegionKind::NuclearBall;
  r.dim_ = rows * cols;
  r.rows_ = rows;
  r.cols_ = cols;
  r.radius_ = radius;
  r.power_seed_ = power_seed;
  return r;
}

Vector FeasibleRegion::lmo(const Vector& g) const {
  if (g.size() != dim_) throw std::invalid_argument("lmo: dimension mismatch");
  switch (kind_) {
    case RegionKind::L2Ball:
      return lmo_l2(g, radius_);
    case RegionKind::L1Ball:
      return lmo_l1(g, radius_);
    case RegionKind::NSupportBall:
      return lmo_nsupport(g, radius_, sparsity_);
    case RegionKind::NuclearBall: {
      Eigen::Map<const Matrix> gm(g.data(), rows_, cols_);
      return lmo_nuclear(gm, radius_, 1e-10, 500, power_seed_).atom;
    }
  }
  throw std::logic_error("lmo: unknown region kind");
}

bool FeasibleRegion::contains(const Vector& x, double tol) const {
  if (x.size() != dim_) return false;
  switch (kind_) {
    case RegionKind::L2Ball:
      return x.norm() <= radius_ + tol;
    case RegionKind::L1Ball:
      return x.lpNorm<1>() <= radius_ + tol;
    case RegionKind::NSupportBall:
      return nsupport_norm(x, sparsity_) <= radius_ + tol;
    case RegionKind::NuclearBall: {
      Eigen::Map<const Matrix> xm(x.data(), rows_, cols_);
      Eigen::JacobiSVD<Matrix> svd(xm);
      return svd.singularValues().sum() <= radius_ + tol;
    }
  }
  return false;
}

double FeasibleRegion::structure_stat(const Vector& x) const {
  if (kind_ == RegionKind::NuclearBall) {
    Eigen::Map<const Matrix> xm(x.data(), rows_, cols_);
    Eigen::JacobiSVD<Matrix> svd(xm);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv[0] <= 0.0) return 0.0;
    const double cutoff = 1e-8 * sv[0];
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
      if (sv[i] > cutoff) ++rank;
    return static_cast<double>(rank);
  }
  int nnz = 0;
  for (int i = 0; i < x.size(); ++i)
    if (x[i] != 0.0) ++nnz;
  return static_cast<double>(nnz);
}

Vector FeasibleRegion::sample(std::mt19937_64& rng) const {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  switch (kind_) {
    case RegionKind::L2Ball: {
      Vector u(dim_);
      for (int i = 0; i < dim_; ++i) u[i] = gauss(rng);
      const double nrm = u.norm();
      if (nrm <= kZeroGradTol) return Vector::Zero(dim_);
      return (radius_ * unif(rng) / nrm) * u;
    }
    case RegionKind::L1Ball: {
      // simplex weights with random signs
      std::exponential_distribution<double> expd(1.0);
      Vector w(dim_);
      double total = 0.0;
      for (int i = 0; i < dim_; ++i) {
        w[i] = expd(rng);
        total += w[i];
      }
      Vector x(dim_);
      for (int i = 0; i < dim_; ++i) {
        const double s = unif(rng) < 0.5 ? -1.0 : 1.0;
        x[i] = s * radius_ * w[i] / total;
      }
      return unif(rng) * x;
    }
    case RegionKind::NSupportBall: {
      // convex combination of random n-sparse atoms of norm R
      const int atoms = sparsity_ + 2;
      std::exponential_distribution<double> expd(1.0);
      Vector weights(atoms);
      double total = 0.0;
      for (int a = 0; a < atoms; ++a) {
        weights[a] = expd(rng);
        total += weights[a];
      }
      Vector x = Vector::Zero(dim_);
      std::vector<int> idx(dim_);
      std::iota(idx.begin(), idx.end(), 0);
      for (int a = 0; a < atoms; ++a) {
        std::shuffle(idx.begin(), idx.end(), rng);
        Vector atom = Vector::Zero(dim_);
        double nrm_sq = 0.0;
        for (int i = 0; i < sparsity_; ++i) {
          atom[idx[i]] = gauss(rng);
          nrm_sq += atom[idx[i]] * atom[idx[i]];
        }
        if (nrm_sq <= kZeroGradTol) continue;
        atom *= radius_ / std::sqrt(nrm_sq);
        x += (weights[a] / total) * atom;
      }
      return unif(rng) * x;
    }
    case RegionKind::NuclearBall: {
      const int atoms = 3;
      std::exponential_distribution<double> expd(1.0);
      double total = 0.0;
      std::vector<double> w(atoms);
      for (int a = 0; a < atoms; ++a) {
        w[a] = expd(rng);
        total += w[a];
      }
      Matrix x = Matrix::Zero(rows_, cols_);
      for (int a = 0; a < atoms; ++a) {
        Vector p(rows_), q(cols_);
        for (int i = 0; i < rows_; ++i) p[i] = gauss(rng);
        for (int j = 0; j < cols_; ++j) q[j] = gauss(rng);
        if (p.norm() <= kZeroGradTol || q.norm() <= kZeroGradTol) continue;
        p.normalize();
        q.normalize();
        x += (w[a] / total) * radius_ * (p * q.transpose());
      }
      x *= unif(rng);
      return Eigen::Map<Vector>(x.data(), x.size());
    }
  }
  throw std::logic_error("sample: unknown region kind");
}

Vector lmo_bruteforce(const Vector& g, const FeasibleRegion& region) {
  require_finite(g, "lmo_bruteforce");
  const int d = region.dim();
  if (region.kind() == RegionKind::L1Ball) {
    if (d > 12) throw std::invalid_argument("lmo_bruteforce: l1 dimension too large");
    Vector best = Vector::Zero(d);
    double best_val = 0.0;  // the center scores 0
    for (int i = 0; i < d; ++i) {
      for (double s : {-1.0, 1.0}) {
        Vector v = Vector::Zero(d);
        v[i] = s * region.radius();
        const double val = g.dot(v);
        if (val < best_val) {
          best_val = val;
          best = v;
        }
      }
    }
    return best;
  }
  if (region.kind() == RegionKind::NSupportBall) {
    const int n = region.sparsity_level();
    if (d > 10 || n > 3) throw std::invalid_argument("lmo_bruteforce: nsupport instance too large");
    Vector best = Vector::Zero(d);
    double best_val = 0.0;
    std::vector<int> support(n);
    // enumerate all n-subsets; per support the optimum is -R g_S / ||g_S||
    std::vector<int> comb(n);
    for (int i = 0; i < n; ++i) comb[i] = i;
    while (true) {
      double nrm_sq = 0.0;
      for (int i : comb) nrm_sq += g[i] * g[i];
      if (nrm_sq > 1e-30) {
        const double nrm = std::sqrt(nrm_sq);
        Vector v = Vector::Zero(d);
        for (int i : comb) v[i] = -region.radius() * g[i] / nrm;
        const double val = g.dot(v);
        if (val < best_val) {
          best_val = val;
          best = v;
        }
      }
      int j = n - 1;
      while (j >= 0 && comb[j] == d - n + j) --j;
      if (j < 0) break;
      ++comb[j];
      for (int i = j + 1; i < n; ++i) comb[i] = comb[i - 1] + 1;
    }
    return best;
  }
  throw std::invalid_argument("lmo_bruteforce: unsupported region kind");
}

}  // namespace fw
