#include "fw/objectives.hpp"

#include <cmath>
#include <stdexcept>

namespace fw {

namespace {

constexpr double kDegenerateSegment = 1e-15;
constexpr double kMarginSaturation = 30.0;

// ln(1 + exp(-m)), stable for large |m|
double log1p_exp_neg(double m) {
  if (m > kMarginSaturation) return std::exp(-m);
  if (m < -kMarginSaturation) return -m;
  return std::log1p(std::exp(-m));
}

// sigma(-m) = 1 / (1 + exp(m)), stable
double sigmoid_neg(double m) {
  if (m > kMarginSaturation) return std::exp(-m);
  if (m < -kMarginSaturation) return 1.0 - std::exp(m);
  const double e = std::exp(-m);
  return e / (1.0 + e);
}

}  // namespace

void Objective::check_dim(const Vector& x) const {
  if (static_cast<int>(x.size()) != dim()) {
    throw std::invalid_argument("objective: dimension mismatch");
  }
}

double Objective::line_search(const Vector& x, const Vector& v, double tol) const {
  check_dim(x);
  check_dim(v);
  if (tol <= 0.0) throw std::invalid_argument("line_search: tol must be positive");
  const Vector d = v - x;
  if (d.norm() <= kDegenerateSegment) return 0.0;
  auto dphi = [&](double eta) { return d.dot(gradient(x + eta * d)); };
  double lo = 0.0, hi = 1.0;
  double dlo = dphi(0.0);
  if (dlo >= 0.0) return 0.0;  // derivative is nondecreasing by convexity
  double dhi = dphi(1.0);
  if (dhi <= 0.0) return 1.0;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    const double dm = dphi(mid);
    if (std::abs(dm) <= tol) return mid;
    if (dm < 0.0) {
      lo = mid;
      dlo = dm;
    } else {
      hi = mid;
      dhi = dm;
    }
  }
  return 0.5 * (lo + hi);
}

QuadraticObjective::QuadraticObjective(Vector target) : target_(std::move(target)) {
  if (!target_.allFinite()) throw std::invalid_argument("quadratic: non-finite target");
}

double QuadraticObjective::value(const Vector& x) const {
  check_dim(x);
  return 0.5 * (x - target_).squaredNorm();
}

Vector QuadraticObjective::gradient(const Vector& x) const {
  check_dim(x);
  return x - target_;
}

double QuadraticObjective::directional_lipschitz(const Vector& x, const Vector& y) const {
  check_dim(x);
  check_dim(y);
  if ((x - y).norm() <= kDegenerateSegment) {
    throw std::invalid_argument("directional_lipschitz: degenerate segment x == y");
  }
  return 1.0;
}

double QuadraticObjective::line_search(const Vector& x, const Vector& v, double) const {
  check_dim(x);
  check_dim(v);
  const Vector d = v - x;
  const double dd = d.squaredNorm();
  if (dd <= kDegenerateSegment * kDegenerateSegment) return 0.0;
  const double eta = -(x - target_).dot(d) / dd;
  return std::clamp(eta, 0.0, 1.0);
}

LogisticObjective::LogisticObjective(std::vector<SparseRow> rows,
                                     std::vector<double> labels, int dim)
    : rows_(std::move(rows)), labels_(std::move(labels)), dim_(dim) {
  if (rows_.empty() || rows_.size() != labels_.size()) {
    throw std::invalid_argument("logistic: rows/labels size mismatch or empty");
  }
  for (double b : labels_) {
    if (b != 1.0 && b != -1.0) throw std::invalid_argument("logistic: labels must be +/-1");
  }
  double s = 0.0;
  for (const auto& r : rows_) {
    for (int j : r.idx) {
      if (j < 0 || j >= dim_) throw std::invalid_argument("logistic: feature index out of range");
    }
    s += r.norm_sq();
  }
  global_lip_ = s / (4.0 * static_cast<double>(rows_.size()));
}

double LogisticObjective::value(const Vector& x) const {
  check_dim(x);
  double s = 0.0;
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    s += log1p_exp_neg(labels_[i] * rows_[i].dot(x));
  }
  return s / static_cast<double>(rows_.size());
}

Vector LogisticObjective::gradient(const Vector& x) const {
  check_dim(x);
  Vector g = Vector::Zero(dim_);
  const double invN = 1.0 / static_cast<double>(rows_.size());
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const double m = labels_[i] * rows_[i].dot(x);
    const double w = -invN * labels_[i] * sigmoid_neg(m);
    const auto& r = rows_[i];
    for (std::size_t t = 0; t < r.idx.size(); ++t) g[r.idx[t]] += w * r.val[t];
  }
  return g;
}

double LogisticObjective::directional_lipschitz(const Vector& x, const Vector& y) const {
  check_dim(x);
  check_dim(y);
  const Vector d = x - y;
  const double dd = d.squaredNorm();
  if (std::sqrt(dd) <= kDegenerateSegment) {
    throw std::invalid_argument("directional_lipschitz: degenerate segment x == y");
  }
  double s = 0.0;
  for (const auto& r : rows_) {
    const double p = r.dot(d);
    s += p * p;
  }
  return s / (4.0 * static_cast<double>(rows_.size()) * dd);
}

MatrixCompletionObjective::MatrixCompletionObjective(std::vector<Entry> observed,
                                                     int rows, int cols)
    : observed_(std::move(observed)), rows_(rows), cols_(cols) {
  if (observed_.empty()) throw std::invalid_argument("matcomp: at least one observation required");
  std::vector<char> seen(static_cast<std::size_t>(rows_) * cols_, 0);
  for (const auto& e : observed_) {
    if (e.row < 0 || e.row >= rows_ || e.col < 0 || e.col >= cols_) {
      throw std::invalid_argument("matcomp: entry index out of range");
    }
    auto& flag = seen[static_cast<std::size_t>(e.col) * rows_ + e.row];
    if (flag) throw std::invalid_argument("matcomp: duplicate observed entry");
    flag = 1;
  }
}

double MatrixCompletionObjective::value(const Vector& x) const {
  check_dim(x);
  double s = 0.0;
  for (const auto& e : observed_) {
    const double r = x[static_cast<std::size_t>(e.col) * rows_ + e.row] - e.value;
    s += r * r;
  }
  return 0.5 * s;
}

Vector MatrixCompletionObjective::gradient(const Vector& x) const {
  check_dim(x);
  Vector g = Vector::Zero(dim());
  for (const auto& e : observed_) {
    const std::size_t k = static_cast<std::size_t>(e.col) * rows_ + e.row;
    g[k] = x[k] - e.value;
  }
  return g;
}

double MatrixCompletionObjective::directional_lipschitz(const Vector& x, const Vector& y) const {
  check_dim(x);
  check_dim(y);
  const Vector d = x - y;
  const double dd = d.squaredNorm();
  if (std::sqrt(dd) <= kDegenerateSegment) {
    throw std::invalid_argument("directional_lipschitz: degenerate segment x == y");
  }
  double s = 0.0;
  for (const auto& e : observed_) {
    const double p = d[static_cast<std::size_t>(e.col) * rows_ + e.row];
    s += p * p;
  }
  return s / dd;
}

double MatrixCompletionObjective::line_search(const Vector& x, const Vector& v, double) const {
  check_dim(x);
  check_dim(v);
  const Vector d = v - x;
  double num = 0.0, den = 0.0;
  for (const auto& e : observed_) {
    const std::size_t k = static_cast<std::size_t>(e.col) * rows_ + e.row;
    num += (x[k] - e.value) * d[k];
    den += d[k] * d[k];
  }
  if (den <= 0.0) return 0.0;
  return std::clamp(-num / den, 0.0, 1.0);
}

double finite_difference_check(const Objective& problem, const Vector& x, double h) {
  if (h < 1e-8 || h > 1e-4) throw std::invalid_argument("finite_difference_check: h out of [1e-8, 1e-4]");
  const Vector g = problem.gradient(x);
  const double scale = std::max(1.0, g.lpNorm<Eigen::Infinity>());
  double worst = 0.0;
  Vector xp = x;
  for (int i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    xp[i] = xi + h;
    const double fp = problem.value(xp);
    xp[i] = xi - h;
    const double fm = problem.value(xp);
    xp[i] = xi;
    const double fd = (fp - fm) / (2.0 * h);
    worst = std::max(worst, std::abs(fd - g[i]) / scale);
  }
  return worst;
}

}  // namespace fw
