#pragma once

#include <Eigen/Dense>
#include <memory>
#include <vector>

#include "fw/geometry.hpp"

namespace fw {

/// One row of a sparse design matrix; indices 0-based, strictly increasing.
struct SparseRow {
  std::vector<int> idx;
  std::vector<double> val;

  double dot(const Vector& x) const {
    double s = 0.0;
    for (std::size_t t = 0; t < idx.size(); ++t) s += val[t] * x[idx[t]];
    return s;
  }
  double norm_sq() const {
    double s = 0.0;
    for (double v : val) s += v * v;
    return s;
  }
};

/// A differentiable convex objective over R^dim (matrices flattened).
class Objective {
 public:
  virtual ~Objective() = default;

  virtual int dim() const = 0;
  virtual double value(const Vector& x) const = 0;
  virtual Vector gradient(const Vector& x) const = 0;
  virtual double global_lipschitz() const = 0;
  virtual double directional_lipschitz(const Vector& x, const Vector& y) const = 0;

  /// argmin over [0,1] of f((1-eta) x + eta v). Default: bisection on the
  /// monotone derivative; exact-curvature objectives override.
  virtual double line_search(const Vector& x, const Vector& v,
                             double tol = 1e-10) const;

 protected:
  void check_dim(const Vector& x) const;
};

/// f(x) = 1/2 ||x - c||^2. Synthetic objective with L = 1 and known minimizer.
class QuadraticObjective final : public Objective {
 public:
  explicit QuadraticObjective(Vector target);

  int dim() const override { return static_cast<int>(target_.size()); }
  double value(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;
  double global_lipschitz() const override { return 1.0; }
  double directional_lipschitz(const Vector& x, const Vector& y) const override;
  double line_search(const Vector& x, const Vector& v, double tol) const override;

  const Vector& target() const { return target_; }

 private:
  Vector target_;
};

/// Mean logistic loss: f(x) = (1/N) sum ln(1 + exp(-b_i <a_i, x>)).
class LogisticObjective final : public Objective {
 public:
  LogisticObjective(std::vector<SparseRow> rows, std::vector<double> labels, int dim);

  int dim() const override { return dim_; }
  double value(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;
  double global_lipschitz() const override { return global_lip_; }
  double directional_lipschitz(const Vector& x, const Vector& y) const override;

  int num_samples() const { return static_cast<int>(rows_.size()); }
  const std::vector<SparseRow>& rows() const { return rows_; }
  const std::vector<double>& labels() const { return labels_; }

 private:
  std::vector<SparseRow> rows_;
  std::vector<double> labels_;
  int dim_;
  double global_lip_;
};

/// f(X) = 1/2 sum_{(i,j) in K} (X_ij - A_ij)^2 over flattened m x n matrices.
class MatrixCompletionObjective final : public Objective {
 public:
  struct Entry {
    int row, col;
    double value;
  };

  MatrixCompletionObjective(std::vector<Entry> observed, int rows, int cols);

  int dim() const override { return rows_ * cols_; }
  double value(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;
  double global_lipschitz() const override { return 1.0; }
  double directional_lipschitz(const Vector& x, const Vector& y) const override;
  double line_search(const Vector& x, const Vector& v, double tol) const override;

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const std::vector<Entry>& observed() const { return observed_; }

 private:
  std::vector<Entry> observed_;
  int rows_, cols_;
};

/// Max relative deviation between central differences and the analytic
/// gradient; the validation oracle for gradient code.
double finite_difference_check(const Objective& problem, const Vector& x,
                               double h = 1e-6);

}  // namespace fw
