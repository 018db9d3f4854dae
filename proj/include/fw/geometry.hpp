#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>

namespace fw {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class RegionKind { L2Ball, L1Ball, NSupportBall, NuclearBall };

/// Result of the top-singular-pair computation behind the nuclear LMO.
struct NuclearLmoResult {
  Vector atom;      // -R * p q^T, flattened column-major
  Vector p, q;      // unit singular vectors (empty for zero gradient)
  double sigma = 0.0;
  bool converged = true;
};

Vector lmo_l2(const Vector& g, double radius);
Vector lmo_l1(const Vector& g, double radius);
Vector lmo_nsupport(const Vector& g, double radius, int n);
NuclearLmoResult lmo_nuclear(const Eigen::Ref<const Matrix>& g, double radius,
                             double tol = 1e-10, int max_iter = 500,
                             std::uint64_t seed = 0);

/// n-support norm of x: the gauge of conv{z : ||z||_0 <= n, ||z||_2 <= 1}.
double nsupport_norm(const Vector& x, int n);

/// A compact convex constraint set with a closed-form linear minimization
/// oracle. Matrices (NuclearBall) are handled flattened column-major, so
/// the solver only ever sees vectors.
class FeasibleRegion {
 public:
  static FeasibleRegion l2_ball(int dim, double radius);
  static FeasibleRegion l1_ball(int dim, double radius);
  static FeasibleRegion nsupport_ball(int dim, double radius, int n);
  static FeasibleRegion nuclear_ball(int rows, int cols, double radius,
                                     std::uint64_t power_seed = 0);

  RegionKind kind() const { return kind_; }
  double radius() const { return radius_; }
  int dim() const { return dim_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int sparsity_level() const { return sparsity_; }

  /// Diameter in l2 (Frobenius) norm: 2R for every kind.
  double diameter() const { return 2.0 * radius_; }

  Vector lmo(const Vector& g) const;
  bool contains(const Vector& x, double tol = 1e-9) const;

  /// nnz for vector sets, numerical rank (sigma > 1e-8 * sigma_max) for
  /// the nuclear ball. Used as the per-iteration structure statistic.
  double structure_stat(const Vector& x) const;

  /// A random point of the set (not uniform; feasibility is all that is
  /// guaranteed). Used by property tests and the certificate checks.
  Vector sample(std::mt19937_64& rng) const;

 private:
  FeasibleRegion() = default;
  RegionKind kind_ = RegionKind::L2Ball;
  double radius_ = 1.0;
  int dim_ = 0;
  int rows_ = 0, cols_ = 0;
  int sparsity_ = 0;
  std::uint64_t power_seed_ = 0;
};

/// Exhaustive LMO over all atoms; only for small instances.
/// Supports L1Ball (d <= 12) and NSupportBall (d <= 10, n <= 3).
Vector lmo_bruteforce(const Vector& g, const FeasibleRegion& region);

}  // namespace fw
