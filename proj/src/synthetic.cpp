#include "fw/synthetic.hpp"

#include <random>

namespace fw {

std::unique_ptr<QuadraticObjective> make_quadratic(int dim, double target_norm,
                                                   std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector c(dim);
  for (int i = 0; i < dim; ++i) c[i] = gauss(rng);
  const double nrm = c.norm();
  if (nrm > 0.0) c *= target_norm / nrm;
  return std::make_unique<QuadraticObjective>(std::move(c));
}

std::unique_ptr<LogisticObjective> make_logistic(int num_samples, int dim,
                                                 double density,
                                                 std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  Vector planted(dim);
  for (int i = 0; i < dim; ++i) planted[i] = gauss(rng);

  std::vector<SparseRow> rows(num_samples);
  std::vector<double> labels(num_samples);
  for (int i = 0; i < num_samples; ++i) {
    SparseRow r;
    for (int j = 0; j < dim; ++j) {
      if (unif(rng) < density) {
        r.idx.push_back(j);
        r.val.push_back(gauss(rng));
      }
    }
    if (r.idx.empty()) {  // keep every row informative
      r.idx.push_back(static_cast<int>(rng() % dim));
      r.val.push_back(gauss(rng));
      std::sort(r.idx.begin(), r.idx.end());
    }
    const double margin = r.dot(planted);
    double b = margin >= 0.0 ? 1.0 : -1.0;
    if (unif(rng) < 0.1) b = -b;  // label noise
    labels[i] = b;
    rows[i] = std::move(r);
  }
  return std::make_unique<LogisticObjective>(std::move(rows), std::move(labels), dim);
}

std::unique_ptr<MatrixCompletionObjective> make_matcomp(int rows, int cols,
                                                        int rank,
                                                        double observed_fraction,
                                                        std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  Matrix p(rows, rank), q(cols, rank);
  for (int i = 0; i < p.size(); ++i) p.data()[i] = gauss(rng);
  for (int i = 0; i < q.size(); ++i) q.data()[i] = gauss(rng);
  const Matrix a = p * q.transpose() / std::sqrt(static_cast<double>(rank));

  std::vector<MatrixCompletionObjective::Entry> observed;
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) {
      if (unif(rng) < observed_fraction) observed.push_back({i, j, a(i, j)});
    }
  }
  if (observed.empty()) observed.push_back({0, 0, a(0, 0)});
  return std::make_unique<MatrixCompletionObjective>(std::move(observed), rows, cols);
}

}  // namespace fw
