#pragma once

#include <cstdint>
#include <memory>

#include "fw/objectives.hpp"

namespace fw {

/// Quadratic with target drawn uniformly at radius target_norm from the origin.
std::unique_ptr<QuadraticObjective> make_quadratic(int dim, double target_norm,
                                                   std::uint64_t seed);

/// Random sparse logistic instance: gaussian features at the given density,
/// labels from a planted separator plus sign noise.
std::unique_ptr<LogisticObjective> make_logistic(int num_samples, int dim,
                                                 double density,
                                                 std::uint64_t seed);

/// Low-rank matrix completion instance: A = P Q^T observed on a random
/// fraction of entries.
std::unique_ptr<MatrixCompletionObjective> make_matcomp(int rows, int cols,
                                                        int rank,
                                                        double observed_fraction,
                                                        std::uint64_t seed);

}  // namespace fw
