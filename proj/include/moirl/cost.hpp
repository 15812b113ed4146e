#pragma once

#include "moirl/types.hpp"

namespace moirl {

/// Trajectory cost under a linear feature model: w' * phi.
double trajectory_cost(const WeightVector& w, const FeatureVector& phi);

/// Max-entropy probability of the demonstration against a finite sample set:
///   exp(-w'phi_star) / (exp(-w'phi_star) + sum_i exp(-w'phi_i)).
/// Evaluated on a log-sum-exp-stable path; result lies in (0, 1].
double demo_probability(const WeightVector& w, const FeatureVector& phi_star,
                        const std::vector<FeatureVector>& others);

}  // namespace moirl
