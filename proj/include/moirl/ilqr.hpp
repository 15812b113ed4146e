#pragma once

#include <optional>
#include <vector>

#include "moirl/types.hpp"

namespace moirl {

struct SolverConfig {
  int max_iterations = 200;
  double cost_tolerance = 1e-9;        // relative cost-decrease stop
  double initial_regularization = 1e-6;
  double regularization_growth = 10.0;
  double regularization_shrink = 0.5;
  double regularization_min = 1e-9;
  double regularization_max = 1e9;
  int line_search_steps = 12;

  void validate() const {
    if (max_iterations < 1)
      throw std::invalid_argument("SolverConfig: max_iterations must be >= 1");
    if (!(cost_tolerance > 0.0))
      throw std::invalid_argument("SolverConfig: cost_tolerance must be positive");
  }
};

struct SolveResult {
  Trajectory trajectory;
  bool converged = false;
  double final_cost = 0.0;    // equals trajectory_cost(w, integrate_features(trajectory))
  int iterations_used = 0;
  std::vector<double> cost_trace;  // accepted-iterate costs, starting at the initial rollout
};

/// Locally optimal trajectory for the cost w' * Phi(tau) from x0, via iLQR
/// with Levenberg regularization and a backtracking forward pass. Accepted
/// iterates never increase the cost; deterministic for fixed inputs.
///
/// Throws std::runtime_error if a non-finite cost is encountered; failure
/// to converge is not an error (converged = false, best iterate returned).
SolveResult solve(const EnvironmentSpec& env, const WeightVector& w, const State& x0,
                  const std::optional<Trajectory>& warm_start, const SolverConfig& cfg);

}  // namespace moirl
