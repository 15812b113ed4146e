#pragma once

#include <deque>
#include <functional>
#include <optional>
#include <vector>

#include "moirl/ilqr.hpp"
#include "moirl/types.hpp"

namespace moirl {

struct IRLConfig {
  int window_L = 1;            // moving window of sampled trajectories
  int subsamples_N = 20;       // truncation grid size (1 disables sub-sampling)
  double lambda_l1 = 1e-6;     // elastic-net L1 weight
  double beta_l2 = 1e-2;       // elastic-net L2 weight
  double wolfe_c1 = 1e-4;
  double wolfe_c2 = 0.9;
  double alpha_shrink = 0.25;  // step-size shrink per failed trial
  int max_step_trials = 10;
  double w_init_value = 0.01;
  std::optional<double> weight_upper_bound;  // 1.0 when bounded mode is on
  int max_outer_iterations = 100;
  double m2_convergence_tol = 1e-3;
  int inner_max_iterations = 500;   // proximal-gradient step-direction solver
  double inner_step_tol = 1e-8;
  bool step_acceptance = true;      // off: take every step at alpha = 1 (ablation)

  void validate() const {
    if (!(wolfe_c1 > 0.0 && wolfe_c1 < wolfe_c2 && wolfe_c2 < 1.0))
      throw std::invalid_argument("IRLConfig: require 0 < c1 < c2 < 1");
    if (!(alpha_shrink > 0.0 && alpha_shrink < 1.0))
      throw std::invalid_argument("IRLConfig: require 0 < alpha_shrink < 1");
    if (window_L < 1) throw std::invalid_argument("IRLConfig: window_L must be >= 1");
    if (subsamples_N < 1) throw std::invalid_argument("IRLConfig: subsamples_N must be >= 1");
  }
};

// Partition-function dataset for one step-direction solve: the last L
// sampled trajectories, expanded over the truncation grid.
struct IRLDataset {
  int feature_count = 0;
  std::vector<double> thetas;             // theta_d per grid entry, theta_0 = 1
  std::vector<FeatureVector> phi_star_d;  // demo features per truncation
  std::vector<std::vector<VecX>> deltas;  // [d][i] = Phi_{i,d} - Phi*_d
  std::vector<double> gammas;             // per-trajectory weight, shared across d

  bool empty() const { return gammas.empty() || thetas.empty(); }
};

// Full and truncated features of one trajectory on a fixed grid.
struct TrajectoryFeatures {
  FeatureVector full;
  std::vector<FeatureVector> truncated;  // one per grid entry
};

TrajectoryFeatures featurize_on_grid(const Trajectory& tau, const EnvironmentSpec& env,
                                     const std::vector<int>& grid);

IRLDataset build_dataset(const WeightVector& w, const TrajectoryFeatures& demo,
                         const std::deque<TrajectoryFeatures>& window,
                         const std::vector<double>& thetas);

/// Per-trajectory partition weight exp(-w'(phi_i - phi_star)), clamped to
/// [1e-30, 1e30].
double compute_gamma(const WeightVector& w, const FeatureVector& phi_i,
                     const FeatureVector& phi_star);

/// Elastic-net-regularized negative log-likelihood of the weight increment:
///   sum_d theta_d log(1 + sum_i gamma_i exp(-dw' Delta_{i,d}))
///     + lambda |dw|_1 + (beta/2) |dw|_2^2
double nll_objective(const VecX& dw, const IRLDataset& dataset, double lambda_l1,
                     double beta_l2);

/// Gradient of the smooth part (log-likelihood + L2). The L1 term is handled
/// by the proximal operator, not here.
VecX nll_gradient(const VecX& dw, const IRLDataset& dataset, double lambda_l1,
                  double beta_l2);

/// Minimizes nll_objective by proximal gradient descent with backtracking.
/// Iterates are soft-thresholded and projected onto the feasible box
/// {dw >= -w + eps} (and dw <= upper_bound - w in bounded mode), so the
/// returned direction keeps w + dw strictly positive.
VecX solve_step_direction(const WeightVector& w, const IRLDataset& dataset,
                          const IRLConfig& cfg);

/// Merit on cost agreement: 1/2 (w'phi_star - w'phi_tilde)^2.
double merit_m1(const WeightVector& w, const FeatureVector& phi_star,
                const FeatureVector& phi_tilde);

/// Merit on feature agreement: |phi_star - phi_tilde|_2.
double merit_m2(const FeatureVector& phi_star, const FeatureVector& phi_tilde);

// One OC-generated sample: trajectory plus its integrated features.
struct OcSample {
  Trajectory trajectory;
  FeatureVector features;
};

// Maps candidate weights to an OC solution; nullopt marks a failed solve
// (the trial is rejected and the step size shrinks). Tests substitute
// scripted oracles here.
using OcOracle = std::function<std::optional<OcSample>(const WeightVector&)>;

struct StepOutcome {
  bool accepted = false;
  WeightVector new_w;
  Trajectory new_trajectory;
  FeatureVector new_features;
  double new_m1 = 0.0;
  double new_m2 = 0.0;
  double alpha_used = 0.0;
  int trials_used = 0;
};

/// Backtracking step acceptance (Algorithm core): starting at alpha = 1,
/// solve OC(w + alpha*dw) and accept if the m1 merit satisfies the
/// Armijo/Wolfe pair (directional derivatives taken with phi_tilde held at
/// the previous accepted trajectory) or m2 strictly improves; otherwise
/// shrink alpha. Fails after max_step_trials trials.
StepOutcome accept_step(const WeightVector& w, const VecX& dw, const FeatureVector& phi_star,
                        const FeatureVector& phi_tilde_prev, double prev_m1, double prev_m2,
                        const OcOracle& oracle, const IRLConfig& cfg);

/// Production overload: the oracle is an iLQR solve warm-started from the
/// previous accepted trajectory.
StepOutcome accept_step(const WeightVector& w, const VecX& dw, const FeatureVector& phi_star,
                        const FeatureVector& phi_tilde_prev, double prev_m1, double prev_m2,
                        const EnvironmentSpec& env, const Trajectory& warm_start,
                        const SolverConfig& oc_cfg, const IRLConfig& cfg);

enum class TerminationReason { step_search_exhausted, m2_below_tol, max_iterations };

const char* to_string(TerminationReason reason);

struct IterationRecord {
  int iteration = 0;
  WeightVector weights;
  double alpha = 0.0;
  double m1 = 0.0;
  double m2 = 0.0;
  double traj_deviation = 0.0;      // stacked-state L2 distance to the demo
  double cost_gap_learned_w = 0.0;  // |w'phi_star - w'phi_tilde|
  double cost_gap_true_w = 0.0;     // |w*'phi_star - w*'phi_tilde|; NaN without w*
  double wallclock_s = 0.0;
};

struct IRLResult {
  WeightVector final_weights;
  std::vector<IterationRecord> iteration_log;
  TerminationReason termination_reason = TerminationReason::max_iterations;
  Trajectory final_trajectory;          // last accepted OC solution
  double final_m2 = 0.0;
  int outer_iterations = 0;             // outer-loop iterations started
  std::vector<Trajectory> sampled_trajectories;  // tau_0, tau_1, ...
};

/// MO-IRL: iterate step-direction solves and merit-gated step acceptance
/// until no acceptable step exists, m2 falls below tolerance, or the
/// iteration cap is reached. ground_truth, when given, only feeds the
/// cost_gap_true_w diagnostic.
IRLResult run(const Trajectory& tau_star, const EnvironmentSpec& env, const IRLConfig& cfg,
              const SolverConfig& oc_cfg,
              const std::optional<WeightVector>& ground_truth = std::nullopt);

}  // namespace moirl
