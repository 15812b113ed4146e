#pragma once

#include <string>
#include <vector>

#include "moirl/ilqr.hpp"
#include "moirl/irl.hpp"
#include "moirl/types.hpp"

namespace moirl {

struct ExperimentPreset {
  std::string name;
  EnvironmentSpec env;
  WeightVector ground_truth_weights;
  std::vector<State> alternative_starts;
  double goal_tolerance = 0.05;  // [m]
};

/// Fixed point-mass presets: pm1 (T=30, 1 obstacle), pm2 (T=50, 4 obstacles),
/// pm3 (T=50, 5 obstacles). Geometry and ground-truth weights are versioned
/// constants chosen so the straight start-goal segment crosses at least one
/// obstacle disk.
ExperimentPreset make_preset(const std::string& name);

/// OC solution under the ground-truth weights; throws if the result misses
/// the goal tolerance or collides (the preset would be invalid).
Trajectory generate_demonstration(const ExperimentPreset& preset, const SolverConfig& oc_cfg);

/// True iff any state's position lies strictly inside any obstacle disk.
bool collision_check(const Trajectory& tau, const EnvironmentSpec& env);

struct StartOutcome {
  std::string label;  // "original", "alt1", ...
  State start;
  bool solver_failed = false;
  bool reached_goal = false;
  bool collided = false;
  double cost_under_w_star = 0.0;
  double cost_under_learned_w = 0.0;
};

struct EvaluationReport {
  std::vector<StartOutcome> outcomes;  // original start first
  double ratio = 0.0;  // w*' Phi(learned rollout) / w*' Phi*  (original start)
  int alternatives_reached_collision_free = 0;
  double wallclock_s = 0.0;
};

/// Rolls out OC under the learned weights from the original and all
/// alternative starts; per-start OC failures are recorded, not fatal.
EvaluationReport evaluate_generalization(const WeightVector& w_learned,
                                         const ExperimentPreset& preset,
                                         const SolverConfig& oc_cfg);

struct AblationOutcome {
  std::string label;  // "a".."e"
  bool subsampling = false;
  bool step_acceptance = false;
  bool regularization = false;
  double final_m2 = 0.0;
  IRLResult irl;
  EvaluationReport report;
};

/// Runs the five ablation variants on the preset's demonstration:
/// (a) none, (b) sub-sampling, (c) b + step acceptance,
/// (d) b + regularization, (e) everything. The demonstration is regenerated
/// from the ground-truth weights unless one is supplied.
std::vector<AblationOutcome> run_ablation(const ExperimentPreset& preset,
                                          const IRLConfig& cfg_base, const SolverConfig& oc_cfg,
                                          const std::optional<Trajectory>& demo = std::nullopt);

}  // namespace moirl
