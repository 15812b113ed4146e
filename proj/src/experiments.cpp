#include "moirl/experiments.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <map>

#include "moirl/cost.hpp"
#include "moirl/dynamics.hpp"
#include "moirl/features.hpp"

namespace moirl {

namespace {

WeightVector named_weights(const EnvironmentSpec& env,
                           const std::map<std::string, double>& stage,
                           const std::map<std::string, double>& term,
                           double stage_obs, double term_obs) {
  WeightVector w = WeightVector::Zero(env.feature_count());
  w(0) = stage.at("G");
  w(1) = stage.at("XReg");
  w(2) = stage.at("UReg");
  for (int i = 0; i < env.num_obstacles(); ++i) w(3 + i) = stage_obs;
  const int ts = env.stage_feature_count();
  w(ts + 0) = term.at("G");
  w(ts + 1) = term.at("XReg");
  for (int i = 0; i < env.num_obstacles(); ++i) w(ts + 2 + i) = term_obs;
  return w;
}

State rest_at(double px, double py) {
  State s;
  s.position << px, py;
  return s;
}

}  // namespace

ExperimentPreset make_preset(const std::string& name) {
  ExperimentPreset p;
  p.name = name;
  p.goal_tolerance = 0.05;
  EnvironmentSpec& env = p.env;
  env.dt = 0.05;

  if (name == "pm1") {
    env.horizon_T = 30;  // 1.5 s
    env.goal << 3.0, 3.0;
    env.start = rest_at(0.0, 0.0);
    env.obstacles = {{Vec2(1.4, 1.7), 0.45, 0.35}};
    p.ground_truth_weights = named_weights(env,
                                           {{"G", 1.0}, {"XReg", 0.02}, {"UReg", 0.02}},
                                           {{"G", 60.0}, {"XReg", 0.02}}, 40.0, 40.0);
    p.alternative_starts = {rest_at(3.0, 0.0), rest_at(0.0, 3.0), rest_at(-0.5, -0.5),
                            rest_at(1.5, -0.5), rest_at(-0.5, 2.0)};
  } else if (name == "pm2") {
    env.horizon_T = 50;  // 2.5 s
    env.goal << 4.0, 4.0;
    env.start = rest_at(0.0, 0.0);
    env.obstacles = {{Vec2(1.0, 1.3), 0.40, 0.30},
                     {Vec2(2.1, 1.9), 0.40, 0.30},
                     {Vec2(3.1, 2.6), 0.35, 0.30},
                     {Vec2(1.9, 3.2), 0.35, 0.30}};
    p.ground_truth_weights = named_weights(env,
                                           {{"G", 1.0}, {"XReg", 0.02}, {"UReg", 0.02}},
                                           {{"G", 60.0}, {"XReg", 0.02}}, 40.0, 40.0);
    p.alternative_starts = {rest_at(4.0, 0.0), rest_at(0.0, 4.0), rest_at(-0.5, -0.5),
                            rest_at(2.0, -0.5), rest_at(4.5, 2.0)};
  } else if (name == "pm3") {
    env.horizon_T = 50;  // 2.5 s
    env.goal << 4.0, 4.0;
    env.start = rest_at(0.0, 0.0);
    env.obstacles = {{Vec2(1.0, 1.3), 0.40, 0.30},
                     {Vec2(2.1, 1.9), 0.40, 0.30},
                     {Vec2(3.1, 2.6), 0.35, 0.30},
                     {Vec2(1.9, 3.2), 0.35, 0.30},
                     {Vec2(2.9, 0.9), 0.35, 0.30}};
    p.ground_truth_weights = named_weights(env,
                                           {{"G", 1.0}, {"XReg", 0.02}, {"UReg", 0.02}},
                                           {{"G", 60.0}, {"XReg", 0.02}}, 40.0, 40.0);
    p.alternative_starts = {rest_at(4.0, 0.0), rest_at(0.0, 4.0), rest_at(-0.5, -0.5),
                            rest_at(2.0, -0.5), rest_at(4.5, 2.0)};
  } else {
    throw std::invalid_argument("make_preset: unknown preset '" + name + "'");
  }
  env.validate();
  return p;
}

Trajectory generate_demonstration(const ExperimentPreset& preset, const SolverConfig& oc_cfg) {
  const SolveResult res =
      solve(preset.env, preset.ground_truth_weights, preset.env.start, std::nullopt, oc_cfg);
  const double miss = (res.trajectory.states.back().position - preset.env.goal).norm();
  if (miss > preset.goal_tolerance)
    throw std::runtime_error("generate_demonstration: demo misses the goal by " +
                             std::to_string(miss) + " m on preset " + preset.name);
  if (collision_check(res.trajectory, preset.env))
    throw std::runtime_error("generate_demonstration: demo collides on preset " + preset.name);
  return res.trajectory;
}

bool collision_check(const Trajectory& tau, const EnvironmentSpec& env) {
  for (const auto& s : tau.states)
    for (const auto& ob : env.obstacles)
      if ((s.position - ob.center).norm() < ob.radius) return true;
  return false;
}

EvaluationReport evaluate_generalization(const WeightVector& w_learned,
                                         const ExperimentPreset& preset,
                                         const SolverConfig& oc_cfg) {
  const auto t_start = std::chrono::steady_clock::now();
  EvaluationReport report;

  const Trajectory demo = generate_demonstration(preset, oc_cfg);
  const double demo_cost_w_star =
      trajectory_cost(preset.ground_truth_weights, integrate_features(demo, preset.env));

  std::vector<std::pair<std::string, State>> starts;
  starts.emplace_back("original", preset.env.start);
  for (size_t i = 0; i < preset.alternative_starts.size(); ++i)
    starts.emplace_back("alt" + std::to_string(i + 1), preset.alternative_starts[i]);

  for (const auto& [label, start] : starts) {
    StartOutcome row;
    row.label = label;
    row.start = start;
    try {
      const SolveResult res = solve(preset.env, w_learned, start, std::nullopt, oc_cfg);
      const FeatureVector phi = integrate_features(res.trajectory, preset.env);
      row.reached_goal =
          (res.trajectory.states.back().position - preset.env.goal).norm() <= preset.goal_tolerance;
      row.collided = collision_check(res.trajectory, preset.env);
      row.cost_under_w_star = trajectory_cost(preset.ground_truth_weights, phi);
      row.cost_under_learned_w = trajectory_cost(w_learned, phi);
    } catch (const std::exception&) {
      row.solver_failed = true;
      row.cost_under_w_star = std::numeric_limits<double>::quiet_NaN();
      row.cost_under_learned_w = std::numeric_limits<double>::quiet_NaN();
    }
    report.outcomes.push_back(std::move(row));
  }

  report.ratio = report.outcomes.front().solver_failed
                     ? std::numeric_limits<double>::quiet_NaN()
                     : report.outcomes.front().cost_under_w_star / demo_cost_w_star;
  for (size_t i = 1; i < report.outcomes.size(); ++i) {
    const auto& row = report.outcomes[i];
    if (!row.solver_failed && row.reached_goal && !row.collided)
      ++report.alternatives_reached_collision_free;
  }
  report.wallclock_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return report;
}

std::vector<AblationOutcome> run_ablation(const ExperimentPreset& preset,
                                          const IRLConfig& cfg_base, const SolverConfig& oc_cfg,
                                          const std::optional<Trajectory>& demo_in) {
  struct VariantSpec {
    const char* label;
    bool subsampling, acceptance, regularization;
  };
  // Fig. 5 layout: (a) bare, (b) +sub-sampling, (c) b+acceptance,
  // (d) b+regularization, (e) everything.
  const VariantSpec variants[] = {{"a", false, false, false},
                                  {"b", true, false, false},
                                  {"c", true, true, false},
                                  {"d", true, false, true},
                                  {"e", true, true, true}};

  const Trajectory demo = demo_in ? *demo_in : generate_demonstration(preset, oc_cfg);

  std::vector<AblationOutcome> out;
  for (const auto& v : variants) {
    IRLConfig cfg = cfg_base;
    cfg.subsamples_N = v.subsampling ? cfg_base.subsamples_N : 1;
    cfg.step_acceptance = v.acceptance;
    if (!v.regularization) {
      cfg.lambda_l1 = 0.0;
      cfg.beta_l2 = 0.0;
    }

    AblationOutcome o;
    o.label = v.label;
    o.subsampling = v.subsampling;
    o.step_acceptance = v.acceptance;
    o.regularization = v.regularization;
    o.irl = run(demo, preset.env, cfg, oc_cfg, preset.ground_truth_weights);
    o.final_m2 = o.irl.final_m2;
    o.report = evaluate_generalization(o.irl.final_weights, preset, oc_cfg);
    out.push_back(std::move(o));
  }
  return out;
}

}  // namespace moirl
