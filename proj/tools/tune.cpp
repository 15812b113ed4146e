// Preset tuning harness: runs demo -> learn -> eval for one preset with
// optional weight overrides and prints the acceptance-relevant numbers.
// Not part of the shipped CLI; built on demand for calibration work.

#include <cstdio>
#include <cstdlib>
#include <string>

#include "moirl/cost.hpp"
#include "moirl/experiments.hpp"
#include "moirl/features.hpp"
#include "moirl/irl.hpp"

using namespace moirl;

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: tune <preset> [sG sX sU sObs tG tX tObs]\n");
    return 1;
  }
  ExperimentPreset preset = make_preset(argv[1]);
  if (const char* scale_env = std::getenv("TUNE_SCALE")) {
    const double s = std::atof(scale_env);
    preset.env.goal *= s;
    preset.env.start.position *= s;
    for (auto& ob : preset.env.obstacles) {
      ob.center *= s;
      ob.radius *= s;
      ob.activation_margin *= s;
    }
    for (auto& st : preset.alternative_starts) st.position *= s;
  }
  if (argc >= 9) {
    const int n = preset.env.num_obstacles();
    WeightVector& w = preset.ground_truth_weights;
    w(0) = std::atof(argv[2]);
    w(1) = std::atof(argv[3]);
    w(2) = std::atof(argv[4]);
    for (int i = 0; i < n; ++i) w(3 + i) = std::atof(argv[5]);
    const int ts = preset.env.stage_feature_count();
    w(ts + 0) = std::atof(argv[6]);
    w(ts + 1) = std::atof(argv[7]);
    for (int i = 0; i < n; ++i) w(ts + 2 + i) = std::atof(argv[8]);
  }

  SolverConfig oc_cfg;
  Trajectory demo;
  try {
    demo = generate_demonstration(preset, oc_cfg);
  } catch (const std::exception& e) {
    std::printf("DEMO-FAIL %s: %s\n", preset.name.c_str(), e.what());
    const SolveResult res =
        solve(preset.env, preset.ground_truth_weights, preset.env.start, std::nullopt, oc_cfg);
    std::printf("  miss=%.4f collided=%d\n",
                (res.trajectory.states.back().position - preset.env.goal).norm(),
                int(collision_check(res.trajectory, preset.env)));
    return 1;
  }
  const double demo_miss = (demo.states.back().position - preset.env.goal).norm();

  IRLConfig cfg;
  const IRLResult result = run(demo, preset.env, cfg, oc_cfg, preset.ground_truth_weights);
  const EvaluationReport report = evaluate_generalization(result.final_weights, preset, oc_cfg);

  std::printf("%s demo_miss=%.4f iters=%d term=%s final_m2=%.4g ratio=%.4f alts_ok=%d/5\n",
              preset.name.c_str(), demo_miss, result.outer_iterations,
              to_string(result.termination_reason), result.final_m2, report.ratio,
              report.alternatives_reached_collision_free);
  if (std::getenv("TUNE_VERBOSE")) {
    for (const auto& rec : result.iteration_log)
      std::printf("  it=%2d alpha=%-8.4g m1=%-10.4g m2=%-10.4g dev=%-8.4g\n", rec.iteration,
                  rec.alpha, rec.m1, rec.m2, rec.traj_deviation);
  }
  for (const auto& row : report.outcomes) {
    State start = row.start;
    const SolveResult res = solve(preset.env, result.final_weights, start, std::nullopt, oc_cfg);
    std::printf("  %-9s reached=%d collided=%d miss=%.4f cost*=%.4g\n", row.label.c_str(),
                int(row.reached_goal), int(row.collided),
                (res.trajectory.states.back().position - preset.env.goal).norm(),
                row.cost_under_w_star);
  }
  std::printf("  learned w:");
  for (int k = 0; k < result.final_weights.size(); ++k)
    std::printf(" %.3g", result.final_weights(k));
  std::printf("\n");
  return 0;
}
