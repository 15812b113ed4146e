#include "moirl/cli_commands.hpp"

#include <cstdio>
#include <filesystem>
#include <iostream>

#include "moirl/experiments.hpp"
#include "moirl/features.hpp"
#include "moirl/io.hpp"
#include "moirl/irl.hpp"

namespace moirl {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

int dispatch(const char* command, const std::function<void()>& body) {
  try {
    body();
    return kExitOk;
  } catch (const IoError& e) {
    std::cerr << command << ": io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const ConfigError& e) {
    std::cerr << command << ": config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << command << ": config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << command << ": numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  }
}

void ensure_directory(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
}

std::string join(const std::string& dir, const std::string& file) {
  return (std::filesystem::path(dir) / file).string();
}

}  // namespace

int cli_demo(const DemoArgs& args) {
  return dispatch("demo", [&] {
    ExperimentPreset preset = load_environment(args.env_file);
    if (!args.weights_file.empty())
      preset.ground_truth_weights =
          load_weights_csv(args.weights_file, preset.env.feature_names());
    const Trajectory demo = generate_demonstration(preset, SolverConfig{});
    save_trajectory_csv(demo, args.out_file);
  });
}

int cli_learn(const LearnArgs& args) {
  return dispatch("learn", [&] {
    const ExperimentPreset preset = load_environment(args.env_file);
    const Trajectory demo = load_trajectory_csv(args.demo_file);

    IRLConfig cfg;
    cfg.window_L = args.window_L;
    cfg.subsamples_N = args.disable_subsampling ? 1 : args.subsamples_N;
    cfg.lambda_l1 = args.disable_regularization ? 0.0 : args.lambda_l1;
    cfg.beta_l2 = args.disable_regularization ? 0.0 : args.beta_l2;
    cfg.step_acceptance = !args.disable_step_acceptance;
    if (args.bounded_weights) cfg.weight_upper_bound = 1.0;
    cfg.max_outer_iterations = args.max_iterations;
    cfg.m2_convergence_tol = args.m2_tol;

    ensure_directory(args.out_dir);
    RunManifest manifest;
    manifest.tool_version = kToolVersion;
    manifest.command = "learn";
    manifest.preset_name = preset.name;
    manifest.started_at = current_timestamp_utc();
    manifest.config = {
        {"env_file", args.env_file},
        {"demo_file", args.demo_file},
        {"window_L", std::to_string(cfg.window_L)},
        {"subsamples_N", std::to_string(cfg.subsamples_N)},
        {"lambda_l1", format_double(cfg.lambda_l1)},
        {"beta_l2", format_double(cfg.beta_l2)},
        {"bounded_weights", args.bounded_weights ? "true" : "false"},
        {"step_acceptance", cfg.step_acceptance ? "true" : "false"},
        {"max_outer_iterations", std::to_string(cfg.max_outer_iterations)},
        {"m2_convergence_tol", format_double(cfg.m2_convergence_tol)},
    };

    const IRLResult result =
        run(demo, preset.env, cfg, SolverConfig{}, preset.ground_truth_weights);

    const std::string weights_path = join(args.out_dir, "weights.csv");
    const std::string metrics_path = join(args.out_dir, "metrics.csv");
    const std::string samples_path = join(args.out_dir, "samples.csv");
    const std::string manifest_path = join(args.out_dir, "manifest.json");
    save_weights_csv(result.final_weights, preset.env.feature_names(), weights_path);
    save_metrics_csv(result.iteration_log, metrics_path);
    save_samples_csv(result.sampled_trajectories, samples_path);

    manifest.finished_at = current_timestamp_utc();
    manifest.termination_reason = to_string(result.termination_reason);
    manifest.outer_iterations = result.outer_iterations;
    manifest.outputs = {{"weights", weights_path},
                        {"metrics", metrics_path},
                        {"samples", samples_path}};
    save_manifest(manifest, manifest_path);

    std::cout << "learn: " << result.outer_iterations << " iterations, termination "
              << to_string(result.termination_reason) << ", final m2 "
              << format_double(result.final_m2) << "\n";
  });
}

int cli_eval(const EvalArgs& args) {
  return dispatch("eval", [&] {
    ExperimentPreset preset = load_environment(args.env_file);
    if (!args.truth_weights_file.empty())
      preset.ground_truth_weights =
          load_weights_csv(args.truth_weights_file, preset.env.feature_names());
    const WeightVector learned = load_weights_csv(args.weights_file, preset.env.feature_names());

    const EvaluationReport report = evaluate_generalization(learned, preset, SolverConfig{});
    atomic_write(args.out_file, report_to_json(report, args.env_file, args.weights_file));
    std::cout << format_report_table(report);
  });
}

int cli_ablate(const AblateArgs& args) {
  return dispatch("ablate", [&] {
    const ExperimentPreset preset = load_environment(args.env_file);
    const Trajectory demo = load_trajectory_csv(args.demo_file);

    ensure_directory(args.out_dir);
    const auto outcomes = run_ablation(preset, IRLConfig{}, SolverConfig{}, demo);

    std::string summary = "{\n  \"variants\": [\n";
    std::vector<std::pair<double, std::string>> order;
    for (size_t i = 0; i < outcomes.size(); ++i) {
      const auto& o = outcomes[i];
      const std::string metrics_path = join(args.out_dir, "metrics_" + o.label + ".csv");
      save_metrics_csv(o.irl.iteration_log, metrics_path);
      order.emplace_back(o.final_m2, o.label);
      summary += "    {\"label\": \"" + o.label + "\", \"subsampling\": " +
                 (o.subsampling ? "true" : "false") + ", \"step_acceptance\": " +
                 (o.step_acceptance ? "true" : "false") + ", \"regularization\": " +
                 (o.regularization ? "true" : "false") + ", \"final_m2\": " +
                 format_double(o.final_m2) +
                 ", \"outer_iterations\": " + std::to_string(o.irl.outer_iterations) +
                 ", \"alternatives_reached_collision_free\": " +
                 std::to_string(o.report.alternatives_reached_collision_free) +
                 ", \"ratio\": " + format_double(o.report.ratio) + ", \"metrics\": \"" +
                 metrics_path + "\"}" + (i + 1 < outcomes.size() ? ",\n" : "\n");
    }
    std::sort(order.begin(), order.end());
    summary += "  ],\n  \"ranking_by_final_m2\": [";
    for (size_t i = 0; i < order.size(); ++i)
      summary += "\"" + order[i].second + "\"" + (i + 1 < order.size() ? ", " : "");
    summary += "]\n}\n";
    atomic_write(join(args.out_dir, "summary.json"), summary);

    for (const auto& o : outcomes)
      std::cout << "variant " << o.label << ": final m2 " << format_double(o.final_m2)
                << ", alternatives ok " << o.report.alternatives_reached_collision_free << "/"
                << preset.alternative_starts.size() << "\n";
  });
}

int cli_make_env(const MakeEnvArgs& args) {
  return dispatch("make-env", [&] {
    const ExperimentPreset preset = make_preset(args.preset_name);
    save_environment(preset, args.out_file);
  });
}

}  // namespace moirl
