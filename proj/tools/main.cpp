#include <CLI11.hpp>

#include "moirl/cli_commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"MO-IRL: max-entropy inverse reinforcement learning from a single demonstration"};
  app.require_subcommand(1);

  moirl::DemoArgs demo_args;
  auto* demo = app.add_subcommand("demo", "Generate a demonstration trajectory with an OC solve");
  demo->add_option("--env", demo_args.env_file, "environment JSON file")->required();
  demo->add_option("--weights", demo_args.weights_file,
                   "weights CSV (default: environment's embedded weights)");
  demo->add_option("--out", demo_args.out_file, "output trajectory CSV")->required();

  moirl::LearnArgs learn_args;
  auto* learn = app.add_subcommand("learn", "Recover cost weights from a demonstration");
  learn->add_option("--env", learn_args.env_file, "environment JSON file")->required();
  learn->add_option("--demo", learn_args.demo_file, "demonstration trajectory CSV")->required();
  learn->add_option("--out-dir", learn_args.out_dir, "output directory")->required();
  learn->add_option("--window", learn_args.window_L, "moving window size L")
      ->capture_default_str();
  learn->add_option("--subsamples", learn_args.subsamples_N, "truncation grid size N")
      ->capture_default_str();
  learn->add_option("--lambda", learn_args.lambda_l1, "L1 regularization weight")
      ->capture_default_str();
  learn->add_option("--beta", learn_args.beta_l2, "L2 regularization weight")
      ->capture_default_str();
  learn->add_flag("--bounded-weights", learn_args.bounded_weights, "constrain weights to [0, 1]");
  learn->add_flag("--disable-step-acceptance", learn_args.disable_step_acceptance,
                  "take every step at alpha = 1");
  learn->add_flag("--disable-regularization", learn_args.disable_regularization,
                  "drop the elastic-net terms");
  learn->add_flag("--disable-subsampling", learn_args.disable_subsampling,
                  "use only full-length trajectories (N = 1)");
  learn->add_option("--max-iterations", learn_args.max_iterations, "outer iteration cap")
      ->capture_default_str();
  learn->add_option("--m2-tol", learn_args.m2_tol, "feature-distance convergence tolerance")
      ->capture_default_str();

  moirl::EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "Evaluate learned weights across start points");
  eval->add_option("--env", eval_args.env_file, "environment JSON file")->required();
  eval->add_option("--weights", eval_args.weights_file, "learned weights CSV")->required();
  eval->add_option("--truth-weights", eval_args.truth_weights_file,
                   "ground-truth weights CSV (default: environment's embedded weights)");
  eval->add_option("--out", eval_args.out_file, "output report JSON")->required();

  moirl::AblateArgs ablate_args;
  auto* ablate = app.add_subcommand("ablate", "Run the five-variant ablation study");
  ablate->add_option("--env", ablate_args.env_file, "environment JSON file")->required();
  ablate->add_option("--demo", ablate_args.demo_file, "demonstration trajectory CSV")->required();
  ablate->add_option("--out-dir", ablate_args.out_dir, "output directory")->required();

  moirl::MakeEnvArgs make_env_args;
  auto* make_env = app.add_subcommand("make-env", "Write a built-in preset environment file");
  make_env->add_option("--preset", make_env_args.preset_name, "pm1 | pm2 | pm3")->required();
  make_env->add_option("--out", make_env_args.out_file, "output environment JSON")->required();

  CLI11_PARSE(app, argc, argv);

  if (demo->parsed()) return moirl::cli_demo(demo_args);
  if (learn->parsed()) return moirl::cli_learn(learn_args);
  if (eval->parsed()) return moirl::cli_eval(eval_args);
  if (ablate->parsed()) return moirl::cli_ablate(ablate_args);
  if (make_env->parsed()) return moirl::cli_make_env(make_env_args);
  return 2;
}
