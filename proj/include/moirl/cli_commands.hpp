#pragma once

#include <string>

namespace moirl {

// Exit codes: 0 success, 1 IO, 2 config, 3 numeric failure.

struct DemoArgs {
  std::string env_file;
  std::string weights_file;  // empty: use the environment's embedded weights
  std::string out_file;
};
int cli_demo(const DemoArgs& args);

struct LearnArgs {
  std::string env_file;
  std::string demo_file;
  std::string out_dir;
  int window_L = 1;
  int subsamples_N = 20;
  double lambda_l1 = 1e-6;
  double beta_l2 = 1e-2;
  bool bounded_weights = false;
  bool disable_step_acceptance = false;
  bool disable_regularization = false;
  bool disable_subsampling = false;
  int max_iterations = 100;
  double m2_tol = 1e-3;
};
int cli_learn(const LearnArgs& args);

struct EvalArgs {
  std::string env_file;
  std::string weights_file;
  std::string truth_weights_file;  // empty: use the environment's embedded weights
  std::string out_file;
};
int cli_eval(const EvalArgs& args);

struct AblateArgs {
  std::string env_file;
  std::string demo_file;
  std::string out_dir;
};
int cli_ablate(const AblateArgs& args);

struct MakeEnvArgs {
  std::string preset_name;  // pm1 | pm2 | pm3
  std::string out_file;
};
int cli_make_env(const MakeEnvArgs& args);

}  // namespace moirl
