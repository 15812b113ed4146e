#include "moirl/irl.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "moirl/cost.hpp"
#include "moirl/features.hpp"

namespace moirl {

namespace {

constexpr double kGammaClampLog = 69.0775527898213705;  // log(1e30)
constexpr double kBoxEpsilon = 1e-9;

// Stacked-state L2 distance between two trajectories of equal horizon.
double state_deviation(const Trajectory& a, const Trajectory& b) {
  double sq = 0.0;
  for (size_t t = 0; t < a.states.size(); ++t)
    sq += (a.states[t].as_vec4() - b.states[t].as_vec4()).squaredNorm();
  return std::sqrt(sq);
}

}  // namespace

TrajectoryFeatures featurize_on_grid(const Trajectory& tau, const EnvironmentSpec& env,
                                     const std::vector<int>& grid) {
  TrajectoryFeatures out;
  out.truncated.reserve(grid.size());
  for (int d : grid) out.truncated.push_back(truncated_features(tau, d, env));
  out.full = grid.empty() || grid.front() != 0 ? integrate_features(tau, env)
                                               : out.truncated.front();
  return out;
}

IRLDataset build_dataset(const WeightVector& w, const TrajectoryFeatures& demo,
                         const std::deque<TrajectoryFeatures>& window,
                         const std::vector<double>& thetas) {
  IRLDataset ds;
  ds.feature_count = static_cast<int>(demo.full.size());
  ds.thetas = thetas;
  ds.phi_star_d = demo.truncated;
  ds.gammas.reserve(window.size());
  for (const auto& entry : window)
    ds.gammas.push_back(compute_gamma(w, entry.full, demo.full));
  ds.deltas.resize(thetas.size());
  for (size_t d = 0; d < thetas.size(); ++d) {
    ds.deltas[d].reserve(window.size());
    for (const auto& entry : window)
      ds.deltas[d].push_back(entry.truncated[d] - demo.truncated[d]);
  }
  return ds;
}

double compute_gamma(const WeightVector& w, const FeatureVector& phi_i,
                     const FeatureVector& phi_star) {
  if (w.size() != phi_i.size() || w.size() != phi_star.size())
    throw std::invalid_argument("compute_gamma: dimension mismatch");
  const double exponent =
      std::clamp(-w.dot(phi_i - phi_star), -kGammaClampLog, kGammaClampLog);
  return std::exp(exponent);
}

double nll_objective(const VecX& dw, const IRLDataset& dataset, double lambda_l1,
                     double beta_l2) {
  if (dw.size() != dataset.feature_count)
    throw std::invalid_argument("nll_objective: dimension mismatch");
  double value = 0.0;
  for (size_t d = 0; d < dataset.thetas.size(); ++d) {
    // log(1 + sum_i gamma_i e^{-dw'Delta}) via max-subtraction; the "1" is
    // the demonstration's own exp(0) term.
    double m = 0.0;
    const auto& deltas = dataset.deltas[d];
    for (size_t i = 0; i < deltas.size(); ++i)
      m = std::max(m, std::log(dataset.gammas[i]) - dw.dot(deltas[i]));
    double sum = std::exp(-m);
    for (size_t i = 0; i < deltas.size(); ++i)
      sum += std::exp(std::log(dataset.gammas[i]) - dw.dot(deltas[i]) - m);
    value += dataset.thetas[d] * (m + std::log(sum));
  }
  value += lambda_l1 * dw.lpNorm<1>() + 0.5 * beta_l2 * dw.squaredNorm();
  if (!std::isfinite(value))
    throw std::runtime_error("nll_objective: non-finite objective");
  return value;
}

VecX nll_gradient(const VecX& dw, const IRLDataset& dataset, double /*lambda_l1*/,
                  double beta_l2) {
  if (dw.size() != dataset.feature_count)
    throw std::invalid_argument("nll_gradient: dimension mismatch");
  VecX grad = beta_l2 * dw;
  for (size_t d = 0; d < dataset.thetas.size(); ++d) {
    const auto& deltas = dataset.deltas[d];
    double m = 0.0;
    for (size_t i = 0; i < deltas.size(); ++i)
      m = std::max(m, std::log(dataset.gammas[i]) - dw.dot(deltas[i]));
    double denom = std::exp(-m);
    VecX numer = VecX::Zero(dw.size());
    for (size_t i = 0; i < deltas.size(); ++i) {
      const double e = std::exp(std::log(dataset.gammas[i]) - dw.dot(deltas[i]) - m);
      denom += e;
      numer -= e * deltas[i];
    }
    grad += dataset.thetas[d] / denom * numer;
  }
  return grad;
}

VecX solve_step_direction(const WeightVector& w, const IRLDataset& dataset,
                          const IRLConfig& cfg) {
  cfg.validate();
  if (dataset.empty())
    throw std::invalid_argument("solve_step_direction: empty dataset");
  if (w.size() != dataset.feature_count)
    throw std::invalid_argument("solve_step_direction: dimension mismatch");

  const int n = static_cast<int>(w.size());
  // Feasible box: w + dw stays strictly positive (Delta w > -w), and below
  // the upper bound in bounded mode.
  const VecX lo = -w.array() + kBoxEpsilon;
  const VecX hi = cfg.weight_upper_bound
                      ? VecX(VecX::Constant(n, *cfg.weight_upper_bound) - w)
                      : VecX(VecX::Constant(n, std::numeric_limits<double>::infinity()));

  const auto prox = [&](const VecX& v, double step) {
    VecX out(n);
    const double thr = step * cfg.lambda_l1;
    for (int j = 0; j < n; ++j) {
      double s = v(j);
      s = s > thr ? s - thr : (s < -thr ? s + thr : 0.0);  // soft threshold
      out(j) = std::clamp(s, lo(j), hi(j));
    }
    return out;
  };

  const auto smooth = [&](const VecX& x) {
    return nll_objective(x, dataset, 0.0, cfg.beta_l2);
  };

  VecX x = prox(VecX::Zero(n), 0.0);
  double fx = smooth(x);
  double step = 1.0;
  for (int it = 0; it < cfg.inner_max_iterations; ++it) {
    const VecX g = nll_gradient(x, dataset, cfg.lambda_l1, cfg.beta_l2);
    VecX cand = prox(x - step * g, step);
    // Backtrack until the quadratic upper bound holds at the candidate.
    for (int bt = 0; bt < 60; ++bt) {
      const VecX diff = cand - x;
      const double bound = fx + g.dot(diff) + diff.squaredNorm() / (2.0 * step);
      if (smooth(cand) <= bound + 1e-15) break;
      step *= 0.5;
      cand = prox(x - step * g, step);
    }
    const double move = (cand - x).norm();
    x = cand;
    fx = smooth(x);
    if (move < cfg.inner_step_tol) break;
  }
  return x;
}

double merit_m1(const WeightVector& w, const FeatureVector& phi_star,
                const FeatureVector& phi_tilde) {
  if (w.size() != phi_star.size() || w.size() != phi_tilde.size())
    throw std::invalid_argument("merit_m1: dimension mismatch");
  const double gap = w.dot(phi_star) - w.dot(phi_tilde);
  return 0.5 * gap * gap;
}

double merit_m2(const FeatureVector& phi_star, const FeatureVector& phi_tilde) {
  if (phi_star.size() != phi_tilde.size())
    throw std::invalid_argument("merit_m2: dimension mismatch");
  return (phi_star - phi_tilde).norm();
}

StepOutcome accept_step(const WeightVector& w, const VecX& dw, const FeatureVector& phi_star,
                        const FeatureVector& phi_tilde_prev, double prev_m1, double prev_m2,
                        const OcOracle& oracle, const IRLConfig& cfg) {
  cfg.validate();
  StepOutcome out;

  // Directional derivative of m1 along dw with phi_tilde held at the
  // previous accepted trajectory (the OC dependence is not differentiated).
  const VecX bar = phi_star - phi_tilde_prev;
  const double slope = bar.dot(dw);
  const double g0 = w.dot(bar) * slope;
  const bool wolfe_usable = g0 < 0.0;  // m1 branch needs a descent direction

  double alpha = 1.0;
  for (int trial = 0; trial < cfg.max_step_trials; ++trial) {
    out.trials_used = trial + 1;
    const WeightVector w_c = w + alpha * dw;
    const auto sample = oracle(w_c);
    if (sample) {
      const double m1 = merit_m1(w_c, phi_star, sample->features);
      const double m2 = merit_m2(phi_star, sample->features);
      bool ok = false;
      if (wolfe_usable) {
        const bool armijo = m1 <= prev_m1 + cfg.wolfe_c1 * alpha * g0;
        const double g_alpha = w_c.dot(bar) * slope;
        const bool curvature = std::abs(g_alpha) <= cfg.wolfe_c2 * std::abs(g0);
        ok = armijo && curvature;
      }
      if (!ok && m2 < prev_m2) ok = true;
      if (ok) {
        out.accepted = true;
        out.new_w = w_c;
        out.new_trajectory = sample->trajectory;
        out.new_features = sample->features;
        out.new_m1 = m1;
        out.new_m2 = m2;
        out.alpha_used = alpha;
        return out;
      }
    }
    alpha *= cfg.alpha_shrink;
  }
  return out;
}

StepOutcome accept_step(const WeightVector& w, const VecX& dw, const FeatureVector& phi_star,
                        const FeatureVector& phi_tilde_prev, double prev_m1, double prev_m2,
                        const EnvironmentSpec& env, const Trajectory& warm_start,
                        const SolverConfig& oc_cfg, const IRLConfig& cfg) {
  const OcOracle oracle = [&](const WeightVector& w_c) -> std::optional<OcSample> {
    try {
      const SolveResult res = solve(env, w_c, env.start, warm_start, oc_cfg);
      return OcSample{res.trajectory, integrate_features(res.trajectory, env)};
    } catch (const std::exception&) {
      return std::nullopt;
    }
  };
  return accept_step(w, dw, phi_star, phi_tilde_prev, prev_m1, prev_m2, oracle, cfg);
}

const char* to_string(TerminationReason reason) {
  switch (reason) {
    case TerminationReason::step_search_exhausted: return "step_search_exhausted";
    case TerminationReason::m2_below_tol: return "m2_below_tol";
    case TerminationReason::max_iterations: return "max_iterations";
  }
  return "unknown";
}

IRLResult run(const Trajectory& tau_star, const EnvironmentSpec& env, const IRLConfig& cfg,
              const SolverConfig& oc_cfg, const std::optional<WeightVector>& ground_truth) {
  env.validate();
  cfg.validate();
  tau_star.validate();
  if (tau_star.horizon() != env.horizon_T)
    throw std::invalid_argument("run: demonstration horizon does not match environment");

  const int T = env.horizon_T;
  const int K = env.feature_count();
  const std::vector<int> grid = subsample_grid(T, cfg.subsamples_N);
  std::vector<double> thetas(grid.size());
  for (size_t k = 0; k < grid.size(); ++k) thetas[k] = theta_coefficient(grid[k], T);

  const TrajectoryFeatures demo = featurize_on_grid(tau_star, env, grid);

  IRLResult out;
  const auto t_start = std::chrono::steady_clock::now();
  const auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  };

  WeightVector w = WeightVector::Constant(K, cfg.w_init_value);

  // Algorithm bootstrap: the first partition sample is OC at the small
  // uniform weights. A failure here is fatal.
  const SolveResult init = solve(env, w, env.start, std::nullopt, oc_cfg);
  Trajectory current = init.trajectory;
  TrajectoryFeatures current_feats = featurize_on_grid(current, env, grid);
  std::deque<TrajectoryFeatures> window{current_feats};
  out.sampled_trajectories.push_back(current);

  double m1_accepted = std::numeric_limits<double>::infinity();
  double m2_accepted = std::numeric_limits<double>::infinity();
  out.termination_reason = TerminationReason::max_iterations;

  for (int outer = 1; outer <= cfg.max_outer_iterations; ++outer) {
    out.outer_iterations = outer;
    const IRLDataset dataset = build_dataset(w, demo, window, thetas);
    const VecX dw = solve_step_direction(w, dataset, cfg);

    StepOutcome step;
    if (cfg.step_acceptance) {
      step = accept_step(w, dw, demo.full, current_feats.full, m1_accepted, m2_accepted, env,
                         current, oc_cfg, cfg);
      if (!step.accepted) {
        out.termination_reason = TerminationReason::step_search_exhausted;
        break;
      }
    } else {
      // Ablation variant: take the full step unconditionally; a failed OC
      // solve keeps the previous sample.
      step.accepted = true;
      step.new_w = w + dw;
      step.alpha_used = 1.0;
      try {
        const SolveResult res = solve(env, step.new_w, env.start, current, oc_cfg);
        step.new_trajectory = res.trajectory;
        step.new_features = integrate_features(res.trajectory, env);
      } catch (const std::exception&) {
        step.new_trajectory = current;
        step.new_features = current_feats.full;
      }
      step.new_m1 = merit_m1(step.new_w, demo.full, step.new_features);
      step.new_m2 = merit_m2(demo.full, step.new_features);
    }

    w = step.new_w;
    current = step.new_trajectory;
    current_feats = featurize_on_grid(current, env, grid);
    m1_accepted = step.new_m1;
    m2_accepted = step.new_m2;
    window.push_back(current_feats);
    while (static_cast<int>(window.size()) > cfg.window_L) window.pop_front();
    out.sampled_trajectories.push_back(current);

    IterationRecord rec;
    rec.iteration = outer;
    rec.weights = w;
    rec.alpha = step.alpha_used;
    rec.m1 = step.new_m1;
    rec.m2 = step.new_m2;
    rec.traj_deviation = state_deviation(current, tau_star);
    rec.cost_gap_learned_w = std::abs(w.dot(demo.full) - w.dot(current_feats.full));
    rec.cost_gap_true_w =
        ground_truth ? std::abs(ground_truth->dot(demo.full) - ground_truth->dot(current_feats.full))
                     : std::numeric_limits<double>::quiet_NaN();
    rec.wallclock_s = elapsed();
    out.iteration_log.push_back(std::move(rec));

    if (m2_accepted < cfg.m2_convergence_tol) {
      out.termination_reason = TerminationReason::m2_below_tol;
      break;
    }
  }

  out.final_weights = w;
  out.final_trajectory = current;
  out.final_m2 = merit_m2(demo.full, current_feats.full);
  return out;
}

}  // namespace moirl
