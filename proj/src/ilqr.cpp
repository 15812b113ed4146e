#include "moirl/ilqr.hpp"

#include <Eigen/Cholesky>
#include <cmath>

#include "moirl/cost.hpp"
#include "moirl/dynamics.hpp"
#include "moirl/features.hpp"

namespace moirl {

namespace {

using Mat24 = Eigen::Matrix<double, 2, 4>;
using Mat42 = Eigen::Matrix<double, 4, 2>;

struct StageExpansion {
  Vec4 lx = Vec4::Zero();
  Vec2 lu = Vec2::Zero();
  Mat4 lxx = Mat4::Zero();
  Mat2 luu = Mat2::Zero();
};

// Weighted quadratization of the stage cost dt * w_s' phi_s(x, u).
StageExpansion stage_expansion(const State& x, const Control& u, const EnvironmentSpec& env,
                               const Eigen::Ref<const VecX>& w_stage) {
  const FeatureDerivatives der = feature_derivatives(x, u, env);
  StageExpansion e;
  for (int k = 0; k < env.stage_feature_count(); ++k) {
    const double wk = w_stage(k) * env.dt;
    if (wk == 0.0) continue;
    e.lx += wk * der.stage_grad_x[k];
    e.lu += wk * der.stage_grad_u[k];
    e.lxx += wk * der.stage_hess_xx[k];
    e.luu += wk * der.stage_hess_uu[k];
  }
  return e;
}

void terminal_expansion(const State& x, const EnvironmentSpec& env,
                        const Eigen::Ref<const VecX>& w_term, Vec4& vx, Mat4& vxx) {
  const FeatureDerivatives der = feature_derivatives(x, Control{}, env);
  vx.setZero();
  vxx.setZero();
  for (int k = 0; k < env.terminal_feature_count(); ++k) {
    const double wk = w_term(k);
    if (wk == 0.0) continue;
    vx += wk * der.terminal_grad_x[k];
    vxx += wk * der.terminal_hess_xx[k];
  }
}

}  // namespace

SolveResult solve(const EnvironmentSpec& env, const WeightVector& w, const State& x0,
                  const std::optional<Trajectory>& warm_start, const SolverConfig& cfg) {
  env.validate();
  cfg.validate();
  if (w.size() != env.feature_count())
    throw std::invalid_argument("solve: weight vector does not match environment feature count");
  if ((w.array() < 0.0).any())
    throw std::invalid_argument("solve: weights must be nonnegative");

  const int T = env.horizon_T;
  const double dt = env.dt;
  const auto w_stage = w.head(env.stage_feature_count());
  const auto w_term = w.tail(env.terminal_feature_count());

  // Constant double-integrator linearization.
  Mat4 A = Mat4::Identity();
  A(0, 2) = dt;
  A(1, 3) = dt;
  Mat42 B = Mat42::Zero();
  B(2, 0) = dt;
  B(3, 1) = dt;

  std::vector<Control> controls(T);
  if (warm_start) {
    if (warm_start->horizon() != T)
      throw std::invalid_argument("solve: warm start horizon does not match environment");
    controls = warm_start->controls;
  }

  const auto cost_of = [&](const Trajectory& tau) {
    return trajectory_cost(w, integrate_features(tau, env));
  };

  Trajectory tau = rollout(x0, controls, env);
  double cost = cost_of(tau);
  if (!std::isfinite(cost))
    throw std::runtime_error("solve: non-finite cost at initial rollout");

  SolveResult out;
  out.cost_trace.push_back(cost);

  std::vector<Vec2> k_ff(T);
  std::vector<Mat24> k_fb(T);
  double mu = cfg.initial_regularization;
  bool converged = false;
  int iter = 0;

  while (iter < cfg.max_iterations) {
    ++iter;

    // Backward pass on the quadratized cost; bump the regularizer and retry
    // if a Cholesky factorization fails (should not happen for PSD
    // Gauss-Newton Hessians, but guards roundoff).
    double d1 = 0.0, d2 = 0.0;
    bool bp_ok = false;
    while (!bp_ok) {
      d1 = d2 = 0.0;
      bp_ok = true;
      Vec4 vx;
      Mat4 vxx;
      terminal_expansion(tau.states[T], env, w_term, vx, vxx);
      for (int t = T - 1; t >= 0; --t) {
        const StageExpansion e = stage_expansion(tau.states[t], tau.controls[t], env, w_stage);
        const Vec4 qx = e.lx + A.transpose() * vx;
        const Vec2 qu = e.lu + B.transpose() * vx;
        const Mat4 qxx = e.lxx + A.transpose() * vxx * A;
        const Mat2 quu = e.luu + B.transpose() * vxx * B;
        const Mat24 qux = B.transpose() * vxx * A;

        const Mat2 quu_reg = quu + mu * Mat2::Identity();
        Eigen::LLT<Mat2> llt(quu_reg);
        if (llt.info() != Eigen::Success) {
          mu = std::min(mu * cfg.regularization_growth, cfg.regularization_max);
          bp_ok = false;
          break;
        }
        k_ff[t] = -llt.solve(qu);
        k_fb[t] = -llt.solve(qux);

        d1 += k_ff[t].dot(qu);
        d2 += 0.5 * k_ff[t].dot(quu * k_ff[t]);
        vx = qx + k_fb[t].transpose() * quu * k_ff[t] + k_fb[t].transpose() * qu +
             qux.transpose() * k_ff[t];
        vxx = qxx + k_fb[t].transpose() * quu * k_fb[t] + k_fb[t].transpose() * qux +
              qux.transpose() * k_fb[t];
        vxx = 0.5 * (vxx + vxx.transpose()).eval();
      }
      if (!bp_ok && mu >= cfg.regularization_max) {
        out.trajectory = tau;
        out.converged = false;
        out.iterations_used = iter;
        out.final_cost = cost;
        return out;
      }
    }

    // Already at a stationary point: the quadratic model predicts no
    // meaningful decrease.
    const double expected = -(d1 + d2);
    if (expected <= cfg.cost_tolerance * std::max(1.0, std::abs(cost))) {
      converged = true;
      break;
    }

    // Forward pass with backtracking line search; accept only strict
    // cost decrease.
    bool accepted = false;
    double improvement = 0.0;
    double alpha = 1.0;
    for (int ls = 0; ls < cfg.line_search_steps; ++ls, alpha *= 0.5) {
      Trajectory cand;
      cand.dt = dt;
      cand.states.resize(T + 1);
      cand.controls.resize(T);
      cand.states[0] = x0;
      for (int t = 0; t < T; ++t) {
        const Vec4 dx = cand.states[t].as_vec4() - tau.states[t].as_vec4();
        cand.controls[t].force = tau.controls[t].force + alpha * k_ff[t] + k_fb[t] * dx;
        cand.states[t + 1] = step_dynamics(cand.states[t], cand.controls[t], dt);
      }
      const double cand_cost = cost_of(cand);
      if (!std::isfinite(cand_cost)) continue;
      if (cand_cost < cost) {
        improvement = cost - cand_cost;
        tau = std::move(cand);
        cost = cand_cost;
        accepted = true;
        break;
      }
    }

    if (accepted) {
      out.cost_trace.push_back(cost);
      mu = std::max(mu * cfg.regularization_shrink, cfg.regularization_min);
      if (improvement < cfg.cost_tolerance * std::max(1.0, std::abs(cost))) {
        converged = true;
        break;
      }
    } else {
      mu *= cfg.regularization_growth;
      if (mu > cfg.regularization_max) break;
    }
  }

  out.trajectory = tau;
  out.converged = converged;
  out.iterations_used = iter;
  out.final_cost = cost_of(out.trajectory);
  if (!std::isfinite(out.final_cost))
    throw std::runtime_error("solve: non-finite final cost");
  return out;
}

}  // namespace moirl
