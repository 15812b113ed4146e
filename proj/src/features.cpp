#include "moirl/features.hpp"

#include <cmath>

namespace moirl {

namespace {

// Clipped penetration depth of p into the activation shell of an obstacle:
// max(0, l - (|p - O| - r)). Zero at and beyond distance r + l from center.
double obstacle_penetration(const Vec2& p, const ObstacleSpec& ob) {
  const double signed_distance = (p - ob.center).norm() - ob.radius;
  return std::max(0.0, ob.activation_margin - signed_distance);
}

}  // namespace

VecX stage_features(const State& x, const Control& u, const EnvironmentSpec& env) {
  VecX phi(env.stage_feature_count());
  phi(0) = (x.position - env.goal).squaredNorm() + x.velocity.squaredNorm();
  phi(1) = x.as_vec4().squaredNorm();
  phi(2) = u.force.squaredNorm();
  for (int i = 0; i < env.num_obstacles(); ++i) {
    const double pen = obstacle_penetration(x.position, env.obstacles[i]);
    phi(3 + i) = pen * pen;
  }
  return phi;
}

VecX terminal_features(const State& x, const EnvironmentSpec& env) {
  VecX phi(env.terminal_feature_count());
  phi(0) = (x.position - env.goal).squaredNorm() + x.velocity.squaredNorm();
  phi(1) = x.as_vec4().squaredNorm();
  for (int i = 0; i < env.num_obstacles(); ++i) {
    const double pen = obstacle_penetration(x.position, env.obstacles[i]);
    phi(2 + i) = pen * pen;
  }
  return phi;
}

FeatureVector integrate_features(const Trajectory& tau, const EnvironmentSpec& env) {
  return truncated_features(tau, 0, env);
}

FeatureVector truncated_features(const Trajectory& tau, int d, const EnvironmentSpec& env) {
  tau.validate();
  const int T = tau.horizon();
  if (T != env.horizon_T)
    throw std::invalid_argument("truncated_features: trajectory horizon does not match environment");
  if (d < 0 || d > T)
    throw std::invalid_argument("truncated_features: truncation index out of range");

  const int ns = env.stage_feature_count();
  FeatureVector phi = FeatureVector::Zero(env.feature_count());
  for (int t = d; t < T; ++t)
    phi.head(ns) += stage_features(tau.states[t], tau.controls[t], env);
  phi.head(ns) *= tau.dt;
  phi.tail(env.terminal_feature_count()) = terminal_features(tau.states[T], env);
  return phi;
}

std::vector<int> subsample_grid(int T, int N) {
  if (N < 1 || N > T)
    throw std::invalid_argument("subsample_grid: require 1 <= N <= T");
  std::vector<int> grid(N);
  for (int k = 0; k < N; ++k)
    grid[k] = static_cast<int>(std::lround(static_cast<double>(k) * T / N));
  return grid;
}

double theta_coefficient(int d, int T) {
  return static_cast<double>(T - d + 1) / static_cast<double>(T + 1);
}

FeatureDerivatives feature_derivatives(const State& x, const Control& u,
                                       const EnvironmentSpec& env) {
  const int n_obs = env.num_obstacles();
  FeatureDerivatives der;
  der.stage_grad_x.assign(env.stage_feature_count(), Vec4::Zero());
  der.stage_grad_u.assign(env.stage_feature_count(), Vec2::Zero());
  der.stage_hess_xx.assign(env.stage_feature_count(), Mat4::Zero());
  der.stage_hess_uu.assign(env.stage_feature_count(), Mat2::Zero());
  der.terminal_grad_x.assign(env.terminal_feature_count(), Vec4::Zero());
  der.terminal_hess_xx.assign(env.terminal_feature_count(), Mat4::Zero());

  // G: quadratic in (p - goal, v); exact Hessian 2I.
  Vec4 g_grad;
  g_grad << 2.0 * (x.position - env.goal), 2.0 * x.velocity;
  der.stage_grad_x[0] = g_grad;
  der.stage_hess_xx[0] = 2.0 * Mat4::Identity();
  der.terminal_grad_x[0] = g_grad;
  der.terminal_hess_xx[0] = 2.0 * Mat4::Identity();

  // XReg: |x|^2.
  der.stage_grad_x[1] = 2.0 * x.as_vec4();
  der.stage_hess_xx[1] = 2.0 * Mat4::Identity();
  der.terminal_grad_x[1] = der.stage_grad_x[1];
  der.terminal_hess_xx[1] = der.stage_hess_xx[1];

  // UReg: |u|^2 (stage only).
  der.stage_grad_u[2] = 2.0 * u.force;
  der.stage_hess_uu[2] = 2.0 * Mat2::Identity();

  // Obs_i: pen(p)^2 with pen = max(0, l - (|p - O| - r)).
  // grad = -2 pen (p - O)/|p - O|; Gauss-Newton Hessian 2 n n' (n = unit
  // direction), which is PSD; zero outside the margin and at the center.
  for (int i = 0; i < n_obs; ++i) {
    const ObstacleSpec& ob = env.obstacles[i];
    const Vec2 delta = x.position - ob.center;
    const double dist = delta.norm();
    const double pen = std::max(0.0, ob.activation_margin - (dist - ob.radius));
    if (pen <= 0.0 || dist < 1e-12) continue;
    const Vec2 n = delta / dist;
    Vec4 grad = Vec4::Zero();
    grad.head<2>() = -2.0 * pen * n;
    Mat4 hess = Mat4::Zero();
    hess.topLeftCorner<2, 2>() = 2.0 * (n * n.transpose());
    der.stage_grad_x[3 + i] = grad;
    der.stage_hess_xx[3 + i] = hess;
    der.terminal_grad_x[2 + i] = grad;
    der.terminal_hess_xx[2 + i] = hess;
  }
  return der;
}

}  // namespace moirl
