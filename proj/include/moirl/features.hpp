#pragma once

#include <vector>

#include "moirl/types.hpp"

namespace moirl {

// Per-feature first/second derivatives at one (x, u) point, used by the
// trajectory optimizer. Hessians are Gauss-Newton approximations where the
// exact ones are not PSD (obstacle features); cross terms x-u are zero for
// every feature in this model.
struct FeatureDerivatives {
  std::vector<Vec4> stage_grad_x;
  std::vector<Vec2> stage_grad_u;
  std::vector<Mat4> stage_hess_xx;
  std::vector<Mat2> stage_hess_uu;
  std::vector<Vec4> terminal_grad_x;
  std::vector<Mat4> terminal_hess_xx;
};

/// Stage feature values in layout order (G, XReg, UReg, Obs_1..Obs_n):
///   G    = |p - goal|^2 + |v|^2
///   XReg = |x|^2 (full 4-dim state)
///   UReg = |u|^2
///   Obs_i = max(0, l_i - (|p - O_i| - r_i))^2
VecX stage_features(const State& x, const Control& u, const EnvironmentSpec& env);

/// Terminal feature values (stage set excluding UReg).
VecX terminal_features(const State& x, const EnvironmentSpec& env);

/// Time-integrated features: sum_t stage(x_t, u_t) * dt + terminal(x_T).
/// The returned vector stacks the stage block then the terminal block.
FeatureVector integrate_features(const Trajectory& tau, const EnvironmentSpec& env);

/// Features of the suffix starting at t = d (stage sum over t in [d, T),
/// plus terminal). d = 0 reproduces integrate_features exactly.
FeatureVector truncated_features(const Trajectory& tau, int d, const EnvironmentSpec& env);

/// N equidistant truncation start indices d_k = round(k*T/N), k = 0..N-1.
/// Always starts at 0 and is strictly increasing; requires 1 <= N <= T.
std::vector<int> subsample_grid(int T, int N);

/// Likelihood coefficient of the length-(T-d) suffix: (T - d + 1) / (T + 1).
double theta_coefficient(int d, int T);

/// Analytic feature derivatives at (x, u). Obstacle gradients are zero
/// outside the activation margin and at the obstacle center (the distance
/// gradient is undefined there).
FeatureDerivatives feature_derivatives(const State& x, const Control& u,
                                       const EnvironmentSpec& env);

}  // namespace moirl
