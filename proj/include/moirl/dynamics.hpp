#pragma once

#include "moirl/types.hpp"

namespace moirl {

/// Explicit-Euler double integrator: p' = p + v*dt, v' = v + u*dt.
State step_dynamics(const State& x, const Control& u, double dt);

/// Simulate the control sequence from x0; controls.size() must equal
/// env.horizon_T. Returns a trajectory with T+1 states.
Trajectory rollout(const State& x0, const std::vector<Control>& controls,
                   const EnvironmentSpec& env);

}  // namespace moirl
