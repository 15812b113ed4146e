#include "moirl/dynamics.hpp"

namespace moirl {

State step_dynamics(const State& x, const Control& u, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("step_dynamics: dt must be positive");
  State next;
  next.position = x.position + x.velocity * dt;
  next.velocity = x.velocity + u.force * dt;
  return next;
}

Trajectory rollout(const State& x0, const std::vector<Control>& controls,
                   const EnvironmentSpec& env) {
  if (static_cast<int>(controls.size()) != env.horizon_T)
    throw std::invalid_argument("rollout: control sequence length does not match horizon");
  Trajectory tau;
  tau.dt = env.dt;
  tau.controls = controls;
  tau.states.resize(controls.size() + 1);
  tau.states[0] = x0;
  for (size_t t = 0; t < controls.size(); ++t)
    tau.states[t + 1] = step_dynamics(tau.states[t], controls[t], env.dt);
  return tau;
}

}  // namespace moirl
