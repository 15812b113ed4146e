#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace moirl {

using Vec2 = Eigen::Vector2d;
using Vec4 = Eigen::Vector4d;
using Mat2 = Eigen::Matrix2d;
using Mat4 = Eigen::Matrix4d;
using VecX = Eigen::VectorXd;

// Time-integrated feature values of a trajectory, one entry per cost
// feature (stage block first, terminal block last). All entries >= 0.
using FeatureVector = VecX;

// Nonnegative cost weights, one per feature. Bounded mode additionally
// caps every entry at 1.
using WeightVector = VecX;

struct State {
  Vec2 position{Vec2::Zero()};   // [m]
  Vec2 velocity{Vec2::Zero()};   // [m/s]

  Vec4 as_vec4() const {
    Vec4 x;
    x << position, velocity;
    return x;
  }
  static State from_vec4(const Vec4& x) {
    return State{x.head<2>(), x.tail<2>()};
  }
  bool is_finite() const {
    return position.allFinite() && velocity.allFinite();
  }
};

struct Control {
  Vec2 force{Vec2::Zero()};      // acceleration command [m/s^2]

  bool is_finite() const { return force.allFinite(); }
};

// states.size() == controls.size() + 1, dt > 0.
struct Trajectory {
  std::vector<State> states;
  std::vector<Control> controls;
  double dt = 0.0;

  int horizon() const { return static_cast<int>(controls.size()); }

  void validate() const {
    if (states.size() != controls.size() + 1)
      throw std::invalid_argument("Trajectory: states length must be controls length + 1");
    if (!(dt > 0.0))
      throw std::invalid_argument("Trajectory: dt must be positive");
  }
};

struct ObstacleSpec {
  Vec2 center{Vec2::Zero()};     // [m]
  double radius = 0.0;           // [m]
  double activation_margin = 0.0; // l [m]; cost active within radius + l of center
};

struct EnvironmentSpec {
  Vec2 goal{Vec2::Zero()};
  State start;
  std::vector<ObstacleSpec> obstacles;
  int horizon_T = 0;
  double dt = 0.0;

  int num_obstacles() const { return static_cast<int>(obstacles.size()); }

  // Stage features: G, XReg, UReg, Obs_1..Obs_n.
  int stage_feature_count() const { return 3 + num_obstacles(); }
  // Terminal features: G, XReg, Obs_1..Obs_n (UReg excluded).
  int terminal_feature_count() const { return 2 + num_obstacles(); }
  int feature_count() const { return stage_feature_count() + terminal_feature_count(); }

  // Ordered feature identifiers; weight files are keyed on these names.
  std::vector<std::string> feature_names() const {
    std::vector<std::string> names;
    names.reserve(feature_count());
    names.push_back("stage_G");
    names.push_back("stage_XReg");
    names.push_back("stage_UReg");
    for (int i = 0; i < num_obstacles(); ++i)
      names.push_back("stage_Obs" + std::to_string(i + 1));
    names.push_back("term_G");
    names.push_back("term_XReg");
    for (int i = 0; i < num_obstacles(); ++i)
      names.push_back("term_Obs" + std::to_string(i + 1));
    return names;
  }

  void validate() const {
    if (horizon_T < 2)
      throw std::invalid_argument("EnvironmentSpec: horizon_T must be >= 2");
    if (!(dt > 0.0))
      throw std::invalid_argument("EnvironmentSpec: dt must be positive");
    if (!goal.allFinite() || !start.is_finite())
      throw std::invalid_argument("EnvironmentSpec: goal and start must be finite");
    for (const auto& ob : obstacles) {
      if (!(ob.radius > 0.0))
        throw std::invalid_argument("EnvironmentSpec: obstacle radius must be positive");
      if (!(ob.activation_margin > 0.0))
        throw std::invalid_argument("EnvironmentSpec: obstacle margin must be positive");
    }
  }
};

}  // namespace moirl
