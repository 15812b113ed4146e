#include "moirl/cost.hpp"

#include <algorithm>
#include <cmath>

namespace moirl {

double trajectory_cost(const WeightVector& w, const FeatureVector& phi) {
  if (w.size() != phi.size())
    throw std::invalid_argument("trajectory_cost: weight/feature dimension mismatch");
  return w.dot(phi);
}

double demo_probability(const WeightVector& w, const FeatureVector& phi_star,
                        const std::vector<FeatureVector>& others) {
  if (w.size() == 0)
    throw std::invalid_argument("demo_probability: empty weight vector");

  // Work with negated costs as exponents; subtract the max before
  // exponentiating (costs reach 1e4 scale, raw exp underflows).
  const double e_star = -trajectory_cost(w, phi_star);
  double e_max = e_star;
  std::vector<double> exponents;
  exponents.reserve(others.size());
  for (const auto& phi : others) {
    const double e = -trajectory_cost(w, phi);
    exponents.push_back(e);
    e_max = std::max(e_max, e);
  }

  double z = std::exp(e_star - e_max);
  const double numerator = z;
  for (double e : exponents) z += std::exp(e - e_max);
  return numerator / z;
}

}  // namespace moirl
