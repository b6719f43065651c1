#include "chainlight/params.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace chainlight {

double ChainParams::xi(int separation) const {
  return k_at_a() * std::abs(separation);
}

void ChainParams::validate() const {
  if (sites < 3 || sites % 2 == 0) {
    throw std::invalid_argument("sites must be an odd integer >= 3, got " +
                                std::to_string(sites));
  }
  if (!(lambda_over_a > 0.0)) {
    throw std::invalid_argument("lambda_over_a must be positive");
  }
  if (!(gamma0 > 0.0)) {
    throw std::invalid_argument("gamma0 must be positive");
  }
  if (interaction < 0.0) {
    throw std::invalid_argument("interaction U must be >= 0");
  }
  if (theta < 0.0 || theta > pi / 2 + 1e-12) {
    throw std::invalid_argument("theta must lie in [0, pi/2]");
  }
}

Regime classify_regime(const ChainParams& params) {
  if (params.interaction == 0.0) return Regime::noninteracting;
  if (params.interaction / params.gamma0 >= strong_u_threshold) return Regime::strong;
  return Regime::general;
}

}  // namespace chainlight
