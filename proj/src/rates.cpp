#include "chainlight/rates.hpp"

#include <cmath>
#include <stdexcept>

namespace chainlight {

using std::complex;

complex<double> coupling_rate(const ChainParams& params, int separation) {
  if (separation < 0) {
    throw std::invalid_argument("coupling_rate: separation must be >= 0");
  }
  if (separation == 0) {
    return {1.0, -2.0 / pi};
  }
  const double xi = params.xi(separation);
  const complex<double> i(0.0, 1.0);
  const complex<double> a_x = -1.5 * i * std::exp(i * xi) / xi;
  const complex<double> b_x =
      3.0 / (xi * xi * xi) *
      complex<double>(std::sin(xi) - xi * std::cos(xi),
                      -(std::cos(xi) + xi * std::sin(xi)));
  const double s2 = std::sin(params.theta) * std::sin(params.theta);
  const double c2 = std::cos(params.theta) * std::cos(params.theta);
  return a_x * s2 + b_x * (3.0 * c2 - 1.0) / 2.0;
}

double dipole_pattern(const Eigen::Vector3d& r_hat, double theta) {
  if (std::abs(r_hat.norm() - 1.0) > 1e-6) {
    throw std::invalid_argument("dipole_pattern: r_hat must be unit length");
  }
  const Eigen::Vector3d d_hat(std::sin(theta), 0.0, std::cos(theta));
  const double proj = d_hat.dot(r_hat);
  return 1.0 - proj * proj;
}

Eigen::Vector3d detection_direction(double beta, double phi) {
  return {std::cos(beta) * std::cos(phi), std::cos(beta) * std::sin(phi),
          std::sin(beta)};
}

}  // namespace chainlight
