#pragma once

#include <Eigen/Dense>
#include <complex>

#include "chainlight/params.hpp"

namespace chainlight {

// Reservoir-mediated coupling rate Gamma_x / gamma0 between atoms separated
// by x lattice sites; x = 0 gives the on-site rate 1 - 2i/pi whose real part
// is the bare decay and whose imaginary part is twice the single-atom Lamb
// shift. Throws for x < 0 (take |x| upstream).
std::complex<double> coupling_rate(const ChainParams& params, int separation);

// |w(r)|^2 r^2 / |d|^2 = 1 - (d_hat . r_hat)^2 for a dipole in the x-z plane
// at angle theta against the chain (z) axis. r_hat must be unit length.
double dipole_pattern(const Eigen::Vector3d& r_hat, double theta);

// Unit direction of a detector at elevation beta and azimuth phi
// (beta = 0 is perpendicular to the chain).
Eigen::Vector3d detection_direction(double beta, double phi);

}  // namespace chainlight
