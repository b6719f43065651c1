#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>

#include "chainlight/lattice.hpp"
#include "chainlight/params.hpp"

namespace chainlight {

enum class DispersionModel { tight_binding, full_range };

// Single-excitation eigenstate. shift = Re(E) - omega0 and decay = Gamma_k,
// both in units of gamma0.
struct SingleExcState {
  WaveIndex k;
  double shift = 0.0;
  double decay = 0.0;
};

SingleExcState single_dispersion(const ChainParams& params, WaveIndex k,
                                 DispersionModel model = DispersionModel::tight_binding);

// Formula-level dispersion at an arbitrary (not necessarily on-grid) ka.
double single_shift(const ChainParams& params, double ka, DispersionModel model);
double single_decay(const ChainParams& params, double ka, DispersionModel model);

// Scattering phase factor e^{i delta_{Kp}} of the non-dissipative pair
// problem. Unit modulus by construction; throws when the defining fraction
// degenerates (U = 0 together with cos(Ka/2) = 0).
std::complex<double> phase_shift(const ChainParams& params, Momentum big_k,
                                 Momentum p);

// Complex pair eigenvalue, split as shift = Re(E) - 2*omega0 and total decay
// Gamma_tot, both in units of gamma0.
struct TwoExcEnergy {
  double shift = 0.0;
  double decay = 0.0;
};

// A two-excitation eigenstate: plane-wave center of mass K combined with a
// relative wavefunction that is either a phase-shifted standing wave
// (relative wavenumber p, amplitude = e^{i delta}) or exponentially bound
// (amplitude = alpha_K).
struct TwoExcState {
  Momentum big_k;
  std::optional<Momentum> p;           // nullopt marks the bound state
  std::complex<double> amplitude;      // e^{i delta_{Kp}} or alpha_K
  TwoExcEnergy energy;

  bool bound() const { return !p.has_value(); }
};

// Requires p >= 0 on the relative grid of K; p = 0 and pa = pi are admitted
// formally (their relative wavefunctions vanish identically).
TwoExcState scattering_state(const ChainParams& params, Momentum big_k, Momentum p);

// Present iff |Im(Gamma_1) cos(Ka/2)| < U (and U > 0): the spatial-confinement
// criterion of the non-dissipative problem.
std::optional<TwoExcState> bound_state(const ChainParams& params, Momentum big_k);
bool bound_state_exists(const ChainParams& params, Momentum big_k);

// alpha_K of the bound ansatz, defined for any U > 0.
std::complex<double> bound_alpha(const ChainParams& params, Momentum big_k);

// Relative wavefunction Psi_x for x = 0 .. x_max (Psi_0 = 0, the hard-core
// constraint). Scattering states carry the 1/sqrt(M) of the ansatz; the
// bound profile is alpha^(x-1), unnormalized.
Eigen::VectorXcd relative_wavefunction(const ChainParams& params,
                                       const TwoExcState& state, int x_max);

// Hopping amplitude t_K = Im(Gamma_1) cos(Ka/2) of the non-dissipative
// relative-coordinate problem, units of gamma0.
double relative_hopping(const ChainParams& params, Momentum big_k);

// Non-dissipative energy of the relative problem (band offset removed):
// 2 t_K cos(pa) for scattering, U + t_K^2/U for the bound state.
double nondissipative_shift(const ChainParams& params, const TwoExcState& state);

}  // namespace chainlight
