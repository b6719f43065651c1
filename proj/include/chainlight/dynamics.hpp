#pragma once

#include <complex>
#include <limits>
#include <map>
#include <utility>
#include <vector>

#include "chainlight/eigenstates.hpp"
#include "chainlight/lattice.hpp"
#include "chainlight/momentum.hpp"
#include "chainlight/params.hpp"

namespace chainlight {

// Rates entering the Lindblad dissipators. `sharp` is the sharp-resonance
// simplification (Gamma_k = gamma0, Gamma_tot = 2 gamma0) under which every
// closed-form observable of the library is stated; `exact` keeps the full
// k-dependent collective rates.
enum class RateModel { sharp, exact };

// Key of a two-excitation eigenstate: center-of-mass u plus the relative
// wavenumber u, with a sentinel for the bound state.
struct TwoKey {
  int big_k_u = 0;
  int nu_u = 0;
  static constexpr int bound_marker = std::numeric_limits<int>::min();

  bool is_bound() const { return nu_u == bound_marker; }
  friend auto operator<=>(const TwoKey&, const TwoKey&) = default;
};

TwoKey key_of(const TwoExcState& state);
TwoExcState state_of(const ChainParams& params, const TwoKey& key);

// Density matrix in the eigenbasis, stored block-wise. Populations are the
// working content; the coherence blocks are carried for completeness but stay
// identically zero for every pure-eigenstate initial condition used here
// (their phases are tracked in the frame rotating with multiples of omega0).
struct DensityState {
  double vacuum = 0.0;
  std::map<int, double> one;       // ell -> population
  std::map<TwoKey, double> two;    // (K, nu) -> population
  std::map<std::pair<TwoKey, TwoKey>, std::complex<double>> coh_two_two;
  std::map<std::pair<int, int>, std::complex<double>> coh_one_one;
  std::map<std::pair<TwoKey, int>, std::complex<double>> coh_two_one;
  std::map<TwoKey, std::complex<double>> coh_two_vac;
  std::map<int, std::complex<double>> coh_one_vac;

  double trace() const;
  double min_population() const;
};

DensityState pure_two(const TwoExcState& state);
DensityState pure_one(WaveIndex k);

// Closed-form solution of the spontaneous-emission Lindblad dynamics after
// time t >= 0 (units 1/gamma0).
DensityState evolve_spontaneous(const ChainParams& params,
                                const DensityState& initial, double t,
                                RateModel model = RateModel::sharp);

// Wavenumber detected at elevation beta: [k_at sin(beta)] reduced to the
// zone and snapped to the nearest grid point. residual is in units of the
// grid spacing, |residual| <= 1/2.
struct AngleSnap {
  WaveIndex k;
  double residual;
};
AngleSnap angle_to_k(const ChainParams& params, double beta_det);

// All elevations with sin(beta) = k/k_at + n*(2 pi)/(k_at a), |sin| <= 1,
// sorted ascending. Accepts any zone momentum (also the even grid).
std::vector<double> bragg_angles(const ChainParams& params, Momentum k_bar);

struct EmissionSample {
  double beta = 0.0;       // elevation (radians)
  double bin_width = 0.0;  // angular width carried by the discrete sample
  double value = 0.0;      // G1 / (xi^2 |w|^2 M)
  WaveIndex k;             // intermediate single-excitation state
};

// Angle-resolved far-field intensity of the spontaneous decay of one
// eigenstate at retarded time t_ret, on the discrete allowed angles.
std::vector<EmissionSample> emission_pattern(const ChainParams& params,
                                             const TwoExcState& state,
                                             double t_ret);
std::vector<EmissionSample> emission_pattern_single(const ChainParams& params,
                                                    WaveIndex k, double t_ret);

// Bound-state pattern, continuous in beta and independent of the atom count:
// 4 cos^2(Ka/2 - k_at a sin(beta)) e^{-gamma0 t_ret} in the strong-interaction
// limit; the general form uses the finite-U pair amplitude.
double bound_emission_value(const ChainParams& params, Momentum big_k,
                            double beta, double t_ret);
double bound_emission_value_general(const ChainParams& params,
                                    const TwoExcState& bound, double beta,
                                    double t_ret);

}  // namespace chainlight
