#pragma once

#include <numbers>

namespace chainlight {

inline constexpr double pi = std::numbers::pi;

// Interaction regime selected by the value of U. The closed-form observables
// are available for the two extreme cases; everything built from the exact
// phase shift / pair amplitude accepts any U >= 0.
enum class Regime { noninteracting, strong, general };

// U/gamma0 above which convenience constructors switch to the
// strong-interaction forms.
inline constexpr double strong_u_threshold = 1e3;

// Physical configuration of the chain. All rates are expressed in units of
// the bare single-atom decay rate gamma0, all energies as offsets from the
// bare transition frequency (one offset per excitation number); the absolute
// transition frequency never enters an observable, spectra are functions of
// omega - omega0. The closed-form dynamics assume sharp optical resonances
// (omega0 much larger than every rate).
struct ChainParams {
  int sites = 101;             // M, odd; atoms sit on n = -N/2 .. N/2, N = M-1
  double lambda_over_a = 0.5;  // emission wavelength over lattice constant
  double theta = pi / 2;       // dipole angle against the chain axis, [0, pi/2]
  double gamma0 = 1.0;         // bare decay rate, the unit of every rate
  double interaction = 0.0;    // nearest-neighbour interaction U, units of gamma0

  int n() const { return sites - 1; }
  int rel_extent() const { return n() / 2; }      // largest relative coordinate
  double k_at_a() const { return 2.0 * pi / lambda_over_a; }
  double xi(int separation) const;                // k_at * a * |x|

  void validate() const;                          // throws std::invalid_argument
};

Regime classify_regime(const ChainParams& params);

}  // namespace chainlight
