#pragma once

#include <vector>

#include "chainlight/params.hpp"

namespace chainlight {

// Exact Brillouin-zone bookkeeping for a chain of M sites.
//
// Single-excitation wavenumbers are quantized on ka = -pi + 2*pi*ell/M,
// center-of-mass wavenumbers of excitation pairs on Ka = 2*pi*j/M (mod 2*pi).
// For odd M both grids embed exactly into integer multiples of pi/(M*a):
// the first grid occupies the odd multiples, the second the even ones.
// A Momentum stores that integer ("half units"), so zone reductions,
// wavenumber sums, differences, and the halving K -> K/2 are all integer
// arithmetic; no floating-point modulo appears anywhere.
struct Momentum {
  int u = 0;  // value = u * pi / (M*a), canonical residue in (-M, M]
  friend bool operator==(Momentum, Momentum) = default;
};

// Index on the single-excitation grid, ka = -pi + 2*pi*ell/M.
struct WaveIndex {
  int ell = 0;  // in [0, M)
  friend bool operator==(WaveIndex, WaveIndex) = default;
};

class Zone {
 public:
  explicit Zone(int sites);

  int sites() const { return m_; }

  // Canonical residue of u modulo 2M in (-M, M].
  int reduce(int u) const;

  // Physical value times the lattice constant: (momentum)*a = u*pi/M.
  double angle(Momentum q) const { return q.u * pi / m_; }

  Momentum momentum(WaveIndex k) const;       // u = 2*ell - M
  WaveIndex wave_index(Momentum q) const;     // inverse; throws unless u is odd

  Momentum sum(WaveIndex k1, WaveIndex k2) const;   // center-of-mass K
  Momentum doubled(WaveIndex k) const;              // K = 2k (reduced)
  Momentum half(Momentum big_k) const;              // K/2; throws unless u even
  Momentum negate(Momentum q) const;

  // q = K/2 - k, the relative-momentum argument attached to the decay
  // channel |K nu> -> |k>.
  Momentum relative(Momentum big_k, WaveIndex k) const;
  // q = (k1 - k2)/2.
  Momentum relative_pair(WaveIndex k1, WaveIndex k2) const;

  // All M relative momenta of the manifold with center-of-mass K,
  // ordered by the ell of the single-excitation state they pair with.
  std::vector<Momentum> relative_grid(Momentum big_k) const;
  // Relative momenta with 0 < u < M; p = 0 and pa = pi label identically
  // vanishing pair wavefunctions and are excluded.
  std::vector<Momentum> positive_relative(Momentum big_k) const;

  // All scattering labels of the K manifold, both signs of p. Opposite signs
  // describe the same standing wave up to a phase; sums over the manifold
  // count them separately, matching the zone sums of the closed-form
  // observables.
  std::vector<Momentum> state_labels(Momentum big_k) const;

  // Nearest grid point of the single-excitation grid to the real target
  // u_target (half units, any branch). The residual is in units of the grid
  // spacing 2*pi/(M*a) and lies in [-1/2, 1/2]; exact ties round the
  // magnitude down.
  struct Snap {
    WaveIndex k;
    double residual;
  };
  Snap snap_wave(double u_target) const;

 private:
  int m_;
};

}  // namespace chainlight
