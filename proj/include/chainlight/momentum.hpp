#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <vector>

#include "chainlight/eigenstates.hpp"
#include "chainlight/lattice.hpp"
#include "chainlight/params.hpp"

namespace chainlight {

// Two evaluation routes for the collective dipole moment eta_bar:
//
//   reduced  -- the closed forms stated for a large lattice: the direct term
//               (1+e^{i delta})/2 at q = +-p, the parity-gated background
//               term, and the resummed bound-state expression. These are the
//               quantities every observable below is built from.
//   exact    -- the finite-lattice transform evaluated through closed
//               geometric sums. Agrees with eta_bruteforce to rounding and
//               differs from `reduced` by boundary terms of order 1/M.
enum class EtaForm { reduced, exact };

std::complex<double> eta(const ChainParams& params, const TwoExcState& state,
                         Momentum q, EtaForm form = EtaForm::reduced);
double eta_abs2(const ChainParams& params, const TwoExcState& state, Momentum q,
                EtaForm form = EtaForm::reduced);

// Printed |eta|^2 of the two interaction extremes (all arguments on the
// relative grid of one manifold).
double eta_abs2_u0(const Zone& zone, Momentum p, Momentum q);
double eta_abs2_strong(const Zone& zone, Momentum p, Momentum q);
double eta_abs2_strong_bound(const Zone& zone, Momentum q);

// Plain lattice Fourier transform of a relative wavefunction given as
// Psi_0..Psi_xmax (Psi_0 = 0): sum over both signs of q of
// e^{-i q a z} Psi_z / sqrt(M). The independent check for every closed form.
std::complex<double> eta_bruteforce(const Eigen::Ref<const Eigen::VectorXcd>& psi,
                                    int sites, double qa);

// Stricter variant: the full windowed double transform of the pair
// wavefunction over the finite lattice, which keeps every boundary term the
// reduced forms drop. Differs from them by O(1/M).
std::complex<double> eta_windowed(const ChainParams& params,
                                  const TwoExcState& state, Momentum q);

struct MomentumDistribution {
  std::vector<Momentum> q;   // relative grid in ell order
  Eigen::VectorXcd eta;
  Eigen::ArrayXd abs2;
};

MomentumDistribution momentum_distribution(const ChainParams& params,
                                           const TwoExcState& state,
                                           EtaForm form = EtaForm::reduced);

// Branching ratios b_k for |K nu> -> |k>, indexed by ell. b is normalized to
// sum exactly to one (the raw |eta|^2/2 values sum to 1 + O(1/M); their sum
// is kept in eta2_sum). partial_rate = b * Gamma_tot.
struct BranchingTable {
  Eigen::ArrayXd b;
  Eigen::ArrayXd partial_rate;
  double eta2_sum = 0.0;
};

BranchingTable branching(const ChainParams& params, const TwoExcState& state);

// |eta|^2 of a whole K manifold under a given interaction regime: rows are
// the scattering states with 0 < p < pi/a in grid order followed by the
// bound state when present, columns the decay channels q = K/2 - k in ell
// order. Regime::general evaluates the reduced forms with the exact phase
// shift / pair amplitude.
struct ManifoldEta2 {
  std::vector<Momentum> p;
  bool has_bound = false;
  Eigen::MatrixXd abs2;

  int states() const { return static_cast<int>(p.size()) + (has_bound ? 1 : 0); }
};

ManifoldEta2 manifold_eta2(const ChainParams& params, Regime regime, Momentum big_k);

// Zone sums over products of |eta|^2 and their many-atom limits.
enum class LatticeSumKind { q_bg, r_bg, r_dir, r_bs, q_cross, r_cross, r_cross_bs };
enum class SumMode { finite, limit };

// qa is treated as exactly zero only when it compares equal to 0.0.
double lattice_sum(LatticeSumKind kind, double qa, int sites, SumMode mode);

}  // namespace chainlight
