#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chainlight/dynamics.hpp"
#include "chainlight/lattice.hpp"
#include "chainlight/params.hpp"

namespace chainlight {

// One plane-wave component of the incoherent drive. rate = |P_n|^2 in units
// of gamma0; the excitation angle imprints the wavenumber
// [k_at sin(beta_exc)] on the chain.
struct Pump {
  double beta_exc = 0.0;
  double rate = 0.0;
};

struct PumpConfig {
  std::vector<Pump> pumps;

  double total_rate() const;
  // Snaps every pump to its grid wavenumber and enforces the weak-drive
  // window (total rate <= 0.05 gamma0, hard; above 0.01 a warning string is
  // returned per offender).
  std::vector<std::string> validate(const ChainParams& params);
  std::vector<WaveIndex> wave_indices(const ChainParams& params) const;
};

enum class SteadyOrder { analytic_xi2, numeric };

// Steady-state occupation numbers under weak incoherent driving.
struct SteadyState {
  std::map<int, double> one;      // ell -> N_k
  std::map<TwoKey, double> two;   // (K, nu) -> N_{K nu}
  SteadyOrder order = SteadyOrder::analytic_xi2;
  Regime regime = Regime::general;

  double total() const;
  void check_physical() const;  // occupations in [0,1], sum <= 1
};

// Perturbative steady state of a single pump with rate xi*gamma0 imprinting
// k_p: N_k to order xi^2, N_{K nu} at order xi^2 with K = 2 k_p only.
SteadyState single_pump_steady(const ChainParams& params, WaveIndex k_p,
                               double xi);

// Two pumps with rates xi and eps^2 * xi imprinting k1 and k2. eps = 0
// collapses to the single-pump result exactly; k1 == k2 follows the
// degenerate branch (single pump with rate xi*(1+eps^2)).
SteadyState two_pump_steady(const ChainParams& params, WaveIndex k1,
                            WaveIndex k2, double xi, double eps);

// Stationary point of the full rate equations (no perturbative truncation),
// solved as one linear system. Oracle for the analytic forms above.
SteadyState rate_steady_numeric(const ChainParams& params, const PumpConfig& config,
                                RateModel model = RateModel::sharp,
                                std::optional<Regime> regime = std::nullopt);

// Far-field intensity G1 / (xi_f^2 |w|^2 M) detected at the wavenumber kbar,
// evaluated from a steady state.
double g1_steady(const ChainParams& params, const SteadyState& steady,
                 WaveIndex kbar);

// Closed single-pump form: xi delta_{kbar kP} + xi^2 [ delta/3 +
// (strong only) 16/M^2 cos^2((kbar-kP) a) ].
double g1_single_pump_closed(const ChainParams& params, WaveIndex kbar,
                             WaveIndex k_p, double xi, Regime regime);

// Relative nonlinear-intensity difference between two-pump and single-pump
// driving, delta G1_NL. The formula variant takes qa = (k1-k2) a / 2
// directly; sites = nullopt drops the 1/M^2 bound-state correction
// (many-atom limit).
double delta_g1_formula(double qa, bool q_zero, Regime regime, double eps,
                        std::optional<int> sites);
double delta_g1(const ChainParams& params, double beta1, double beta2,
                double eps, std::optional<int> sites);

// Spectral bound-state signature of the two-pump setup at omega = omega0 + U:
// eps^2 (eps^2 delta_{q0} + 2 cos^4(qa)).
double delta_spectrum_bs_formula(double qa, bool q_zero, double eps);
double delta_spectrum_bs(const ChainParams& params, double beta1, double beta2,
                         double eps);

// Normalized zero-delay intensity correlation of the out-of-plane two-pump
// coincidence scheme.
double g2_formula(double qa, bool q_zero, Regime regime, std::optional<int> sites);
double g2_angles(const ChainParams& params, double beta1, double beta2,
                 std::optional<int> sites);

// Steady-state emission spectrum (quantum-regression form), normalized as
// S gamma0 / (2 xi_f^2 |w|^2 M), as a function of omega - omega0 in gamma0
// units. Lorentzian widths: gamma0/2 for transitions to the vacuum, 3/2
// gamma0 for two-excitation transitions; bound-state lines sit at U.
double spectrum_value(const ChainParams& params, const SteadyState& steady,
                      WaveIndex kbar, double omega_offset);

// Bound-state line alone, evaluated on resonance (omega = omega0 + U).
double spectrum_bs_peak(const ChainParams& params, const SteadyState& steady,
                        WaveIndex kbar);

// Closed forms of the single-pump spectrum evaluated at the two peaks.
double spectrum_bs_peak_closed(const ChainParams& params, WaveIndex kbar,
                               WaveIndex k_p, double xi, Regime regime);
double spectrum_origin_peak_closed(const ChainParams& params, WaveIndex kbar,
                                   WaveIndex k_p, double xi, Regime regime);

// Composite-Simpson integral of spectrum_value over |omega - omega0| <=
// half_range (gamma0 units).
double spectrum_integral(const ChainParams& params, const SteadyState& steady,
                         WaveIndex kbar, double half_range, int intervals);

}  // namespace chainlight
