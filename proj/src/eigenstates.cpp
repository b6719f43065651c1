#include "chainlight/eigenstates.hpp"

#include <cmath>
#include <stdexcept>

#include "chainlight/rates.hpp"

namespace chainlight {

using std::complex;

namespace {

double cos_half(const ChainParams& params, Momentum big_k) {
  const Zone zone(params.sites);
  return std::cos(zone.angle(zone.half(big_k)));
}

}  // namespace

double single_shift(const ChainParams& params, double ka, DispersionModel model) {
  const complex<double> g0 = coupling_rate(params, 0);
  if (model == DispersionModel::tight_binding) {
    return 0.5 * g0.imag() + coupling_rate(params, 1).imag() * std::cos(ka);
  }
  double acc = 0.5 * g0.imag();
  for (int x = 1; x <= params.rel_extent(); ++x) {
    acc += coupling_rate(params, x).imag() * std::cos(ka * x);
  }
  return acc;
}

double single_decay(const ChainParams& params, double ka, DispersionModel model) {
  if (model == DispersionModel::tight_binding) {
    return 1.0 + 2.0 * coupling_rate(params, 1).real() * std::cos(ka);
  }
  double acc = 1.0;
  for (int x = 1; x <= params.rel_extent(); ++x) {
    acc += 2.0 * coupling_rate(params, x).real() * std::cos(ka * x);
  }
  return acc;
}

SingleExcState single_dispersion(const ChainParams& params, WaveIndex k,
                                 DispersionModel model) {
  const Zone zone(params.sites);
  const double ka = zone.angle(zone.momentum(k));
  return {k, single_shift(params, ka, model), single_decay(params, ka, model)};
}

complex<double> phase_shift(const ChainParams& params, Momentum big_k, Momentum p) {
  const double u = params.interaction;
  if (u == 0.0) return {-1.0, 0.0};
  const Zone zone(params.sites);
  const double pa = zone.angle(p);
  const double hop = coupling_rate(params, 1).imag() * cos_half(params, big_k);
  const complex<double> i(0.0, 1.0);
  const complex<double> num = hop - u * std::exp(i * pa);
  const complex<double> den = hop - u * std::exp(-i * pa);
  if (std::abs(den) < 1e-12) {
    throw std::invalid_argument("phase_shift: degenerate parameters (U and the "
                                "hopping term vanish together)");
  }
  return -num / den;
}

TwoExcState scattering_state(const ChainParams& params, Momentum big_k, Momentum p) {
  const Zone zone(params.sites);
  if (zone.reduce(p.u) < 0) {
    throw std::invalid_argument("scattering_state: relative wavenumber must be >= 0");
  }
  complex<double> phase;
  if (params.interaction == 0.0) {
    phase = {-1.0, 0.0};  // hard-core limit, also the U -> 0 limit of the fraction
  } else {
    phase = phase_shift(params, big_k, p);
  }
  const complex<double> g0 = coupling_rate(params, 0);
  const complex<double> g1 = coupling_rate(params, 1);
  const double chk = cos_half(params, big_k);
  const double cp = std::cos(zone.angle(p));
  TwoExcEnergy energy;
  energy.shift = g0.imag() + 2.0 * g1.imag() * chk * cp;
  energy.decay = 2.0 + 4.0 * g1.real() * chk * cp;
  return {big_k, p, phase, energy};
}

complex<double> bound_alpha(const ChainParams& params, Momentum big_k) {
  if (params.interaction == 0.0) {
    throw std::invalid_argument("bound_alpha: U must be positive");
  }
  const complex<double> i(0.0, 1.0);
  return -i * coupling_rate(params, 1) * cos_half(params, big_k) /
         params.interaction;
}

bool bound_state_exists(const ChainParams& params, Momentum big_k) {
  if (params.interaction == 0.0) return false;
  const double hop = coupling_rate(params, 1).imag() * cos_half(params, big_k);
  return std::abs(hop) < std::abs(params.interaction);
}

std::optional<TwoExcState> bound_state(const ChainParams& params, Momentum big_k) {
  if (!bound_state_exists(params, big_k)) return std::nullopt;
  const double u = params.interaction;
  const complex<double> g0 = coupling_rate(params, 0);
  const complex<double> g1 = coupling_rate(params, 1);
  const double chk = cos_half(params, big_k);
  const double c2 = chk * chk;
  TwoExcEnergy energy;
  energy.shift = g0.imag() + u -
                 c2 * (g1.real() * g1.real() - g1.imag() * g1.imag()) / u;
  energy.decay = 2.0 + 4.0 * c2 * g1.real() * g1.imag() / u;
  return TwoExcState{big_k, std::nullopt, bound_alpha(params, big_k), energy};
}

Eigen::VectorXcd relative_wavefunction(const ChainParams& params,
                                       const TwoExcState& state, int x_max) {
  const Zone zone(params.sites);
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(x_max + 1);
  if (state.bound()) {
    complex<double> pow_alpha = 1.0;
    for (int x = 1; x <= x_max; ++x) {
      psi[x] = pow_alpha;
      pow_alpha *= state.amplitude;
    }
  } else {
    const double pa = zone.angle(*state.p);
    const double norm = 1.0 / std::sqrt(static_cast<double>(params.sites));
    const complex<double> i(0.0, 1.0);
    for (int x = 1; x <= x_max; ++x) {
      psi[x] = norm * (std::exp(i * (pa * x)) +
                       state.amplitude * std::exp(-i * (pa * x)));
    }
  }
  return psi;
}

double relative_hopping(const ChainParams& params, Momentum big_k) {
  return coupling_rate(params, 1).imag() * cos_half(params, big_k);
}

double nondissipative_shift(const ChainParams& params, const TwoExcState& state) {
  const double t = relative_hopping(params, state.big_k);
  if (state.bound()) {
    const double u = params.interaction;
    return u + t * t / u;
  }
  const Zone zone(params.sites);
  return 2.0 * t * std::cos(zone.angle(*state.p));
}

}  // namespace chainlight
