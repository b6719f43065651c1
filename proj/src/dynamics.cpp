#include "chainlight/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace chainlight {

using std::complex;

TwoKey key_of(const TwoExcState& state) {
  if (state.bound()) return {state.big_k.u, TwoKey::bound_marker};
  return {state.big_k.u, state.p->u};
}

TwoExcState state_of(const ChainParams& params, const TwoKey& key) {
  if (key.is_bound()) {
    auto bs = bound_state(params, Momentum{key.big_k_u});
    if (!bs) throw std::invalid_argument("state_of: no bound state for this K");
    return *bs;
  }
  // a negative label is the phase twin of its canonical partner
  const Zone zone(params.sites);
  return scattering_state(params, Momentum{key.big_k_u},
                          Momentum{std::abs(zone.reduce(key.nu_u))});
}

double DensityState::trace() const {
  double acc = vacuum;
  for (const auto& [ell, v] : one) acc += v;
  for (const auto& [key, v] : two) acc += v;
  return acc;
}

double DensityState::min_population() const {
  double m = vacuum;
  for (const auto& [ell, v] : one) m = std::min(m, v);
  for (const auto& [key, v] : two) m = std::min(m, v);
  return m;
}

DensityState pure_two(const TwoExcState& state) {
  DensityState rho;
  rho.two[key_of(state)] = 1.0;
  return rho;
}

DensityState pure_one(WaveIndex k) {
  DensityState rho;
  rho.one[k.ell] = 1.0;
  return rho;
}

namespace {

struct Rates {
  double gamma_tot;          // two-excitation total decay
  Eigen::ArrayXd feed;       // Gamma^{K nu}_k over ell (sums to gamma_tot)
  double shift2;             // Re(E) - 2 omega0
};

Rates rates_for(const ChainParams& params, const TwoExcState& state,
                RateModel model) {
  Rates r;
  const BranchingTable table = branching(params, state);
  r.gamma_tot = (model == RateModel::sharp) ? 2.0 : state.energy.decay;
  r.feed = table.b * r.gamma_tot;
  r.shift2 = state.energy.shift;
  return r;
}

double gamma_one(const ChainParams& params, int ell, RateModel model) {
  if (model == RateModel::sharp) return 1.0;
  return single_dispersion(params, WaveIndex{ell}).decay;
}

// (e^{-a t} - e^{-b t}) / (b - a), stable near a = b.
double decay_bridge(double a, double b, double t) {
  const double d = b - a;
  if (std::abs(d * t) < 1e-8) {
    return t * std::exp(-a * t) * (1.0 - 0.5 * d * t);
  }
  return -std::exp(-a * t) * std::expm1(-d * t) / d;
}

}  // namespace

DensityState evolve_spontaneous(const ChainParams& params,
                                const DensityState& initial, double t,
                                RateModel model) {
  if (t < 0.0) throw std::invalid_argument("evolve_spontaneous: t must be >= 0");
  if (std::abs(initial.trace() - 1.0) > 1e-10) {
    throw std::invalid_argument("evolve_spontaneous: initial trace must be 1");
  }
  const Zone zone(params.sites);
  DensityState out;

  std::map<TwoKey, Rates> rate_cache;
  for (const auto& [key, pop] : initial.two) {
    rate_cache.emplace(key, rates_for(params, state_of(params, key), model));
  }

  for (const auto& [key, pop] : initial.two) {
    out.two[key] = std::exp(-rate_cache.at(key).gamma_tot * t) * pop;
  }

  for (int ell = 0; ell < params.sites; ++ell) {
    const double g_k = gamma_one(params, ell, model);
    double value = 0.0;
    if (auto it = initial.one.find(ell); it != initial.one.end()) {
      value += std::exp(-g_k * t) * it->second;
    }
    for (const auto& [key, pop] : initial.two) {
      const Rates& r = rate_cache.at(key);
      value += r.feed[ell] * decay_bridge(g_k, r.gamma_tot, t) * pop;
    }
    if (value != 0.0) out.one[ell] = value;
  }

  double occupied = 0.0;
  for (const auto& [key, v] : out.two) occupied += v;
  for (const auto& [ell, v] : out.one) occupied += v;
  out.vacuum = 1.0 - occupied;

  // Coherence blocks only pick up phase and decay factors. Phases are
  // relative to the frame rotating with multiples of omega0.
  const auto shift1 = [&](int ell) {
    return single_dispersion(params, WaveIndex{ell}).shift;
  };
  const complex<double> I(0.0, 1.0);
  for (const auto& [pair, c] : initial.coh_two_two) {
    const Rates& ra = rate_cache.count(pair.first)
                          ? rate_cache.at(pair.first)
                          : rates_for(params, state_of(params, pair.first), model);
    const Rates& rb = rate_cache.count(pair.second)
                          ? rate_cache.at(pair.second)
                          : rates_for(params, state_of(params, pair.second), model);
    const double delta = ra.shift2 - rb.shift2;
    out.coh_two_two[pair] =
        c * std::exp(-I * (delta * t)) *
        std::exp(-0.5 * (ra.gamma_tot + rb.gamma_tot) * t);
  }
  for (const auto& [pair, c] : initial.coh_one_one) {
    const double delta = shift1(pair.first) - shift1(pair.second);
    const double g = gamma_one(params, pair.first, model) +
                     gamma_one(params, pair.second, model);
    out.coh_one_one[pair] = c * std::exp(-I * (delta * t)) * std::exp(-0.5 * g * t);
  }
  for (const auto& [pair, c] : initial.coh_two_one) {
    const Rates r = rate_cache.count(pair.first)
                        ? rate_cache.at(pair.first)
                        : rates_for(params, state_of(params, pair.first), model);
    const double delta = r.shift2 - shift1(pair.second);
    const double g = r.gamma_tot + gamma_one(params, pair.second, model);
    out.coh_two_one[pair] = c * std::exp(-I * (delta * t)) * std::exp(-0.5 * g * t);
  }
  for (const auto& [key, c] : initial.coh_two_vac) {
    const Rates r = rate_cache.count(key)
                        ? rate_cache.at(key)
                        : rates_for(params, state_of(params, key), model);
    out.coh_two_vac[key] =
        c * std::exp(-I * (r.shift2 * t)) * std::exp(-0.5 * r.gamma_tot * t);
  }
  for (const auto& [ell, c] : initial.coh_one_vac) {
    out.coh_one_vac[ell] = c * std::exp(-I * (shift1(ell) * t)) *
                           std::exp(-0.5 * gamma_one(params, ell, model) * t);
  }
  return out;
}

AngleSnap angle_to_k(const ChainParams& params, double beta_det) {
  if (std::abs(beta_det) > pi / 2 + 1e-12) {
    throw std::invalid_argument("angle_to_k: |beta| must be <= pi/2");
  }
  const Zone zone(params.sites);
  // target in half units: k_at a sin(beta) / (pi/M)
  const double u_target =
      params.k_at_a() * std::sin(beta_det) * params.sites / pi;
  const Zone::Snap snap = zone.snap_wave(u_target);
  return {snap.k, snap.residual};
}

std::vector<double> bragg_angles(const ChainParams& params, Momentum k_bar) {
  const Zone zone(params.sites);
  const double base = zone.angle(Momentum{zone.reduce(k_bar.u)}) / params.k_at_a();
  std::vector<double> out;
  const double order_step = 2.0 * pi / params.k_at_a();
  const int n_max = static_cast<int>(std::floor((1.0 - base) / order_step));
  const int n_min = static_cast<int>(std::ceil((-1.0 - base) / order_step));
  for (int n = n_min; n <= n_max; ++n) {
    const double s = base + n * order_step;
    if (std::abs(s) <= 1.0) out.push_back(std::asin(s));
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

std::vector<EmissionSample> pattern_from_channel_weights(
    const ChainParams& params, const Eigen::ArrayXd& weight, double t_ret) {
  const Zone zone(params.sites);
  std::vector<EmissionSample> out;
  const double bin = params.lambda_over_a / params.sites;
  const double amp = std::exp(-t_ret);
  // channels with zero weight are reported too, so suppressed angles show up
  // as explicit zeros in the pattern
  for (int ell = 0; ell < params.sites; ++ell) {
    for (const double beta : bragg_angles(params, zone.momentum(WaveIndex{ell}))) {
      out.push_back({beta, bin, weight[ell] * amp, WaveIndex{ell}});
    }
  }
  std::sort(out.begin(), out.end(),
            [](const EmissionSample& a, const EmissionSample& b) {
              return a.beta < b.beta;
            });
  return out;
}

}  // namespace

std::vector<EmissionSample> emission_pattern(const ChainParams& params,
                                             const TwoExcState& state,
                                             double t_ret) {
  const MomentumDistribution dist = momentum_distribution(params, state);
  return pattern_from_channel_weights(params, dist.abs2, t_ret);
}

std::vector<EmissionSample> emission_pattern_single(const ChainParams& params,
                                                    WaveIndex k, double t_ret) {
  Eigen::ArrayXd weight = Eigen::ArrayXd::Zero(params.sites);
  weight[k.ell] = 1.0;
  return pattern_from_channel_weights(params, weight, t_ret);
}

double bound_emission_value(const ChainParams& params, Momentum big_k,
                            double beta, double t_ret) {
  if (params.interaction == 0.0) {
    throw std::invalid_argument("bound_emission_value: no bound state at U = 0");
  }
  const Zone zone(params.sites);
  const double half_ka = zone.angle(zone.half(Momentum{zone.reduce(big_k.u)}));
  const double c = std::cos(half_ka - params.k_at_a() * std::sin(beta));
  return 4.0 * c * c * std::exp(-t_ret);
}

double bound_emission_value_general(const ChainParams& params,
                                    const TwoExcState& bound, double beta,
                                    double t_ret) {
  if (!bound.bound()) {
    throw std::invalid_argument("bound_emission_value_general: not a bound state");
  }
  // continuous detected wavenumber; the bound pattern is not limited to the
  // discrete grid angles and carries no dependence on the atom count
  const Zone zone(params.sites);
  const double x = zone.angle(zone.half(Momentum{zone.reduce(bound.big_k.u)})) -
                   params.k_at_a() * std::sin(beta);
  const std::complex<double> alpha = bound.amplitude;
  const std::complex<double> amp =
      (std::cos(x) - alpha) / (1.0 - 2.0 * alpha * std::cos(x) + alpha * alpha);
  return 4.0 * std::norm(amp) * std::exp(-t_ret);
}

}  // namespace chainlight
