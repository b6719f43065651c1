#include "chainlight/rate_network.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace chainlight {

namespace {

double scattering_decay(const ChainParams& params, Momentum big_k, Momentum p,
                        RateModel model) {
  if (model == RateModel::sharp) return 2.0;
  return scattering_state(params, big_k, p).energy.decay;
}

double bound_decay(const ChainParams& params, Momentum big_k, RateModel model,
                   Regime regime) {
  if (model == RateModel::sharp) return 2.0;
  if (regime == Regime::strong || bound_state_exists(params, big_k)) {
    // Regime::strong admits a bound state for every K; when U is not large
    // enough to represent that regime literally, the sharp value applies.
    if (bound_state_exists(params, big_k)) {
      return bound_state(params, big_k)->energy.decay;
    }
  }
  return 2.0;
}

}  // namespace

RateNetwork RateNetwork::build(const ChainParams& params, Regime regime,
                               RateModel model,
                               const std::vector<WaveIndex>& pump_k,
                               const std::vector<double>& pump_rate,
                               const std::optional<std::vector<TwoKey>>& restrict_to) {
  if (pump_k.size() != pump_rate.size()) {
    throw std::invalid_argument("RateNetwork: pump arrays must align");
  }
  const Zone zone(params.sites);
  RateNetwork net;
  net.params = params;
  net.regime = regime;
  net.model = model;
  net.pump_k = pump_k;
  net.pump_rate = pump_rate;

  std::set<int> manifold_keys;
  if (restrict_to) {
    for (const TwoKey& key : *restrict_to) manifold_keys.insert(zone.reduce(key.big_k_u));
  } else {
    for (const WaveIndex kn : pump_k) {
      for (int ell = 0; ell < params.sites; ++ell) {
        manifold_keys.insert(zone.sum(WaveIndex{ell}, kn).u);
      }
    }
  }

  for (const int ku : manifold_keys) {
    const Momentum big_k{ku};
    const ManifoldEta2 man = manifold_eta2(params, regime, big_k);
    std::vector<int>& indices = net.manifold_of[ku];
    for (int row = 0; row < man.states(); ++row) {
      const bool is_bound = man.has_bound && row == static_cast<int>(man.p.size());
      TwoKey key{ku, is_bound ? TwoKey::bound_marker : man.p[row].u};
      if (restrict_to) {
        bool wanted = false;
        for (const TwoKey& want : *restrict_to) {
          if (zone.reduce(want.big_k_u) == ku &&
              ((want.is_bound() && is_bound) ||
               (!want.is_bound() && !is_bound &&
                zone.reduce(want.nu_u) == man.p[row].u))) {
            wanted = true;
            break;
          }
        }
        if (!wanted) continue;
      }
      TwoLevel level;
      level.key = key;
      level.eta2 = man.abs2.row(row).array();
      const double weight = level.eta2.sum();
      if (weight <= 0.0) continue;  // identically dark state carries no dynamics
      level.gamma_tot = is_bound
                            ? bound_decay(params, big_k, model, regime)
                            : scattering_decay(params, big_k, man.p[row], model);
      level.feed = level.eta2 * (level.gamma_tot / weight);
      indices.push_back(static_cast<int>(net.two.size()));
      net.two.push_back(std::move(level));
    }
  }

  net.gamma_one.resize(params.sites);
  for (int ell = 0; ell < params.sites; ++ell) {
    net.gamma_one[ell] =
        (model == RateModel::sharp)
            ? 1.0
            : single_dispersion(params, WaveIndex{ell}).decay;
  }
  net.gamma_tilde = net.gamma_one;
  for (std::size_t n = 0; n < pump_k.size(); ++n) {
    for (int ell = 0; ell < params.sites; ++ell) {
      const int ku = zone.sum(WaveIndex{ell}, pump_k[n]).u;
      const auto it = net.manifold_of.find(ku);
      if (it == net.manifold_of.end()) continue;
      double acc = 0.0;
      for (const int idx : it->second) acc += net.two[idx].eta2[ell];
      net.gamma_tilde[ell] += pump_rate[n] * acc;
    }
  }
  return net;
}

Eigen::VectorXd RateNetwork::pack(const DensityState& rho) const {
  const Zone zone(params.sites);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(dim());
  for (std::size_t s = 0; s < two.size(); ++s) {
    const auto it = rho.two.find(two[s].key);
    if (it != rho.two.end()) y[s] = it->second;
  }
  for (const auto& [ell, v] : rho.one) y[two.size() + ell] = v;
  y[dim() - 1] = rho.vacuum;
  return y;
}

DensityState RateNetwork::unpack(const Eigen::Ref<const Eigen::VectorXd>& y) const {
  DensityState rho;
  for (std::size_t s = 0; s < two.size(); ++s) {
    if (y[s] != 0.0) rho.two[two[s].key] = y[s];
  }
  for (int ell = 0; ell < params.sites; ++ell) {
    const double v = y[two.size() + ell];
    if (v != 0.0) rho.one[ell] = v;
  }
  rho.vacuum = y[dim() - 1];
  return rho;
}

void RateNetwork::derivative(const Eigen::Ref<const Eigen::VectorXd>& y,
                             Eigen::Ref<Eigen::VectorXd> dy) const {
  const Zone zone(params.sites);
  const int m = params.sites;
  const int n_two = static_cast<int>(two.size());
  const double vac = y[dim() - 1];

  for (int s = 0; s < n_two; ++s) {
    double gain = 0.0;
    for (std::size_t n = 0; n < pump_k.size(); ++n) {
      const int src_u = zone.reduce(two[s].key.big_k_u - zone.momentum(pump_k[n]).u);
      const int src_ell = zone.wave_index(Momentum{src_u}).ell;
      gain += pump_rate[n] * two[s].eta2[pump_k[n].ell] * y[n_two + src_ell];
    }
    dy[s] = -two[s].gamma_tot * y[s] + gain;
  }

  for (int ell = 0; ell < m; ++ell) {
    double v = -gamma_tilde[ell] * y[n_two + ell];
    for (int s = 0; s < n_two; ++s) v += two[s].feed[ell] * y[s];
    for (std::size_t n = 0; n < pump_k.size(); ++n) {
      if (pump_k[n].ell == ell) v += pump_rate[n] * vac;
    }
    dy[n_two + ell] = v;
  }

  double v = 0.0;
  for (int ell = 0; ell < m; ++ell) v += gamma_one[ell] * y[n_two + ell];
  for (const double rate : pump_rate) v -= rate * vac;
  dy[dim() - 1] = v;
}

}  // namespace chainlight
