#include "chainlight/pump.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "chainlight/rate_network.hpp"

namespace chainlight {

double PumpConfig::total_rate() const {
  double acc = 0.0;
  for (const Pump& p : pumps) acc += p.rate;
  return acc;
}

std::vector<std::string> PumpConfig::validate(const ChainParams& params) {
  std::vector<std::string> warnings;
  for (const Pump& p : pumps) {
    if (p.rate < 0.0) throw std::invalid_argument("pump rate must be >= 0");
    angle_to_k(params, p.beta_exc);  // throws on out-of-range angles
  }
  const double xi = total_rate() / params.gamma0;
  if (xi > 0.05) {
    throw std::invalid_argument("total pump rate exceeds the weak-drive window "
                                "(Xi <= 0.05)");
  }
  if (xi > 0.01) {
    warnings.push_back("total pump rate Xi > 0.01: the Xi^2-order steady "
                       "state loses accuracy");
  }
  return warnings;
}

std::vector<WaveIndex> PumpConfig::wave_indices(const ChainParams& params) const {
  std::vector<WaveIndex> out;
  out.reserve(pumps.size());
  for (const Pump& p : pumps) out.push_back(angle_to_k(params, p.beta_exc).k);
  return out;
}

double SteadyState::total() const {
  double acc = 0.0;
  for (const auto& [ell, v] : one) acc += v;
  for (const auto& [key, v] : two) acc += v;
  return acc;
}

void SteadyState::check_physical() const {
  for (const auto& [ell, v] : one) {
    if (v < -1e-12 || v > 1.0) throw std::logic_error("unphysical occupation N_k");
  }
  for (const auto& [key, v] : two) {
    if (v < -1e-12 || v > 1.0) throw std::logic_error("unphysical occupation N_Knu");
  }
  if (total() > 1.0 + 1e-9) throw std::logic_error("occupations exceed unity");
}

namespace {

void check_xi(double xi) {
  if (xi < 0.0 || xi > 0.05) {
    throw std::invalid_argument("xi must lie in [0, 0.05]");
  }
}

// One driven manifold at order Xi^2: occupations per state plus the
// spontaneous feed 2 b_k N_{K nu} they hand down to a single-excitation
// channel. The branching ratios are normalized per state, matching the
// probability-conserving rate network.
struct DrivenManifold {
  const ManifoldEta2 man;
  Momentum big_k;
  std::vector<double> occupation;  // per row

  DrivenManifold(const ChainParams& params, Regime regime, Momentum k,
                 int ell_pumped, double scale)
      : man(manifold_eta2(params, regime, k)), big_k(k) {
    occupation.resize(man.states());
    for (int row = 0; row < man.states(); ++row) {
      occupation[row] = scale * man.abs2(row, ell_pumped);
    }
  }

  void store(SteadyState& out) const {
    for (int row = 0; row < man.states(); ++row) {
      if (occupation[row] == 0.0) continue;
      const bool is_bound =
          man.has_bound && row == static_cast<int>(man.p.size());
      const TwoKey key{big_k.u, is_bound ? TwoKey::bound_marker : man.p[row].u};
      out.two[key] += occupation[row];
    }
  }

  double feed_into(int ell) const {
    double acc = 0.0;
    for (int row = 0; row < man.states(); ++row) {
      if (occupation[row] == 0.0) continue;
      const double weight = man.abs2.row(row).sum();
      acc += 2.0 * man.abs2(row, ell) / weight * occupation[row];
    }
    return acc;
  }
};

}  // namespace

SteadyState single_pump_steady(const ChainParams& params, WaveIndex k_p,
                               double xi) {
  check_xi(xi);
  const Zone zone(params.sites);
  const Regime regime = classify_regime(params);
  const DrivenManifold driven(params, regime, zone.doubled(k_p), k_p.ell,
                              0.5 * xi * xi);

  SteadyState out;
  out.order = SteadyOrder::analytic_xi2;
  out.regime = regime;
  driven.store(out);
  for (int ell = 0; ell < params.sites; ++ell) {
    double v = (ell == k_p.ell) ? xi : 0.0;
    v += driven.feed_into(ell);
    if (v != 0.0) out.one[ell] = v;
  }
  return out;
}

SteadyState two_pump_steady(const ChainParams& params, WaveIndex k1,
                            WaveIndex k2, double xi, double eps) {
  check_xi(xi);
  if (eps < 0.0) throw std::invalid_argument("eps must be >= 0");
  if (eps == 0.0) return single_pump_steady(params, k1, xi);
  const Zone zone(params.sites);
  const Regime regime = classify_regime(params);

  if (k1.ell == k2.ell) {
    // degenerate pumps act like one pump with |P|^2 (1 + eps^2)
    SteadyState out = single_pump_steady(params, k1, xi * (1.0 + eps * eps));
    out.regime = regime;
    return out;
  }

  const double e2 = eps * eps;
  const double xi2 = xi * xi;
  const DrivenManifold m11(params, regime, zone.doubled(k1), k1.ell, 0.5 * xi2);
  const DrivenManifold m22(params, regime, zone.doubled(k2), k2.ell,
                           0.5 * e2 * e2 * xi2);
  const DrivenManifold m12(params, regime, zone.sum(k1, k2), k2.ell, e2 * xi2);

  SteadyState out;
  out.order = SteadyOrder::analytic_xi2;
  out.regime = regime;
  m11.store(out);
  m22.store(out);
  m12.store(out);
  // only the driven wavenumbers are kept at this order
  out.one[k1.ell] =
      xi + m11.feed_into(k1.ell) + m12.feed_into(k1.ell) + m22.feed_into(k1.ell);
  out.one[k2.ell] = e2 * xi + m11.feed_into(k2.ell) + m12.feed_into(k2.ell) +
                    m22.feed_into(k2.ell);
  return out;
}

SteadyState rate_steady_numeric(const ChainParams& params, const PumpConfig& config,
                                RateModel model, std::optional<Regime> regime) {
  PumpConfig cfg = config;
  cfg.validate(params);
  const Zone zone(params.sites);
  const Regime reg = regime.value_or(classify_regime(params));
  std::vector<WaveIndex> pk = cfg.wave_indices(params);
  std::vector<double> pr;
  for (const Pump& p : cfg.pumps) pr.push_back(p.rate / params.gamma0);

  SteadyState out;
  out.order = SteadyOrder::numeric;
  out.regime = reg;
  if (pk.empty() || cfg.total_rate() == 0.0) return out;  // vacuum

  const RateNetwork net = RateNetwork::build(params, reg, model, pk, pr);
  const int m = params.sites;
  const int n_two = static_cast<int>(net.two.size());

  // n_two coefficients: N_{K nu} = sum_n c(s,n) x_{src(s,n)}
  struct Gain {
    int src_ell;
    double c;
  };
  std::vector<std::vector<Gain>> gains(n_two);
  for (int s = 0; s < n_two; ++s) {
    for (std::size_t n = 0; n < pk.size(); ++n) {
      const int src_u = zone.reduce(net.two[s].key.big_k_u - zone.momentum(pk[n]).u);
      const int src_ell = zone.wave_index(Momentum{src_u}).ell;
      gains[s].push_back(
          {src_ell, pr[n] * net.two[s].eta2[pk[n].ell] / net.two[s].gamma_tot});
    }
  }

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, m);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd pump_at = Eigen::VectorXd::Zero(m);
  for (std::size_t n = 0; n < pk.size(); ++n) pump_at[pk[n].ell] += pr[n];

  for (int ell = 0; ell < m; ++ell) {
    a(ell, ell) += net.gamma_tilde[ell];
    rhs[ell] = pump_at[ell];
    for (int j = 0; j < m; ++j) a(ell, j) += pump_at[ell];
    for (int s = 0; s < n_two; ++s) {
      for (const Gain& g : gains[s]) {
        a(ell, g.src_ell) -= net.two[s].feed[ell] * g.c;
        a(ell, g.src_ell) += pump_at[ell] * g.c;
      }
    }
  }

  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  const Eigen::VectorXd x = lu.solve(rhs);
  if (!x.allFinite()) {
    throw std::logic_error("rate_steady_numeric: stationary system is singular");
  }

  for (int ell = 0; ell < m; ++ell) {
    if (x[ell] != 0.0) out.one[ell] = x[ell];
  }
  for (int s = 0; s < n_two; ++s) {
    double v = 0.0;
    for (const Gain& g : gains[s]) v += g.c * x[g.src_ell];
    if (v != 0.0) out.two[net.two[s].key] = v;
  }
  return out;
}

namespace {

// Manifold cache for evaluating G1 / spectra from a steady state.
class ManifoldCache {
 public:
  ManifoldCache(const ChainParams& params, Regime regime)
      : params_(params), regime_(regime) {}

  const ManifoldEta2& get(int big_k_u) {
    auto it = cache_.find(big_k_u);
    if (it == cache_.end()) {
      it = cache_.emplace(big_k_u,
                          manifold_eta2(params_, regime_, Momentum{big_k_u}))
               .first;
    }
    return it->second;
  }

  // |eta|^2 of the state `key` at decay channel ell.
  double eta2(const TwoKey& key, int ell) {
    const ManifoldEta2& man = get(key.big_k_u);
    if (key.is_bound()) {
      if (!man.has_bound) {
        throw std::invalid_argument("steady state refers to a bound state that "
                                    "does not exist in this regime");
      }
      return man.abs2(static_cast<int>(man.p.size()), ell);
    }
    for (int row = 0; row < static_cast<int>(man.p.size()); ++row) {
      if (man.p[row].u == key.nu_u) return man.abs2(row, ell);
    }
    throw std::invalid_argument("steady state refers to an unknown relative "
                                "wavenumber");
  }

 private:
  const ChainParams& params_;
  Regime regime_;
  std::map<int, ManifoldEta2> cache_;
};

}  // namespace

double g1_steady(const ChainParams& params, const SteadyState& steady,
                 WaveIndex kbar) {
  ManifoldCache cache(params, steady.regime);
  double acc = 0.0;
  if (auto it = steady.one.find(kbar.ell); it != steady.one.end()) {
    acc += it->second;
  }
  for (const auto& [key, pop] : steady.two) {
    acc += cache.eta2(key, kbar.ell) * pop;
  }
  return acc;
}

double g1_single_pump_closed(const ChainParams& params, WaveIndex kbar,
                             WaveIndex k_p, double xi, Regime regime) {
  if (regime == Regime::general) {
    throw std::invalid_argument("g1_single_pump_closed: closed form exists for "
                                "the two interaction extremes only");
  }
  const Zone zone(params.sites);
  const double delta = (kbar.ell == k_p.ell) ? 1.0 : 0.0;
  double value = xi * delta + xi * xi * delta / 3.0;
  if (regime == Regime::strong) {
    const double m = params.sites;
    const double c = std::cos(zone.angle(zone.momentum(kbar)) -
                              zone.angle(zone.momentum(k_p)));
    value += xi * xi * 16.0 / (m * m) * c * c;
  }
  return value;
}

double delta_g1_formula(double qa, bool q_zero, Regime regime, double eps,
                        std::optional<int> sites) {
  const double e2 = eps * eps;
  if (q_zero) return e2 * (e2 + 2.0);
  switch (regime) {
    case Regime::noninteracting:
      return 4.0 * e2;
    case Regime::strong: {
      const double c2 = std::cos(qa) * std::cos(qa);
      const double s2 = std::sin(qa) * std::sin(qa);
      double v = 4.0 * (c2 * c2 + 3.0 * s2 * s2);
      if (sites) {
        const double m = *sites;
        v += 96.0 / (m * m) * c2 * c2;
      }
      return e2 * v;
    }
    case Regime::general:
      throw std::invalid_argument("delta_g1_formula: closed form exists for the "
                                  "two interaction extremes only");
  }
  return 0.0;
}

namespace {

struct AnglePair {
  double qa;
  bool q_zero;
};

AnglePair pair_argument(const ChainParams& params, double beta1, double beta2) {
  const Zone zone(params.sites);
  const WaveIndex k1 = angle_to_k(params, beta1).k;
  const WaveIndex k2 = angle_to_k(params, beta2).k;
  const Momentum q = zone.relative_pair(k1, k2);
  return {std::abs(zone.angle(q)), k1.ell == k2.ell};
}

}  // namespace

double delta_g1(const ChainParams& params, double beta1, double beta2,
                double eps, std::optional<int> sites) {
  const AnglePair arg = pair_argument(params, beta1, beta2);
  return delta_g1_formula(arg.qa, arg.q_zero, classify_regime(params), eps, sites);
}

double delta_spectrum_bs_formula(double qa, bool q_zero, double eps) {
  const double e2 = eps * eps;
  const double c2 = std::cos(qa) * std::cos(qa);
  return e2 * ((q_zero ? e2 : 0.0) + 2.0 * c2 * c2);
}

double delta_spectrum_bs(const ChainParams& params, double beta1, double beta2,
                         double eps) {
  const AnglePair arg = pair_argument(params, beta1, beta2);
  return delta_spectrum_bs_formula(arg.qa, arg.q_zero, eps);
}

double g2_formula(double qa, bool q_zero, Regime regime, std::optional<int> sites) {
  if (regime == Regime::general) {
    throw std::invalid_argument("g2_formula: closed form exists for the two "
                                "interaction extremes only");
  }
  const double c2 = std::cos(qa) * std::cos(qa);
  const double s2 = std::sin(qa) * std::sin(qa);
  double value = q_zero ? 1.0 / 6.0 : 0.0;
  if (!q_zero) {
    value += (regime == Regime::noninteracting)
                 ? 2.0 / 3.0
                 : 2.0 / 3.0 * (c2 * c2 + 3.0 * s2 * s2);
  }
  if (sites && regime == Regime::strong) {
    const double m = *sites;
    value += 16.0 / (m * m) * (1.0 - (q_zero ? 0.5 : 0.0)) * c2 * c2;
  }
  return value;
}

double g2_angles(const ChainParams& params, double beta1, double beta2,
                 std::optional<int> sites) {
  const AnglePair arg = pair_argument(params, beta1, beta2);
  return g2_formula(arg.qa, arg.q_zero, classify_regime(params), sites);
}

double spectrum_value(const ChainParams& params, const SteadyState& steady,
                      WaveIndex kbar, double omega_offset) {
  ManifoldCache cache(params, steady.regime);
  const double d = omega_offset;
  double acc = 0.0;
  if (auto it = steady.one.find(kbar.ell); it != steady.one.end()) {
    acc += it->second * 2.0 / (1.0 + 4.0 * d * d);
  }
  const double u = params.interaction / params.gamma0;
  for (const auto& [key, pop] : steady.two) {
    const double center = key.is_bound() ? u : 0.0;
    const double shifted = 2.0 / 3.0 * (d - center);
    acc += cache.eta2(key, kbar.ell) * pop * (2.0 / 3.0) /
           (1.0 + shifted * shifted);
  }
  return acc;
}

double spectrum_bs_peak(const ChainParams& params, const SteadyState& steady,
                        WaveIndex kbar) {
  ManifoldCache cache(params, steady.regime);
  double acc = 0.0;
  bool any = false;
  for (const auto& [key, pop] : steady.two) {
    if (!key.is_bound()) continue;
    any = true;
    acc += (2.0 / 3.0) * cache.eta2(key, kbar.ell) * pop;
  }
  if (!any) {
    throw std::invalid_argument("spectrum_bs_peak: the steady state holds no "
                                "bound-state population (U = 0?)");
  }
  return acc;
}

double spectrum_bs_peak_closed(const ChainParams& params, WaveIndex kbar,
                               WaveIndex k_p, double xi, Regime regime) {
  if (regime != Regime::strong) {
    throw std::invalid_argument("bound-state line requires the strong regime");
  }
  const Zone zone(params.sites);
  const double m = params.sites;
  const double c = std::cos(zone.angle(zone.momentum(kbar)) -
                            zone.angle(zone.momentum(k_p)));
  return xi * xi / 3.0 * 16.0 / (m * m) * c * c;
}

double spectrum_origin_peak_closed(const ChainParams& params, WaveIndex kbar,
                                   WaveIndex k_p, double xi, Regime regime) {
  if (regime == Regime::general) {
    throw std::invalid_argument("closed form exists for the two interaction "
                                "extremes only");
  }
  const Zone zone(params.sites);
  const double delta = (kbar.ell == k_p.ell) ? 1.0 : 0.0;
  double value = 2.0 * xi * delta + 4.0 / 9.0 * xi * xi * delta;
  if (regime == Regime::strong) {
    const double m = params.sites;
    const double c = std::cos(zone.angle(zone.momentum(kbar)) -
                              zone.angle(zone.momentum(k_p)));
    value += xi * xi * 16.0 / (m * m) * c * c;
  }
  return value;
}

double spectrum_integral(const ChainParams& params, const SteadyState& steady,
                         WaveIndex kbar, double half_range, int intervals) {
  if (intervals < 2 || intervals % 2 != 0) {
    throw std::invalid_argument("spectrum_integral: intervals must be even");
  }
  const double h = 2.0 * half_range / intervals;
  double acc = 0.0;
  for (int i = 0; i <= intervals; ++i) {
    const double x = -half_range + i * h;
    const double w = (i == 0 || i == intervals) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    acc += w * spectrum_value(params, steady, kbar, x);
  }
  return acc * h / 3.0;
}

}  // namespace chainlight
