#include "chainlight/momentum.hpp"

#include <cmath>
#include <stdexcept>

namespace chainlight {

using std::complex;

namespace {

const complex<double> I(0.0, 1.0);

int checked_half_difference(int a, int b) {
  if (std::abs(a - b) % 2 != 0) {
    throw std::invalid_argument("relative momenta lie on different parity grids");
  }
  return (a - b) / 2;
}

// Geometric sum S(m) = sum_{z=1}^{N/2} e^{2 pi i m z / M}, closed form.
complex<double> geometric_sum(int m, int sites) {
  if (((m % sites) + sites) % sites == 0) {
    return {(sites - 1) / 2.0, 0.0};
  }
  const double beta = pi * m / sites;
  const double sign = (std::abs(m) % 2 == 0) ? 1.0 : -1.0;
  return (sign - std::exp(I * beta)) / (2.0 * I * std::sin(beta));
}

complex<double> eta_scattering_reduced(const Zone& zone, Momentum p, Momentum q,
                                       complex<double> phase) {
  const int pu = zone.reduce(p.u);
  const int qu = std::abs(zone.reduce(q.u));
  if (qu == pu) return (1.0 + phase) / 2.0;
  const int m = checked_half_difference(pu, qu);
  if (m % 2 == 0) return 0.0;  // background channel closed for even m
  const double delta = std::arg(phase);
  const double y = pi * m / zone.sites();
  return (2.0 / zone.sites()) * std::exp(I * (delta / 2.0)) *
         std::sin(delta / 2.0 - y) / std::sin(y);
}

complex<double> eta_scattering_exact(const Zone& zone, Momentum p, Momentum q,
                                     complex<double> phase) {
  const int pu = zone.reduce(p.u);
  const int qu = zone.reduce(q.u);
  const int m1 = checked_half_difference(pu, qu);
  const int m2 = checked_half_difference(pu, -qu);
  const complex<double> s1 = geometric_sum(m1, zone.sites());
  const complex<double> s2 = geometric_sum(m2, zone.sites());
  const complex<double> t1 = s1 + phase * std::conj(s1);
  const complex<double> t2 = s2 + phase * std::conj(s2);
  return (t1 + t2) / static_cast<double>(zone.sites());
}

complex<double> eta_bound_reduced(const Zone& zone, Momentum q,
                                  complex<double> alpha) {
  // evaluate at |qa| so the q -> -q symmetry holds to the bit
  const double cq = std::cos(std::abs(zone.angle(Momentum{zone.reduce(q.u)})));
  return 2.0 / std::sqrt(static_cast<double>(zone.sites())) * (cq - alpha) /
         (1.0 - 2.0 * alpha * cq + alpha * alpha);
}

complex<double> eta_bound_exact(const Zone& zone, Momentum q,
                                complex<double> alpha) {
  const int half_n = (zone.sites() - 1) / 2;
  const double qa = zone.angle(q);
  complex<double> acc = 0.0;
  for (const double sign : {1.0, -1.0}) {
    const complex<double> r = alpha * std::exp(-I * (sign * qa));
    if (std::abs(1.0 - r) < 1e-14) {
      acc += std::exp(-I * (sign * qa)) * static_cast<double>(half_n);
    } else {
      acc += std::exp(-I * (sign * qa)) *
             (1.0 - std::pow(r, half_n)) / (1.0 - r);
    }
  }
  return acc / std::sqrt(static_cast<double>(zone.sites()));
}

}  // namespace

complex<double> eta(const ChainParams& params, const TwoExcState& state,
                    Momentum q, EtaForm form) {
  const Zone zone(params.sites);
  if (state.bound()) {
    return form == EtaForm::reduced ? eta_bound_reduced(zone, q, state.amplitude)
                                    : eta_bound_exact(zone, q, state.amplitude);
  }
  return form == EtaForm::reduced
             ? eta_scattering_reduced(zone, *state.p, q, state.amplitude)
             : eta_scattering_exact(zone, *state.p, q, state.amplitude);
}

double eta_abs2(const ChainParams& params, const TwoExcState& state, Momentum q,
                EtaForm form) {
  return std::norm(eta(params, state, q, form));
}

double eta_abs2_u0(const Zone& zone, Momentum p, Momentum q) {
  const int pu = zone.reduce(p.u);
  const int qu = std::abs(zone.reduce(q.u));
  if (qu == pu) return 0.0;
  const int m = checked_half_difference(pu, qu);
  if (m % 2 == 0) return 0.0;
  const double t = std::tan(pi * m / zone.sites());
  const double mm = static_cast<double>(zone.sites()) * zone.sites();
  return 4.0 / (mm * t * t);
}

double eta_abs2_strong(const Zone& zone, Momentum p, Momentum q) {
  const int pu = zone.reduce(p.u);
  const int qu = std::abs(zone.reduce(q.u));
  const double pa = pi * pu / zone.sites();
  const double qa = pi * qu / zone.sites();
  if (qu == pu) {
    const double s = std::sin(pa);
    return s * s;
  }
  const int m = checked_half_difference(pu, qu);
  if (m % 2 == 0) return 0.0;
  const double mm = static_cast<double>(zone.sites()) * zone.sites();
  return 4.0 / mm * (1.0 + std::cos(pa + qa)) / (1.0 - std::cos(pa - qa));
}

double eta_abs2_strong_bound(const Zone& zone, Momentum q) {
  const double c = std::cos(std::abs(zone.angle(Momentum{zone.reduce(q.u)})));
  return 4.0 / zone.sites() * c * c;
}

complex<double> eta_bruteforce(const Eigen::Ref<const Eigen::VectorXcd>& psi,
                               int sites, double qa) {
  if (psi.size() == 0 || std::abs(psi[0]) != 0.0) {
    throw std::invalid_argument("eta_bruteforce: Psi_0 must be zero");
  }
  complex<double> acc = 0.0;
  for (int z = 1; z < psi.size(); ++z) {
    acc += 2.0 * std::cos(qa * z) * psi[z];
  }
  return acc / std::sqrt(static_cast<double>(sites));
}

complex<double> eta_windowed(const ChainParams& params, const TwoExcState& state,
                             Momentum q) {
  const Zone zone(params.sites);
  const int n = params.n();
  // the pair wavefunction of the finite chain reaches relative coordinate N
  const Eigen::VectorXcd psi = relative_wavefunction(params, state, n);
  const double qa = zone.angle(q);
  const double m = params.sites;
  complex<double> acc = 0.0;
  for (int x = 1; x <= n; ++x) {
    acc += 2.0 * (m - x) * std::cos(qa * x) * psi[x];
  }
  return acc / (m * std::sqrt(m));
}

MomentumDistribution momentum_distribution(const ChainParams& params,
                                           const TwoExcState& state,
                                           EtaForm form) {
  const Zone zone(params.sites);
  MomentumDistribution dist;
  dist.q = zone.relative_grid(state.big_k);
  const int m = params.sites;
  dist.eta.resize(m);
  dist.abs2.resize(m);
  for (int ell = 0; ell < m; ++ell) {
    dist.eta[ell] = eta(params, state, dist.q[ell], form);
    dist.abs2[ell] = std::norm(dist.eta[ell]);
  }
  return dist;
}

BranchingTable branching(const ChainParams& params, const TwoExcState& state) {
  const MomentumDistribution dist = momentum_distribution(params, state);
  BranchingTable table;
  table.eta2_sum = dist.abs2.sum();
  if (table.eta2_sum <= 0.0) {
    throw std::invalid_argument("branching: state has vanishing dipole weight");
  }
  table.b = dist.abs2 / table.eta2_sum;
  table.partial_rate = table.b * state.energy.decay;
  return table;
}

ManifoldEta2 manifold_eta2(const ChainParams& params, Regime regime,
                           Momentum big_k) {
  const Zone zone(params.sites);
  ManifoldEta2 out;
  out.p = zone.state_labels(big_k);
  switch (regime) {
    case Regime::noninteracting:
      out.has_bound = false;
      break;
    case Regime::strong:
      out.has_bound = true;
      break;
    case Regime::general:
      out.has_bound = bound_state_exists(params, big_k);
      break;
  }
  const std::vector<Momentum> grid = zone.relative_grid(big_k);
  const int m = params.sites;
  out.abs2.resize(out.states(), m);
  for (int row = 0; row < static_cast<int>(out.p.size()); ++row) {
    // |eta| of the p < 0 twin equals that of its canonical partner
    const Momentum canon{std::abs(zone.reduce(out.p[row].u))};
    std::optional<TwoExcState> st;
    if (regime == Regime::general) {
      st = scattering_state(params, big_k, canon);
    }
    for (int ell = 0; ell < m; ++ell) {
      switch (regime) {
        case Regime::noninteracting:
          out.abs2(row, ell) = eta_abs2_u0(zone, canon, grid[ell]);
          break;
        case Regime::strong:
          out.abs2(row, ell) = eta_abs2_strong(zone, canon, grid[ell]);
          break;
        case Regime::general:
          out.abs2(row, ell) = eta_abs2(params, *st, grid[ell]);
          break;
      }
    }
  }
  if (out.has_bound) {
    const int row = static_cast<int>(out.p.size());
    std::optional<TwoExcState> bs;
    if (regime == Regime::general) bs = bound_state(params, big_k);
    for (int ell = 0; ell < m; ++ell) {
      out.abs2(row, ell) = (regime == Regime::general)
                               ? eta_abs2(params, *bs, grid[ell])
                               : eta_abs2_strong_bound(zone, grid[ell]);
    }
  }
  return out;
}

double lattice_sum(LatticeSumKind kind, double qa, int sites, SumMode mode) {
  const bool q_zero = (qa == 0.0);
  const double m = sites;
  const double cq = std::cos(qa);
  const double sq = std::sin(qa);
  if (mode == SumMode::limit) {
    const double q_bg = (2.0 - (q_zero ? 1.0 : 0.0)) / 3.0;
    switch (kind) {
      case LatticeSumKind::q_bg:
        return q_bg;
      case LatticeSumKind::r_bg:
        return cq * cq * cq * cq * q_bg;
      case LatticeSumKind::r_dir:
        return 2.0 * sq * sq * sq * sq;
      case LatticeSumKind::r_bs:
        return 16.0 / (m * m) * cq * cq * cq * cq;
      case LatticeSumKind::q_cross:
      case LatticeSumKind::r_cross:
        return q_zero ? 1.0 / 3.0 : 0.0;
      case LatticeSumKind::r_cross_bs:
        return 16.0 / (m * m) * cq * cq;
    }
  }
  switch (kind) {
    case LatticeSumKind::r_dir:
      return 2.0 * sq * sq * sq * sq;
    case LatticeSumKind::r_bs:
      return 16.0 / (m * m) * cq * cq * cq * cq;
    case LatticeSumKind::r_cross_bs:
      return 16.0 / (m * m) * cq * cq;
    default:
      break;
  }
  // explicit sums over p = qa + m_odd * 2*pi/M with 0 < p*a <= pi
  const double step = 2.0 * pi / m;
  const double pref = 32.0 / (m * m * m * m);
  double acc = 0.0;
  const int lo = static_cast<int>(std::ceil((-qa) / step));
  const int hi = static_cast<int>(std::floor((pi - qa) / step));
  for (int n = lo; n <= hi; ++n) {
    if (n == 0 || std::abs(n) % 2 == 0) continue;
    const double pa = qa + n * step;
    if (pa <= 0.0 || pa > pi) continue;
    const double half_diff = 0.5 * (pa - qa);  // = n*pi/M
    double term = 0.0;
    switch (kind) {
      case LatticeSumKind::q_bg: {
        const double t = std::tan(half_diff);
        term = 1.0 / (t * t * t * t);
        break;
      }
      case LatticeSumKind::r_bg: {
        const double c = std::cos(0.5 * (pa + qa));
        const double s = std::sin(half_diff);
        term = c * c * c * c / (s * s * s * s);
        break;
      }
      case LatticeSumKind::q_cross: {
        const double tp = std::tan(0.5 * pa);
        const double td = std::tan(half_diff);
        term = 1.0 / (tp * tp * td * td);
        break;
      }
      case LatticeSumKind::r_cross: {
        const double tp = std::tan(0.5 * pa);
        term = (1.0 + std::cos(pa + qa)) /
               ((1.0 - std::cos(pa - qa)) * tp * tp);
        break;
      }
      default:
        break;
    }
    acc += term;
  }
  return pref * acc;
}

}  // namespace chainlight
