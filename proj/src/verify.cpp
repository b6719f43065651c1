#include "chainlight/verify.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstring>
#include <random>
#include <sstream>

#include "chainlight/dynamics.hpp"
#include "chainlight/eigenstates.hpp"
#include "chainlight/momentum.hpp"
#include "chainlight/oracle.hpp"
#include "chainlight/pump.hpp"
#include "chainlight/rates.hpp"

namespace chainlight::verify {

namespace {

using std::complex;

ChainParams base_params(double u = 0.0, int sites = 101) {
  ChainParams p;
  p.sites = sites;
  p.lambda_over_a = 0.5;
  p.theta = pi / 2;
  p.interaction = u;
  return p;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

Momentum random_com(const Zone& zone, std::mt19937& rng) {
  std::uniform_int_distribution<int> ell(0, zone.sites() - 1);
  return zone.sum(WaveIndex{ell(rng)}, WaveIndex{ell(rng)});
}

Momentum relative_near(const Zone& zone, Momentum big_k, double frac) {
  const double target = frac * zone.sites();
  Momentum best{0};
  double dist = 1e300;
  for (const Momentum p : zone.positive_relative(big_k)) {
    if (std::abs(p.u - target) < dist) {
      dist = std::abs(p.u - target);
      best = p;
    }
  }
  return best;
}

CheckResult check_rates() {
  const ChainParams p = base_params();
  const complex<double> g0 = coupling_rate(p, 0);
  const complex<double> g1 = coupling_rate(p, 1);
  const bool ok = std::abs(g0.real() - 1.0) < 5e-4 &&
                  std::abs(g0.imag() + 0.637) < 5e-4 &&
                  std::abs(g1.real() - 0.009) < 5e-4 &&
                  std::abs(g1.imag() + 0.119) < 5e-4;
  std::ostringstream os;
  os << "Gamma0 = " << g0.real() << " + " << g0.imag() << "i, Gamma1 = "
     << g1.real() << " + " << g1.imag() << "i (targets 1-0.637i, 0.009-0.119i)";
  return {"1. coupling rates at lambda/a = 0.5, theta = pi/2", ok, os.str()};
}

CheckResult check_dicke() {
  ChainParams p = base_params(0.0, 51);
  p.lambda_over_a = 2.0 * pi / 1e-4;
  const double decay = single_decay(p, 0.0, DispersionModel::full_range);
  const double rel = std::abs(decay - p.sites) / p.sites;
  return {"2. small-volume limit: Gamma_{k=0} -> M gamma0",
          rel < 1e-3,
          "M = 51, xi_1 = 1e-4: decay/gamma0 = " + fmt(decay) +
              ", relative deviation " + fmt(rel)};
}

CheckResult check_phase_limits() {
  std::mt19937 rng(101);
  bool ok = true;
  double worst = 0.0;
  const ChainParams p0 = base_params(0.0);
  const ChainParams ps = base_params(1e6);
  const Zone zone(101);
  for (int trial = 0; trial < 100; ++trial) {
    const Momentum big_k = random_com(zone, rng);
    const auto rels = zone.positive_relative(big_k);
    const Momentum rel = rels[static_cast<std::size_t>(rng() % rels.size())];
    if (phase_shift(p0, big_k, rel) != complex<double>(-1.0, 0.0)) ok = false;
    const complex<double> strong = phase_shift(ps, big_k, rel);
    const complex<double> target =
        -std::exp(complex<double>(0.0, 2.0 * zone.angle(rel)));
    worst = std::max(worst, std::abs(strong - target));
  }
  ok = ok && worst <= 1e-4;
  return {"3. phase-shift limits (U = 0 exact, U = 1e6 within 1e-4)", ok,
          "100 random (K, p): U=0 exact, strong-limit deviation " + fmt(worst)};
}

CheckResult check_bound_oracle() {
  bool ok = true;
  std::ostringstream os;
  // detached level against the impurity formula, N/2 = 400
  ChainParams p = base_params(0.0, 801);
  const double t = relative_hopping(p, Momentum{0});
  for (const double ratio : {5.0, 50.0}) {
    const TridiagonalProblem problem{400, t, ratio * std::abs(t)};
    const auto spec = diagonalize_relative(problem);
    const auto top = detached_eigenvalue(spec, problem, 1e-9);
    const double expected = problem.impurity + t * t / problem.impurity;
    if (!top || std::abs(*top - expected) / expected > 1e-6) ok = false;
    if (top) os << "U=" << ratio << "|t|: rel err "
                << fmt(std::abs(*top - expected) / expected) << "; ";
  }
  {
    const TridiagonalProblem problem{400, t, 0.0};
    if (detached_eigenvalue(diagonalize_relative(problem), problem, 1e-9)) {
      ok = false;
    }
  }
  // existence flag against the detached level across a (K, U, lambda/a) scan
  int tested = 0, skipped = 0;
  for (double ratio = 0.4; ratio <= 1.21; ratio += 0.05) {
    for (const double u : {0.15, 0.25, 0.5}) {
      for (const int ku : {0, 40}) {
        ChainParams q = base_params(u, 801);
        q.lambda_over_a = ratio;
        const Momentum big_k{ku};
        const double hop = relative_hopping(q, big_k);
        // points within 2% of the criterion boundary are not resolvable on a
        // finite lattice
        if (std::abs(std::abs(hop) - u) < 0.02 * std::max(std::abs(hop), u)) {
          ++skipped;
          continue;
        }
        const bool flag = bound_state_exists(q, big_k);
        if (flag != (std::abs(hop) < u)) ok = false;  // the criterion itself
        const TridiagonalProblem problem{400, hop, u};
        const auto spec = diagonalize_relative(problem);
        const double margin = 4.0 * std::abs(hop) * pi * pi / (400.0 * 400.0);
        const bool detached =
            detached_eigenvalue(spec, problem, margin).has_value();
        if (detached != flag) ok = false;
        ++tested;
      }
    }
  }
  os << tested << " scan points (" << skipped << " near-boundary skipped)";
  return {"4. bound-state oracle: detached level and existence criterion", ok,
          os.str()};
}

CheckResult check_eta_equivalence() {
  std::mt19937 rng(202);
  bool ok = true;
  double worst_exact = 0.0;
  // closed geometric-sum transform against the brute-force sum. The printed
  // large-M forms differ from both by O(1/M) boundary terms; they are covered
  // by the windowed comparison below.
  for (const double u : {0.0, 1e6}) {
    const ChainParams p = base_params(u);
    const Zone zone(101);
    for (int trial = 0; trial < 10; ++trial) {
      const Momentum big_k = random_com(zone, rng);
      const auto rels = zone.positive_relative(big_k);
      const Momentum rel = rels[static_cast<std::size_t>(rng() % rels.size())];
      const TwoExcState st = scattering_state(p, big_k, rel);
      const Eigen::VectorXcd psi = relative_wavefunction(p, st, p.rel_extent());
      for (const Momentum q : zone.relative_grid(big_k)) {
        worst_exact = std::max(
            worst_exact, std::abs(eta(p, st, q, EtaForm::exact) -
                                  eta_bruteforce(psi, p.sites, zone.angle(q))));
      }
    }
  }
  ok = worst_exact <= 1e-10;

  // windowed double transform against the reduced forms, away from the
  // beat channels around q = +-p, error halving with M
  const double fractions[] = {0.3, 0.45, 0.6, 0.7};
  double prev = 1.0;
  std::ostringstream os;
  os << "closed-vs-brute max " << fmt(worst_exact) << "; windowed-vs-reduced ";
  for (const int sites : {101, 201, 401}) {
    double worst = 0.0;
    for (const double u : {0.0, 1e6}) {
      const ChainParams p = base_params(u, sites);
      const Zone zone(sites);
      for (const double frac : fractions) {
        for (const int ku : {0, 2}) {
          const Momentum big_k{ku};
          const Momentum rel = relative_near(zone, big_k, frac);
          const TwoExcState st = scattering_state(p, big_k, rel);
          for (const Momentum q : zone.relative_grid(big_k)) {
            if (std::abs(std::abs(zone.reduce(q.u)) - rel.u) < sites / 10) {
              continue;
            }
            worst = std::max(worst, std::abs(eta_windowed(p, st, q) -
                                             eta(p, st, q, EtaForm::reduced)));
          }
        }
      }
    }
    os << "M=" << sites << ": " << fmt(worst * sites) << "/M ";
    if (worst > 10.0 / sites || worst > 0.75 * prev) ok = false;
    prev = worst;
  }
  return {"5. collective dipole moments: closed forms vs brute force", ok,
          os.str()};
}

CheckResult check_sum_rule() {
  std::mt19937 rng(303);
  bool ok = true;
  const Zone zone(101);
  double worst_bound = 0.0;
  for (const int ku : {0, 2, -8, 60}) {
    double acc = 0.0;
    for (const Momentum q : zone.relative_grid(Momentum{ku})) {
      acc += eta_abs2_strong_bound(zone, q);
    }
    worst_bound = std::max(worst_bound, std::abs(acc - 2.0));
  }
  ok = worst_bound <= 1e-12;
  double worst_scatt = 0.0;
  std::uniform_real_distribution<double> frac(0.35, 0.65);
  for (const double u : {0.0, 1e6}) {
    const ChainParams p = base_params(u);
    for (int trial = 0; trial < 10; ++trial) {
      const Momentum big_k = random_com(zone, rng);
      const TwoExcState st =
          scattering_state(p, big_k, relative_near(zone, big_k, frac(rng)));
      const MomentumDistribution dist = momentum_distribution(p, st);
      worst_scatt = std::max(worst_scatt, std::abs(dist.abs2.sum() - 2.0));
    }
  }
  ok = ok && worst_scatt < 5.0 / 101.0;
  return {"6. momentum-distribution sum rule Z = 2", ok,
          "bound exact to " + fmt(worst_bound) + "; band-interior scattering " +
              fmt(worst_scatt * 101.0) + "/M (edge states excluded)"};
}

CheckResult check_zone_sums() {
  bool ok = true;
  double worst = 0.0;
  double c_fit = 0.0;  // empirical constant of the |finite - limit| <= c/M law
  for (const auto kind : {LatticeSumKind::q_bg, LatticeSumKind::q_cross,
                          LatticeSumKind::r_bg, LatticeSumKind::r_cross}) {
    for (const double qa : {0.0, pi / 4, pi / 2}) {
      const double finite = lattice_sum(kind, qa, 10000, SumMode::finite);
      const double limit = lattice_sum(kind, qa, 10000, SumMode::limit);
      worst = std::max(worst, std::abs(finite - limit));
      for (const int m : {500, 2000}) {
        c_fit = std::max(c_fit, std::abs(lattice_sum(kind, qa, m, SumMode::finite) -
                                         lattice_sum(kind, qa, m, SumMode::limit)) *
                                    m);
      }
    }
  }
  ok = worst < 1e-3;
  return {"7. zone sums at M = 1e4 against the closed limits", ok,
          "max |finite - limit| = " + fmt(worst) +
              "; fitted error constant c = " + fmt(c_fit) + " (error <= c/M)"};
}

CheckResult check_spontaneous() {
  bool ok = true;
  std::ostringstream os;
  const ChainParams p = base_params(1e6);
  const Zone zone(101);
  const auto bs = bound_state(p, Momentum{6});
  const TwoExcState scatt =
      scattering_state(p, Momentum{6}, relative_near(zone, Momentum{6}, 0.45));
  double worst = 0.0;
  for (const RateModel model : {RateModel::sharp, RateModel::exact}) {
    for (const DensityState& initial :
         {pure_two(*bs), pure_two(scatt), pure_one(WaveIndex{20})}) {
      const auto traj = integrate_spontaneous(p, initial, 10.0, 1e-3, model, 2000);
      for (const auto& [t, rho] : traj) {
        const DensityState closed = evolve_spontaneous(p, initial, t, model);
        worst = std::max(worst, std::abs(rho.vacuum - closed.vacuum));
        for (const auto& [key, pop] : closed.two) {
          const auto it = rho.two.find(key);
          worst = std::max(worst, std::abs((it == rho.two.end() ? 0.0 : it->second) - pop));
        }
        for (const auto& [ell, pop] : closed.one) {
          const auto it = rho.one.find(ell);
          worst = std::max(worst, std::abs((it == rho.one.end() ? 0.0 : it->second) - pop));
        }
        if (std::abs(rho.trace() - 1.0) > 1e-8) ok = false;
      }
    }
  }
  ok = ok && worst <= 1e-8;
  os << "closed forms vs RK4 max " << fmt(worst) << "; ";
  // mono-exponential intensity at every allowed angle
  double worst_ratio = 0.0;
  const auto at0 = emission_pattern(p, *bs, 0.0);
  const auto at3 = emission_pattern(p, *bs, 3.0);
  for (std::size_t i = 0; i < at0.size(); ++i) {
    if (at0[i].value == 0.0) continue;
    worst_ratio = std::max(
        worst_ratio, std::abs(at3[i].value / at0[i].value - std::exp(-3.0)));
  }
  ok = ok && worst_ratio < 1e-12;
  os << "mono-exponential ratio deviation " << fmt(worst_ratio);
  return {"8. spontaneous dynamics: closed solution vs ODE oracle", ok, os.str()};
}

CheckResult check_patterns() {
  bool ok = true;
  std::ostringstream os;
  const Zone zone(101);
  const Momentum p_rel = relative_near(zone, Momentum{0}, 0.5);
  {
    const ChainParams p0 = base_params(0.0);
    const TwoExcState st = scattering_state(p0, Momentum{0}, p_rel);
    for (const EmissionSample& s : emission_pattern(p0, st, 0.0)) {
      const Momentum q = zone.relative(Momentum{0}, s.k);
      if (std::abs(zone.reduce(q.u)) == p_rel.u && s.value != 0.0) ok = false;
    }
  }
  {
    const ChainParams ps = base_params(1e6);
    const TwoExcState st = scattering_state(ps, Momentum{0}, p_rel);
    double direct_min = 1e300, rest_max = 0.0;
    for (const EmissionSample& s : emission_pattern(ps, st, 0.0)) {
      const Momentum q = zone.relative(Momentum{0}, s.k);
      if (std::abs(zone.reduce(q.u)) == p_rel.u) {
        direct_min = std::min(direct_min, s.value);
      } else {
        rest_max = std::max(rest_max, s.value);
      }
    }
    if (!(direct_min > 100.0 * rest_max)) ok = false;
    os << "strong-U direct/background contrast " << fmt(direct_min / rest_max)
       << "; ";
  }
  // bound-state pattern: closed expression, independent of the atom count
  bool bits_equal = true;
  double worst_formula = 0.0;
  const ChainParams p51 = base_params(1e6, 51);
  const ChainParams p401 = base_params(1e6, 401);
  for (double beta = -1.5; beta <= 1.5; beta += 0.05) {
    const double a = bound_emission_value(p51, Momentum{0}, beta, 0.7);
    const double b = bound_emission_value(p401, Momentum{0}, beta, 0.7);
    if (std::memcmp(&a, &b, sizeof(double)) != 0) bits_equal = false;
    const double c = std::cos(p51.k_at_a() * std::sin(beta));
    worst_formula =
        std::max(worst_formula,
                 std::abs(a - 4.0 * c * c * std::exp(-0.7)));
  }
  ok = ok && bits_equal && worst_formula < 1e-12;
  os << "bound pattern bit-identical across M: " << (bits_equal ? "yes" : "no");
  return {"9. emission patterns: channel structure and bound-state form", ok,
          os.str()};
}

CheckResult check_pump_steady() {
  std::mt19937 rng(404);
  std::uniform_int_distribution<int> ell(0, 50);
  const double xi = 1e-3;
  bool ok = true;
  double worst_rel = 0.0;
  const auto compare = [&](const SteadyState& analytic, const SteadyState& numeric) {
    for (const auto& [l, want] : analytic.one) {
      const auto it = numeric.one.find(l);
      const double got = (it == numeric.one.end()) ? 0.0 : it->second;
      const double err = std::abs(got - want);
      if (err > 10.0 * xi * want + xi * xi * xi) ok = false;
      if (want > xi * xi) worst_rel = std::max(worst_rel, err / want);
    }
    for (const auto& [key, want] : analytic.two) {
      const auto it = numeric.two.find(key);
      const double got = (it == numeric.two.end()) ? 0.0 : it->second;
      const double err = std::abs(got - want);
      if (err > 10.0 * xi * want + xi * xi * xi) ok = false;
      if (want > xi * xi * xi) worst_rel = std::max(worst_rel, err / want);
    }
  };
  for (const double u : {0.0, 1e6}) {
    ChainParams p = base_params(u, 51);
    const Zone zone(51);
    for (int trial = 0; trial < 10; ++trial) {
      const WaveIndex k_p{ell(rng)};
      const double beta = std::asin(zone.angle(zone.momentum(k_p)) / p.k_at_a());
      PumpConfig config;
      config.pumps.push_back({beta, xi});
      compare(single_pump_steady(p, k_p, xi), rate_steady_numeric(p, config));
    }
    std::uniform_real_distribution<double> eps_draw(0.3, 1.5);
    for (int trial = 0; trial < 10; ++trial) {
      const WaveIndex k1{ell(rng)};
      WaveIndex k2{ell(rng)};
      if (k2.ell == k1.ell) k2.ell = (k2.ell + 11) % 51;
      const double eps = eps_draw(rng);
      PumpConfig config;
      config.pumps.push_back(
          {std::asin(zone.angle(zone.momentum(k1)) / p.k_at_a()), xi});
      config.pumps.push_back(
          {std::asin(zone.angle(zone.momentum(k2)) / p.k_at_a()),
           eps * eps * xi});
      compare(two_pump_steady(p, k1, k2, xi, eps),
              rate_steady_numeric(p, config));
    }
  }
  return {"10. pump steady states: analytic Xi^2 order vs rate-equation solve",
          ok,
          "40 random configurations at Xi = 1e-3, worst relative deviation " +
              fmt(worst_rel)};
}

CheckResult check_closed_observables() {
  bool ok = true;
  std::ostringstream os;
  const double xi = 1e-3;
  const ChainParams p = base_params(1e6);
  const Zone zone(101);
  const WaveIndex k_p{61};
  const WaveIndex kbar{27};
  // g1 closed values
  {
    const ChainParams p0 = base_params(0.0);
    if (std::abs(g1_single_pump_closed(p0, kbar, k_p, xi,
                                       Regime::noninteracting)) > 1e-10) {
      ok = false;
    }
    if (std::abs(g1_single_pump_closed(p0, k_p, k_p, xi, Regime::noninteracting) -
                 (xi + xi * xi / 3.0)) > 1e-10) {
      ok = false;
    }
    const double c = std::cos(zone.angle(zone.momentum(kbar)) -
                              zone.angle(zone.momentum(k_p)));
    if (std::abs(g1_single_pump_closed(p, kbar, k_p, xi, Regime::strong) -
                 xi * xi * 16.0 / (101.0 * 101.0) * c * c) > 1e-10) {
      ok = false;
    }
  }
  // bound-line normalization = cos^2((k_P - kbar) a)
  {
    const SteadyState steady = single_pump_steady(p, k_p, xi);
    double worst = 0.0;
    for (const int l : {61, 27, 88, 5}) {
      const double ratio = spectrum_bs_peak(p, steady, WaveIndex{l}) /
                           spectrum_bs_peak(p, steady, k_p);
      const double c = std::cos(zone.angle(zone.momentum(WaveIndex{l})) -
                                zone.angle(zone.momentum(k_p)));
      worst = std::max(worst, std::abs(ratio - c * c));
    }
    ok = ok && worst <= 1e-10;
    os << "S(omega0+U) ratio dev " << fmt(worst) << "; ";
  }
  // delta G1 values
  {
    const double eps = 0.8;
    if (std::abs(delta_g1_formula(0.9, false, Regime::noninteracting, eps,
                                  std::nullopt) -
                 4.0 * eps * eps) > 1e-10) {
      ok = false;
    }
    if (std::abs(delta_g1_formula(pi / 2, false, Regime::strong, eps,
                                  std::nullopt) -
                 12.0 * eps * eps) > 1e-10) {
      ok = false;
    }
    if (std::abs(delta_g1_formula(0.0, true, Regime::strong, eps, std::nullopt) -
                 eps * eps * (eps * eps + 2.0)) > 1e-10) {
      ok = false;
    }
    // delta S values
    if (std::abs(delta_spectrum_bs_formula(0.0, true, 1.0) - 3.0) > 1e-10) {
      ok = false;
    }
    const double c4 = std::pow(std::cos(0.7), 4);
    if (std::abs(delta_spectrum_bs_formula(0.7, false, eps) -
                 eps * eps * 2.0 * c4) > 1e-10) {
      ok = false;
    }
    // g2 values
    if (std::abs(g2_formula(0.3, true, Regime::strong, std::nullopt) -
                 1.0 / 6.0) > 1e-10) {
      ok = false;
    }
    if (std::abs(g2_formula(0.3, false, Regime::noninteracting, std::nullopt) -
                 2.0 / 3.0) > 1e-10) {
      ok = false;
    }
    if (std::abs(g2_formula(pi / 2, false, Regime::strong, std::nullopt) - 2.0) >
        1e-10) {
      ok = false;
    }
  }
  // Bragg orders of the q = 0 channel at lambda/a = 0.3
  {
    ChainParams p3 = base_params(1e6);
    p3.lambda_over_a = 0.3;
    const std::vector<double> betas = bragg_angles(p3, Momentum{0});
    std::vector<double> positive;
    for (const double b : betas) {
      if (b >= -1e-12) positive.push_back(b / pi);
    }
    const double targets[] = {0.0, 0.10, 0.20, 0.36};
    double worst = 1.0;
    if (positive.size() == 4) {
      worst = 0.0;
      for (int i = 0; i < 4; ++i) {
        worst = std::max(worst, std::abs(positive[i] - targets[i]));
      }
    }
    ok = ok && worst <= 0.005;
    os << "Bragg peak positions dev " << fmt(worst) << " (tol 0.005)";
  }
  return {"11. closed far-field observables", ok, os.str()};
}

CheckResult check_spectrum_integral() {
  bool ok = true;
  double worst = 0.0;
  const double xi = 1e-3;
  // U = 25 exercises the finite-interaction route: the bound line then sits
  // inside the integration window
  for (const double u : {0.0, 25.0}) {
    const ChainParams p = base_params(u);
    const WaveIndex k_p{55};
    const SteadyState steady = single_pump_steady(p, k_p, xi);
    const double integral = spectrum_integral(p, steady, k_p, 50.0, 20000);
    const double g1 = g1_steady(p, steady, k_p);
    worst = std::max(worst, std::abs(integral - pi * g1) / (pi * g1));
  }
  ok = worst < 0.01;
  return {"12. spectrum integrates back to its total intensity within 1%", ok,
          "worst relative deviation " + fmt(worst)};
}

}  // namespace

std::vector<CheckResult> run_all() {
  return {
      check_rates(),          check_dicke(),
      check_phase_limits(),   check_bound_oracle(),
      check_eta_equivalence(), check_sum_rule(),
      check_zone_sums(),      check_spontaneous(),
      check_patterns(),       check_pump_steady(),
      check_closed_observables(), check_spectrum_integral(),
  };
}

}  // namespace chainlight::verify
