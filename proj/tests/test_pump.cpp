#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "chainlight/pump.hpp"
#include "chainlight/rates.hpp"
#include "test_support.hpp"

using namespace chainlight;
using chainlight::testing::reference_params;

namespace {

// relative deviation with an absolute floor at the truncation order xi^3:
// occupations smaller than that are not resolved by the Xi^2 expansion
void check_close(double got, double want, double rel, double floor) {
  CHECK(std::abs(got - want) <= rel * std::abs(want) + floor);
}

void compare_steady(const SteadyState& analytic, const SteadyState& numeric,
                    double rel, double xi) {
  const double floor = xi * xi * xi;
  for (const auto& [ell, want] : analytic.one) {
    const auto it = numeric.one.find(ell);
    const double got = (it == numeric.one.end()) ? 0.0 : it->second;
    check_close(got, want, rel, floor);
  }
  for (const auto& [key, want] : analytic.two) {
    const auto it = numeric.two.find(key);
    const double got = (it == numeric.two.end()) ? 0.0 : it->second;
    check_close(got, want, rel, floor);
  }
}

double beta_of(const ChainParams& p, WaveIndex k) {
  const Zone zone(p.sites);
  return std::asin(zone.angle(zone.momentum(k)) / p.k_at_a());
}

}  // namespace

TEST_CASE("pump validation: weak-drive window") {
  const ChainParams p = reference_params();
  PumpConfig config;
  config.pumps.push_back({0.2, 0.004});
  CHECK(config.validate(p).empty());
  config.pumps.push_back({0.3, 0.02});
  CHECK(config.validate(p).size() == 1);  // warning only
  config.pumps.push_back({0.1, 0.05});
  CHECK_THROWS_AS(config.validate(p), std::invalid_argument);
}

TEST_CASE("single pump: linear term sits at the driven wavenumber") {
  const ChainParams p = reference_params(0.0);
  const WaveIndex k_p{60};
  const double xi = 1e-4;
  const SteadyState steady = single_pump_steady(p, k_p, xi);
  steady.check_physical();
  CHECK(steady.one.at(k_p.ell) == doctest::Approx(xi).epsilon(2e-4));
  for (const auto& [key, v] : steady.two) {
    CHECK_FALSE(key.is_bound());  // no bound state without interaction
    CHECK(key.big_k_u == Zone(p.sites).doubled(k_p).u);
    CHECK(v <= xi * xi);
  }
}

TEST_CASE("single pump, strong interaction: bound-state occupation 2 Xi^2 / M") {
  const ChainParams p = reference_params(1e6);
  const Zone zone(p.sites);
  const WaveIndex k_p{70};
  const double xi = 1e-3;
  const SteadyState steady = single_pump_steady(p, k_p, xi);
  const TwoKey bs_key{zone.doubled(k_p).u, TwoKey::bound_marker};
  // (Xi^2/2) |eta_0|^2 with |eta_0|^2 = 4/M
  CHECK(steady.two.at(bs_key) ==
        doctest::Approx(0.5 * xi * xi * 4.0 / p.sites).epsilon(1e-12));
}

TEST_CASE("numeric steady state agrees with the analytic Xi^2 order") {
  std::mt19937 rng(53);
  std::uniform_int_distribution<int> ell(0, 50);
  const double xi = 1e-3;
  for (const double u : {0.0, 1e6}) {
    ChainParams p = reference_params(u, 51);
    for (int trial = 0; trial < 4; ++trial) {
      const WaveIndex k_p{ell(rng)};
      const SteadyState analytic = single_pump_steady(p, k_p, xi);
      PumpConfig config;
      config.pumps.push_back({beta_of(p, k_p), xi});
      const SteadyState numeric = rate_steady_numeric(p, config);
      compare_steady(analytic, numeric, 10.0 * xi, xi);
    }
  }
}

TEST_CASE("two pumps: epsilon = 0 collapses to the single-pump state") {
  const ChainParams p = reference_params(1e6);
  const WaveIndex k1{20}, k2{77};
  const double xi = 2e-3;
  const SteadyState two = two_pump_steady(p, k1, k2, xi, 0.0);
  const SteadyState one = single_pump_steady(p, k1, xi);
  REQUIRE(two.one.size() == one.one.size());
  for (const auto& [ell, v] : one.one) CHECK(two.one.at(ell) == v);
  for (const auto& [key, v] : one.two) CHECK(two.two.at(key) == v);
}

TEST_CASE("two equal pumps equal one pump with rate (1+eps^2)|P|^2") {
  const ChainParams p = reference_params(0.0);
  const WaveIndex k{40};
  const double xi = 1e-3;
  const double eps = 0.7;
  const SteadyState degenerate = two_pump_steady(p, k, k, xi, eps);
  const SteadyState boosted = single_pump_steady(p, k, xi * (1.0 + eps * eps));
  for (const auto& [ell, v] : boosted.one) {
    CHECK(degenerate.one.at(ell) == doctest::Approx(v).epsilon(1e-14));
  }
  // and the numeric route agrees with the replacement rule
  PumpConfig config;
  config.pumps.push_back({beta_of(p, k), xi});
  config.pumps.push_back({beta_of(p, k), eps * eps * xi});
  const SteadyState numeric = rate_steady_numeric(p, config);
  compare_steady(boosted, numeric, 10.0 * xi * (1.0 + eps * eps), xi);
}

TEST_CASE("two-pump steady state matches the numeric oracle") {
  std::mt19937 rng(59);
  std::uniform_int_distribution<int> ell(0, 50);
  const double xi = 1e-3;
  const double eps = 0.5;
  for (const double u : {0.0, 1e6}) {
    ChainParams p = reference_params(u, 51);
    for (int trial = 0; trial < 3; ++trial) {
      const WaveIndex k1{ell(rng)};
      WaveIndex k2{ell(rng)};
      if (k2.ell == k1.ell) k2.ell = (k2.ell + 7) % p.sites;
      const SteadyState analytic = two_pump_steady(p, k1, k2, xi, eps);
      analytic.check_physical();
      PumpConfig config;
      config.pumps.push_back({beta_of(p, k1), xi});
      config.pumps.push_back({beta_of(p, k2), eps * eps * xi});
      const SteadyState numeric = rate_steady_numeric(p, config);
      compare_steady(analytic, numeric, 10.0 * xi, xi);
    }
  }
}

TEST_CASE("vacuum without pumps") {
  const ChainParams p = reference_params();
  const SteadyState steady = rate_steady_numeric(p, PumpConfig{});
  CHECK(steady.one.empty());
  CHECK(steady.two.empty());
}

TEST_CASE("closed G1: linear plus 1/3 delta term, bound tail at strong U") {
  ChainParams p = reference_params(0.0);
  const Zone zone(p.sites);
  const WaveIndex k_p{30};
  const double xi = 1e-3;
  CHECK(g1_single_pump_closed(p, k_p, k_p, xi, Regime::noninteracting) ==
        doctest::Approx(xi + xi * xi / 3.0).epsilon(1e-14));
  const WaveIndex other{44};
  CHECK(g1_single_pump_closed(p, other, k_p, xi, Regime::noninteracting) == 0.0);
  const double m = p.sites;
  const double c = std::cos(zone.angle(zone.momentum(other)) -
                            zone.angle(zone.momentum(k_p)));
  CHECK(g1_single_pump_closed(p, other, k_p, xi, Regime::strong) ==
        doctest::Approx(xi * xi * 16.0 / (m * m) * c * c).epsilon(1e-14));
}

TEST_CASE("steady-state G1 route approaches the closed form") {
  const double xi = 1e-3;
  for (const double u : {0.0, 1e6}) {
    double prev = 1.0;
    for (const int sites : {101, 401}) {
      ChainParams p = reference_params(u, sites);
      const Regime regime = classify_regime(p);
      const WaveIndex k_p{3 * sites / 5};
      const SteadyState steady = single_pump_steady(p, k_p, xi);
      double worst = 0.0;
      for (const int ell : {3 * sites / 5, sites / 10, 9 * sites / 10}) {
        const double closed =
            g1_single_pump_closed(p, WaveIndex{ell}, k_p, xi, regime);
        const double summed = g1_steady(p, steady, WaveIndex{ell});
        worst = std::max(worst, std::abs(summed - closed));
      }
      // the closed form replaces the finite zone sums by their limits,
      // accurate to O(1/M)
      CHECK(worst < 30.0 / sites * xi * xi);
      CHECK(worst < prev);
      prev = worst;
    }
  }
}

TEST_CASE("nonlinear intensity difference: the printed values") {
  CHECK(delta_g1_formula(0.9, false, Regime::noninteracting, 1.0, std::nullopt) ==
        doctest::Approx(4.0).epsilon(1e-15));
  CHECK(delta_g1_formula(pi / 2, false, Regime::strong, 1.0, std::nullopt) ==
        doctest::Approx(12.0).epsilon(1e-10));
  const double eps = 0.6;
  CHECK(delta_g1_formula(0.0, true, Regime::strong, eps, std::nullopt) ==
        doctest::Approx(eps * eps * (eps * eps + 2.0)).epsilon(1e-15));
  // finite-M bound correction
  const double with_m = delta_g1_formula(0.3, false, Regime::strong, 1.0, 101);
  const double limit = delta_g1_formula(0.3, false, Regime::strong, 1.0,
                                        std::nullopt);
  const double c = std::cos(0.3);
  CHECK(with_m - limit ==
        doctest::Approx(96.0 / (101.0 * 101.0) * c * c * c * c));
}

TEST_CASE("two-pump observables are even in q") {
  for (const double qa : {0.2, 0.9, 1.4}) {
    CHECK(delta_g1_formula(qa, false, Regime::strong, 0.8, 101) ==
          delta_g1_formula(-qa, false, Regime::strong, 0.8, 101));
    CHECK(delta_spectrum_bs_formula(qa, false, 0.8) ==
          delta_spectrum_bs_formula(-qa, false, 0.8));
    CHECK(g2_formula(qa, false, Regime::strong, 101) ==
          g2_formula(-qa, false, Regime::strong, 101));
  }
}

TEST_CASE("bound-state spectral signature values") {
  CHECK(delta_spectrum_bs_formula(0.0, true, 1.0) == doctest::Approx(3.0));
  CHECK(delta_spectrum_bs_formula(pi / 2, false, 1.0) ==
        doctest::Approx(0.0).epsilon(1e-10));
  const double c = std::cos(0.4);
  CHECK(delta_spectrum_bs_formula(0.4, false, 0.5) ==
        doctest::Approx(0.25 * 2.0 * c * c * c * c));
}

TEST_CASE("g2 plateau values") {
  CHECK(g2_formula(0.7, true, Regime::noninteracting, std::nullopt) ==
        doctest::Approx(1.0 / 6.0));
  CHECK(g2_formula(0.7, true, Regime::strong, std::nullopt) ==
        doctest::Approx(1.0 / 6.0));
  CHECK(g2_formula(0.7, false, Regime::noninteracting, std::nullopt) ==
        doctest::Approx(2.0 / 3.0));
  CHECK(g2_formula(pi / 2, false, Regime::strong, std::nullopt) ==
        doctest::Approx(2.0).epsilon(1e-10));
  // finite-M bound correction, halved on the degenerate angles
  const double c4 = std::pow(std::cos(0.2), 4);
  const double m2 = 101.0 * 101.0;
  CHECK(g2_formula(0.2, false, Regime::strong, 101) -
            g2_formula(0.2, false, Regime::strong, std::nullopt) ==
        doctest::Approx(16.0 / m2 * c4));
  CHECK(g2_formula(0.0, true, Regime::strong, 101) ==
        doctest::Approx(1.0 / 6.0 + 8.0 / m2));
}

TEST_CASE("spectrum: bound line ratio reproduces cos^2 and the integral "
          "matches G1") {
  const ChainParams p = reference_params(1e6);
  const WaveIndex k_p{55};
  const double xi = 1e-3;
  const SteadyState steady = single_pump_steady(p, k_p, xi);
  const Zone zone(p.sites);
  for (const int ell : {55, 20, 90}) {
    const double ratio = spectrum_bs_peak(p, steady, WaveIndex{ell}) /
                         spectrum_bs_peak(p, steady, k_p);
    const double c = std::cos(zone.angle(zone.momentum(WaveIndex{ell})) -
                              zone.angle(zone.momentum(k_p)));
    CHECK(ratio == doctest::Approx(c * c).epsilon(1e-9));
  }
  // integral over +-50 gamma0 reproduces pi * G1 within one percent
  const double integral = spectrum_integral(p, steady, k_p, 50.0, 4000);
  const double g1 = g1_steady(p, steady, k_p);
  CHECK(std::abs(integral - pi * g1) / (pi * g1) < 0.01);
}

TEST_CASE("closed spectrum peaks") {
  const ChainParams p = reference_params(1e6);
  const WaveIndex k_p{55};
  const double xi = 1e-3;
  const SteadyState steady = single_pump_steady(p, k_p, xi);
  // the closed bound-peak value equals the component sum
  for (const int ell : {55, 33}) {
    CHECK(spectrum_bs_peak(p, steady, WaveIndex{ell}) ==
          doctest::Approx(spectrum_bs_peak_closed(p, WaveIndex{ell}, k_p, xi,
                                                  Regime::strong))
              .epsilon(1e-6));
  }
  // and the origin peak approaches its closed form in the zone-sum limit
  const double origin = spectrum_value(p, steady, k_p, 0.0);
  const double closed =
      spectrum_origin_peak_closed(p, k_p, k_p, xi, Regime::strong);
  CHECK(std::abs(origin - closed) < 30.0 / p.sites * xi * xi);
}

TEST_CASE("g2 from angles uses exact index equality for the degenerate case") {
  ChainParams p = reference_params(0.0);
  p.lambda_over_a = 0.5;
  const double beta2 = std::asin(0.5);
  // same angles on both detectors: q = 0 exactly
  CHECK(g2_angles(p, beta2, beta2, std::nullopt) == doctest::Approx(1.0 / 6.0));
  // a generic second angle lands on a different grid point
  CHECK(g2_angles(p, 0.31, beta2, std::nullopt) == doctest::Approx(2.0 / 3.0));
}
