#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "chainlight/eigenstates.hpp"
#include "chainlight/rates.hpp"

using namespace chainlight;
using std::complex;

namespace {

ChainParams reference_params(double u = 0.0) {
  ChainParams p;
  p.sites = 101;
  p.lambda_over_a = 0.5;
  p.theta = pi / 2;
  p.interaction = u;
  return p;
}

// Formula-level scattering phase for a given hopping term, used to pin the
// degenerate-hopping limit without relying on grid values.
complex<double> phase_from(double hop, double u_int, double pa) {
  const complex<double> i(0.0, 1.0);
  return -(hop - u_int * std::exp(i * pa)) / (hop - u_int * std::exp(-i * pa));
}

}  // namespace

TEST_CASE("tight-binding decay at ka = pi/2 equals gamma0") {
  const ChainParams p = reference_params();
  CHECK(single_decay(p, pi / 2, DispersionModel::tight_binding) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("tight-binding decays are symmetric about gamma0") {
  const ChainParams p = reference_params();
  const double lo = single_decay(p, 0.0, DispersionModel::tight_binding);
  const double hi = single_decay(p, pi, DispersionModel::tight_binding);
  CHECK(lo + hi == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(lo - 1.0 == doctest::Approx(2.0 * coupling_rate(p, 1).real()));
}

TEST_CASE("full-range decay of the zone-center state reaches M gamma0 as xi -> 0") {
  ChainParams p;
  p.sites = 51;
  p.lambda_over_a = 2.0 * pi / 1e-4;
  p.theta = pi / 2;
  const double decay = single_decay(p, 0.0, DispersionModel::full_range);
  CHECK(std::abs(decay - p.sites) / p.sites < 1e-3);
}

TEST_CASE("phase shift is -1 for non-interacting atoms") {
  const ChainParams p = reference_params(0.0);
  const Zone zone(p.sites);
  const Momentum k{0};
  for (const Momentum rel : zone.positive_relative(k)) {
    CHECK(phase_shift(p, k, rel) == complex<double>(-1.0, 0.0));
  }
}

TEST_CASE("phase shift has unit modulus everywhere") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> ell(0, 100);
  std::uniform_real_distribution<double> us(1e-3, 20.0);
  for (int trial = 0; trial < 300; ++trial) {
    ChainParams p = reference_params(us(rng));
    const Zone zone(p.sites);
    const Momentum big_k = zone.sum(WaveIndex{ell(rng)}, WaveIndex{ell(rng)});
    const auto rels = zone.positive_relative(big_k);
    const Momentum rel = rels[static_cast<std::size_t>(rng() % rels.size())];
    CHECK(std::abs(std::abs(phase_shift(p, big_k, rel)) - 1.0) < 1e-12);
  }
}

TEST_CASE("strong-interaction limit of the phase shift") {
  ChainParams p = reference_params(1e6);
  const Zone zone(p.sites);
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> ell(0, 100);
  for (int trial = 0; trial < 100; ++trial) {
    const Momentum big_k = zone.sum(WaveIndex{ell(rng)}, WaveIndex{ell(rng)});
    const auto rels = zone.positive_relative(big_k);
    const Momentum rel = rels[static_cast<std::size_t>(rng() % rels.size())];
    const complex<double> expected =
        -std::exp(complex<double>(0.0, 2.0 * zone.angle(rel)));
    CHECK(std::abs(phase_shift(p, big_k, rel) - expected) < 1e-4);
  }
}

TEST_CASE("vanishing hopping term forces the strong-interaction phase") {
  // cos(Ka/2) = 0 removes the hopping term from the fraction for any U > 0
  for (const double pa : {0.3, 1.1, 2.9}) {
    for (const double u_int : {0.5, 2.0, 100.0}) {
      const complex<double> expected =
          -std::exp(complex<double>(0.0, 2.0 * pa));
      CHECK(std::abs(phase_from(0.0, u_int, pa) - expected) < 1e-15);
    }
  }
}

TEST_CASE("scattering energies do not depend on U") {
  const Zone zone(101);
  const Momentum big_k = zone.sum(WaveIndex{30}, WaveIndex{71});
  const Momentum p_rel = zone.relative(big_k, WaveIndex{71});
  TwoExcEnergy first{};
  bool have_first = false;
  for (const double u : {0.0, 0.5, 3.0, 1e6}) {
    const TwoExcState st = scattering_state(reference_params(u), big_k,
                                            Momentum{std::abs(p_rel.u)});
    if (!have_first) {
      first = st.energy;
      have_first = true;
    } else {
      CHECK(st.energy.shift == first.shift);
      CHECK(st.energy.decay == first.decay);
    }
  }
}

TEST_CASE("pair energy equals the sum of the single-excitation energies") {
  const ChainParams p = reference_params(2.0);
  const Zone zone(p.sites);
  std::mt19937 rng(23);
  std::uniform_int_distribution<int> ell(0, 100);
  for (int trial = 0; trial < 200; ++trial) {
    const WaveIndex k1{ell(rng)};
    const WaveIndex k2{ell(rng)};
    const Momentum big_k = zone.sum(k1, k2);
    const Momentum p_rel = zone.relative(big_k, k2);
    const TwoExcState st =
        scattering_state(p, big_k, Momentum{std::abs(p_rel.u)});
    const SingleExcState s1 = single_dispersion(p, k1);
    const SingleExcState s2 = single_dispersion(p, k2);
    CHECK(st.energy.shift ==
          doctest::Approx(s1.shift + s2.shift).epsilon(1e-12));
    CHECK(st.energy.decay ==
          doctest::Approx(s1.decay + s2.decay).epsilon(1e-12));
  }
}

TEST_CASE("non-interacting relative wavefunction is a free sine wave") {
  const ChainParams p = reference_params(0.0);
  const Zone zone(p.sites);
  const Momentum p_rel{11};
  const TwoExcState st = scattering_state(p, Momentum{0}, p_rel);
  const Eigen::VectorXcd psi = relative_wavefunction(p, st, 20);
  CHECK(std::abs(psi[0]) == 0.0);
  const double pa = zone.angle(p_rel);
  for (int x = 1; x <= 20; ++x) {
    const complex<double> expected =
        complex<double>(0.0, 2.0) * std::sin(pa * x) / std::sqrt(101.0);
    CHECK(std::abs(psi[x] - expected) < 1e-14);
  }
}

TEST_CASE("p = 0 and pa = pi wavefunctions vanish for any U") {
  for (const double u : {0.0, 1.7, 1e6}) {
    const ChainParams p = reference_params(u);
    for (const int pu : {0, 101}) {
      const TwoExcState st = scattering_state(p, Momentum{0}, Momentum{pu});
      const Eigen::VectorXcd psi = relative_wavefunction(p, st, 10);
      for (int x = 0; x <= 10; ++x) CHECK(std::abs(psi[x]) < 1e-12);
    }
  }
}

TEST_CASE("bound state existence follows the confinement criterion") {
  ChainParams p = reference_params(0.0);
  CHECK_FALSE(bound_state(p, Momentum{0}).has_value());
  const double im_g1 = std::abs(coupling_rate(p, 1).imag());
  p.interaction = 2.0 * im_g1;
  CHECK(bound_state(p, Momentum{0}).has_value());
  p.interaction = 0.5 * im_g1;
  CHECK_FALSE(bound_state(p, Momentum{0}).has_value());
  // a K with smaller cos(Ka/2) relaxes the criterion
  const Zone zone(p.sites);
  const Momentum edge_k{100};  // Ka/2 near the zone boundary
  CHECK(std::abs(relative_hopping(p, edge_k)) <
        std::abs(relative_hopping(p, Momentum{0})));
}

TEST_CASE("|alpha| < 1 when the bound state exists and decreases with U") {
  ChainParams p = reference_params(0.0);
  const double im_g1 = std::abs(coupling_rate(p, 1).imag());
  double prev = 1.0;
  for (double u = 1.5 * im_g1; u < 100.0 * im_g1; u *= 2.0) {
    p.interaction = u;
    const auto bs = bound_state(p, Momentum{0});
    REQUIRE(bs.has_value());
    const double mag = std::abs(bs->amplitude);
    CHECK(mag < 1.0);
    CHECK(mag < prev);
    prev = mag;
  }
}

TEST_CASE("strongly bound pairs are confined to adjacent sites") {
  const ChainParams p = reference_params(1e6);
  const auto bs = bound_state(p, Momentum{0});
  REQUIRE(bs.has_value());
  const Eigen::VectorXcd psi = relative_wavefunction(p, *bs, 6);
  CHECK(std::abs(psi[1]) == doctest::Approx(1.0));
  for (int x = 2; x <= 6; ++x) CHECK(std::abs(psi[x]) < 1e-6 * std::abs(psi[1]));
}

TEST_CASE("bound energy matches the impurity-level formula without dissipation") {
  ChainParams p = reference_params(0.0);
  const double t = std::abs(relative_hopping(p, Momentum{0}));
  p.interaction = 5.0 * t;
  const auto bs = bound_state(p, Momentum{0});
  REQUIRE(bs.has_value());
  CHECK(nondissipative_shift(p, *bs) ==
        doctest::Approx(p.interaction + t * t / p.interaction).epsilon(1e-12));
}
