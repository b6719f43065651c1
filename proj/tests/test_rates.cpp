#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "chainlight/params.hpp"
#include "chainlight/rates.hpp"

using namespace chainlight;

namespace {
ChainParams reference_params() {
  ChainParams p;
  p.sites = 101;
  p.lambda_over_a = 0.5;
  p.theta = pi / 2;
  return p;
}
}  // namespace

TEST_CASE("on-site rate is 1 - 2i/pi for any configuration") {
  ChainParams p = reference_params();
  const auto g0 = coupling_rate(p, 0);
  CHECK(g0.real() == 1.0);
  CHECK(g0.imag() == doctest::Approx(-2.0 / pi).epsilon(1e-15));
  p.lambda_over_a = 3.7;
  p.theta = 0.3;
  CHECK(coupling_rate(p, 0) == g0);
}

TEST_CASE("nearest-neighbour rate at lambda/a = 0.5, theta = pi/2") {
  const auto g1 = coupling_rate(reference_params(), 1);
  // 0.009 - 0.119i to three decimals
  CHECK(std::round(g1.real() * 1000.0) / 1000.0 == doctest::Approx(0.009));
  CHECK(std::round(g1.imag() * 1000.0) / 1000.0 == doctest::Approx(-0.119));
}

TEST_CASE("small-xi limit: Re(Gamma_x) -> 1 for every dipole angle") {
  for (const double theta : {0.0, 0.3, pi / 4, 1.2, pi / 2}) {
    ChainParams p;
    p.sites = 51;
    p.theta = theta;
    p.lambda_over_a = 2.0 * pi / 1e-4;  // xi_1 = 1e-4
    const auto g1 = coupling_rate(p, 1);
    CHECK(std::abs(g1.real() - 1.0) < 1e-3);
  }
}

TEST_CASE("coupling rate is finite and continuous across lambda/a") {
  ChainParams p = reference_params();
  std::complex<double> prev = 0.0;
  bool have_prev = false;
  for (double ratio = 0.05; ratio < 4.0; ratio += 0.01) {
    p.lambda_over_a = ratio;
    for (const int x : {1, 2, 5}) {
      const auto g = coupling_rate(p, x);
      CHECK(std::isfinite(g.real()));
      CHECK(std::isfinite(g.imag()));
    }
    const auto g1 = coupling_rate(p, 1);
    if (have_prev) CHECK(std::abs(g1 - prev) < 0.5);
    prev = g1;
    have_prev = true;
  }
}

TEST_CASE("negative separation is rejected") {
  CHECK_THROWS_AS(coupling_rate(reference_params(), -1), std::invalid_argument);
}

TEST_CASE("dipole pattern extremes") {
  const double theta = 0.7;
  const Eigen::Vector3d d(std::sin(theta), 0.0, std::cos(theta));
  CHECK(dipole_pattern(d, theta) == doctest::Approx(0.0).epsilon(1e-14));
  const Eigen::Vector3d perp(0.0, 1.0, 0.0);
  CHECK(dipole_pattern(perp, theta) == doctest::Approx(1.0));
  // theta = pi/2: emission along the chain axis is maximal
  CHECK(dipole_pattern(Eigen::Vector3d(0, 0, 1), pi / 2) ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(dipole_pattern(Eigen::Vector3d(0, 0, 2), 0.1),
                  std::invalid_argument);
}

TEST_CASE("parameter validation") {
  ChainParams p = reference_params();
  p.validate();
  p.sites = 100;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.sites = 101;
  p.interaction = -1.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}
