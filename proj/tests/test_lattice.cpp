#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "chainlight/lattice.hpp"

using namespace chainlight;

TEST_CASE("wave index round trip is exact") {
  for (const int m : {3, 5, 101, 401}) {
    const Zone zone(m);
    for (int ell = 0; ell < m; ++ell) {
      const Momentum q = zone.momentum(WaveIndex{ell});
      CHECK(std::abs(q.u) % 2 == 1);
      CHECK(q.u > -m);
      CHECK(q.u <= m);
      CHECK(zone.wave_index(q).ell == ell);
    }
  }
}

TEST_CASE("reduction is 2M periodic and lands in (-M, M]") {
  const Zone zone(7);
  for (int u = -40; u <= 40; ++u) {
    const int r = zone.reduce(u);
    CHECK(r > -7);
    CHECK(r <= 7);
    CHECK((u - r) % 14 == 0);
    CHECK(zone.reduce(u + 14) == r);
  }
}

TEST_CASE("center-of-mass momenta live on the even grid and halve exactly") {
  const Zone zone(11);
  for (int e1 = 0; e1 < 11; ++e1) {
    for (int e2 = 0; e2 < 11; ++e2) {
      const Momentum k = zone.sum(WaveIndex{e1}, WaveIndex{e2});
      CHECK(std::abs(k.u) % 2 == 0);
      const Momentum half = zone.half(k);
      CHECK(zone.reduce(2 * half.u) == k.u);
    }
  }
}

TEST_CASE("doubling a wave index maps K/2 back to it up to the zone shift") {
  const Zone zone(101);
  for (int ell = 0; ell < 101; ++ell) {
    const WaveIndex k{ell};
    const Momentum rel = zone.relative(zone.doubled(k), k);
    // the channel at the driving wavenumber is q = 0 up to the K-branch gauge
    CHECK((rel.u == 0 || std::abs(rel.u) == 101));
  }
}

TEST_CASE("relative grid covers the zone once with fixed parity") {
  const Zone zone(11);
  for (const int ku : {0, 2, -4, 10}) {
    const std::vector<Momentum> grid = zone.relative_grid(Momentum{ku});
    CHECK(grid.size() == 11);
    std::set<int> seen;
    for (const Momentum q : grid) {
      seen.insert(q.u);
      CHECK(std::abs(q.u) % 2 == std::abs(grid[0].u) % 2);
    }
    CHECK(seen.size() == 11);
  }
}

TEST_CASE("positive relative momenta exclude the vanishing pair states") {
  const Zone zone(11);
  for (const int ku : {0, 2, -4}) {
    for (const Momentum p : zone.positive_relative(Momentum{ku})) {
      CHECK(p.u > 0);
      CHECK(p.u < 11);
    }
  }
  // odd-parity grids hold (M+1)/2 positive values incl. pa = pi; minus one
  CHECK(zone.positive_relative(Momentum{0}).size() == 5);
  // even-parity grids drop q = 0
  CHECK(zone.positive_relative(Momentum{2}).size() == 5);
}

TEST_CASE("snapping: exact grid points, ties, wrap-around") {
  const Zone zone(101);
  for (int ell = 0; ell < 101; ell += 10) {
    const Momentum q = zone.momentum(WaveIndex{ell});
    const Zone::Snap snap = zone.snap_wave(static_cast<double>(q.u));
    CHECK(snap.k.ell == ell);
    CHECK(snap.residual == 0.0);
  }
  // target exactly between two grid points: deterministic with |residual| 1/2
  const Zone::Snap tie = zone.snap_wave(0.0);
  CHECK(std::abs(tie.residual) == 0.5);
  CHECK(std::abs(zone.momentum(tie.k).u) == 1);
  // wrap: a target just past the zone edge snaps to the edge state
  const Zone::Snap wrap = zone.snap_wave(-100.8);  // equivalent to +101.2
  CHECK(zone.momentum(wrap.k).u == 101);
  CHECK(wrap.residual == doctest::Approx(0.1));
}

TEST_CASE("relative pair of equal indices is zero") {
  const Zone zone(101);
  for (int ell = 0; ell < 101; ell += 7) {
    CHECK(zone.relative_pair(WaveIndex{ell}, WaveIndex{ell}).u == 0);
  }
  CHECK(zone.relative_pair(WaveIndex{3}, WaveIndex{10}).u == -7);
}
