#include "chainlight/lattice.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace chainlight {

Zone::Zone(int sites) : m_(sites) {
  if (sites < 3 || sites % 2 == 0) {
    throw std::invalid_argument("Zone requires an odd site count >= 3");
  }
}

int Zone::reduce(int u) const {
  const int period = 2 * m_;
  int r = u % period;
  if (r <= -m_) r += period;
  if (r > m_) r -= period;
  return r;
}

Momentum Zone::momentum(WaveIndex k) const {
  if (k.ell < 0 || k.ell >= m_) {
    throw std::invalid_argument("WaveIndex out of range [0, M)");
  }
  return {reduce(2 * k.ell - m_)};
}

WaveIndex Zone::wave_index(Momentum q) const {
  const int u = reduce(q.u);
  if (std::abs(u) % 2 != 1) {
    throw std::invalid_argument("momentum u=" + std::to_string(u) +
                                " is not on the single-excitation grid");
  }
  return {((u + m_) / 2) % m_};
}

Momentum Zone::sum(WaveIndex k1, WaveIndex k2) const {
  return {reduce(momentum(k1).u + momentum(k2).u)};
}

Momentum Zone::doubled(WaveIndex k) const {
  return {reduce(2 * momentum(k).u)};
}

Momentum Zone::half(Momentum big_k) const {
  const int u = reduce(big_k.u);
  if (std::abs(u) % 2 != 0) {
    throw std::invalid_argument("center-of-mass momentum must have even u");
  }
  return {u / 2};
}

Momentum Zone::negate(Momentum q) const { return {reduce(-q.u)}; }

Momentum Zone::relative(Momentum big_k, WaveIndex k) const {
  return {reduce(half(big_k).u - momentum(k).u)};
}

Momentum Zone::relative_pair(WaveIndex k1, WaveIndex k2) const {
  return {reduce((momentum(k1).u - momentum(k2).u) / 2)};
}

std::vector<Momentum> Zone::relative_grid(Momentum big_k) const {
  std::vector<Momentum> out;
  out.reserve(m_);
  for (int ell = 0; ell < m_; ++ell) {
    out.push_back(relative(big_k, WaveIndex{ell}));
  }
  return out;
}

std::vector<Momentum> Zone::positive_relative(Momentum big_k) const {
  std::vector<Momentum> out;
  for (const Momentum q : relative_grid(big_k)) {
    if (q.u > 0 && q.u < m_) out.push_back(q);
  }
  return out;
}

std::vector<Momentum> Zone::state_labels(Momentum big_k) const {
  std::vector<Momentum> out;
  for (const Momentum q : relative_grid(big_k)) {
    if (q.u != 0 && std::abs(q.u) < m_) out.push_back(q);
  }
  return out;
}

Zone::Snap Zone::snap_wave(double u_target) const {
  const int period = 2 * m_;
  double t = std::fmod(u_target, static_cast<double>(period));
  if (t <= -m_) t += period;
  if (t > m_) t -= period;
  // odd integers bracketing t
  const double lo = 2.0 * std::floor((t - 1.0) / 2.0) + 1.0;
  const double hi = lo + 2.0;
  const double dlo = t - lo;
  const double dhi = hi - t;
  double u_pick = (dlo < dhi) ? lo : hi;
  if (dlo == dhi) u_pick = (std::abs(lo) <= std::abs(hi)) ? lo : hi;
  const int u = reduce(static_cast<int>(std::lround(u_pick)));
  double residual = (t - u_pick) / 2.0;
  return {wave_index(Momentum{u}), residual};
}

}  // namespace chainlight
