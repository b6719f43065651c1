#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <vector>

#include "chainlight/dynamics.hpp"
#include "chainlight/momentum.hpp"
#include "chainlight/params.hpp"

namespace chainlight {

// The coupled population rate equations, assembled once and shared by the
// ODE integrator and the stationary linear solve so both see identical
// coefficients. Branching weights are normalized per state, which makes the
// network conserve total probability exactly.
struct RateNetwork {
  struct TwoLevel {
    TwoKey key;
    double gamma_tot = 0.0;
    Eigen::ArrayXd eta2;  // |eta|^2 per decay channel (ell order)
    Eigen::ArrayXd feed;  // Gamma^{K nu}_k, sums exactly to gamma_tot
  };

  ChainParams params;
  Regime regime = Regime::general;
  RateModel model = RateModel::sharp;
  std::vector<WaveIndex> pump_k;
  std::vector<double> pump_rate;  // |P_n|^2 in gamma0 units
  std::vector<TwoLevel> two;
  std::map<int, std::vector<int>> manifold_of;  // K_u -> indices into `two`
  Eigen::ArrayXd gamma_one;
  Eigen::ArrayXd gamma_tilde;

  // restrict_to limits the two-excitation levels to the given keys (used for
  // spontaneous decay of a known initial state); otherwise every manifold
  // reachable from the pumps is included.
  static RateNetwork build(const ChainParams& params, Regime regime,
                           RateModel model,
                           const std::vector<WaveIndex>& pump_k,
                           const std::vector<double>& pump_rate,
                           const std::optional<std::vector<TwoKey>>& restrict_to =
                               std::nullopt);

  int dim() const { return static_cast<int>(two.size()) + params.sites + 1; }
  Eigen::VectorXd pack(const DensityState& rho) const;
  DensityState unpack(const Eigen::Ref<const Eigen::VectorXd>& y) const;
  void derivative(const Eigen::Ref<const Eigen::VectorXd>& y,
                  Eigen::Ref<Eigen::VectorXd> dy) const;
};

}  // namespace chainlight
