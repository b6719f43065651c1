#pragma once

#include <Eigen/Dense>
#include <optional>
#include <utility>
#include <vector>

#include "chainlight/dynamics.hpp"
#include "chainlight/eigenstates.hpp"
#include "chainlight/params.hpp"
#include "chainlight/pump.hpp"

namespace chainlight {

// Hermitian relative-coordinate problem of a two-excitation state with
// center-of-mass K: hopping t_K on a chain of `dim` sites (relative
// coordinates x = 1 .. dim), impurity U on the first site, hard walls on
// both ends. Energies are offsets from the band center.
struct TridiagonalProblem {
  int dim = 0;
  double hopping = 0.0;
  double impurity = 0.0;
};

TridiagonalProblem relative_problem(const ChainParams& params, Momentum big_k);

struct RelativeSpectrum {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // columns
};

// Full spectrum via the tridiagonal QL path; requires dim >= 16.
RelativeSpectrum diagonalize_relative(const TridiagonalProblem& problem);

// Largest eigenvalue when it is detached from the band [-2|t|, 2|t|] by more
// than `margin`; otherwise absent.
std::optional<double> detached_eigenvalue(const RelativeSpectrum& spectrum,
                                          const TridiagonalProblem& problem,
                                          double margin);

// ||(H - E) psi|| / ||psi|| for an analytic eigenpair against the hard-wall
// matrix; psi holds Psi_1 .. Psi_dim. Throws on a zero vector.
double residual(const TridiagonalProblem& problem,
                const Eigen::Ref<const Eigen::VectorXcd>& psi, double energy);

// Residual of an eigenstate from the analytic family, using the
// non-dissipative energy and the ansatz wavefunction truncated at dim.
double analytic_residual(const ChainParams& params, const TwoExcState& state,
                         int dim);

// Fixed-step RK4 integration of the population rate equations. dt must be
// <= 0.01/gamma0. The trajectory holds (t, state) every `store_every` steps
// (always including t = 0 and t_end).
std::vector<std::pair<double, DensityState>> integrate_spontaneous(
    const ChainParams& params, const DensityState& initial, double t_end,
    double dt, RateModel model = RateModel::sharp, int store_every = 100);

// Same integrator with pumping, returning the final state; long t_end
// approaches the stationary point of the rate equations.
DensityState integrate_pumped(const ChainParams& params, const PumpConfig& config,
                              double t_end, double dt,
                              RateModel model = RateModel::sharp,
                              std::optional<Regime> regime = std::nullopt);

}  // namespace chainlight
