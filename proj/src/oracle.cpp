#include "chainlight/oracle.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

#include "chainlight/rate_network.hpp"

namespace chainlight {

TridiagonalProblem relative_problem(const ChainParams& params, Momentum big_k) {
  return {params.rel_extent(), relative_hopping(params, big_k),
          params.interaction / params.gamma0};
}

RelativeSpectrum diagonalize_relative(const TridiagonalProblem& problem) {
  if (problem.dim < 16) {
    throw std::invalid_argument("diagonalize_relative: dim must be >= 16");
  }
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(problem.dim);
  diag[0] = problem.impurity;
  const Eigen::VectorXd sub =
      Eigen::VectorXd::Constant(problem.dim - 1, problem.hopping);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("diagonalize_relative: QL iteration failed");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

std::optional<double> detached_eigenvalue(const RelativeSpectrum& spectrum,
                                          const TridiagonalProblem& problem,
                                          double margin) {
  const double edge = 2.0 * std::abs(problem.hopping);
  const double top = spectrum.values[spectrum.values.size() - 1];
  if (top > edge + margin) return top;
  return std::nullopt;
}

double residual(const TridiagonalProblem& problem,
                const Eigen::Ref<const Eigen::VectorXcd>& psi, double energy) {
  if (psi.size() != problem.dim) {
    throw std::invalid_argument("residual: psi must have length dim");
  }
  const double norm = psi.norm();
  if (norm == 0.0) throw std::invalid_argument("residual: zero vector");
  Eigen::VectorXcd r = Eigen::VectorXcd::Zero(problem.dim);
  for (int x = 0; x < problem.dim; ++x) {
    std::complex<double> acc = -energy * psi[x];
    if (x == 0) acc += problem.impurity * psi[x];
    if (x > 0) acc += problem.hopping * psi[x - 1];
    if (x + 1 < problem.dim) acc += problem.hopping * psi[x + 1];
    r[x] = acc;
  }
  return r.norm() / norm;
}

double analytic_residual(const ChainParams& params, const TwoExcState& state,
                         int dim) {
  TridiagonalProblem problem = relative_problem(params, state.big_k);
  problem.dim = dim;
  Eigen::VectorXcd psi(dim);
  if (state.bound()) {
    // pair amplitude of the non-dissipative system: alpha = t_K / U, real
    const double alpha = problem.hopping / problem.impurity;
    double pow_a = 1.0;
    for (int x = 0; x < dim; ++x) {
      psi[x] = pow_a;
      pow_a *= alpha;
    }
  } else {
    // the scattering phase shift is already the non-dissipative one
    const Zone zone(params.sites);
    const double pa = zone.angle(*state.p);
    const std::complex<double> I(0.0, 1.0);
    for (int x = 0; x < dim; ++x) {
      psi[x] = std::exp(I * (pa * (x + 1))) +
               state.amplitude * std::exp(-I * (pa * (x + 1)));
    }
  }
  const double energy = state.bound()
                            ? problem.impurity + problem.hopping * problem.hopping /
                                                     problem.impurity
                            : 2.0 * problem.hopping *
                                  std::cos(Zone(params.sites).angle(*state.p));
  return residual(problem, psi, energy);
}

namespace {

std::vector<TwoKey> keys_of(const DensityState& rho) {
  std::vector<TwoKey> keys;
  for (const auto& [key, pop] : rho.two) keys.push_back(key);
  return keys;
}

void check_dt(const ChainParams& params, double dt) {
  if (!(dt > 0.0) || dt > 0.01 / params.gamma0) {
    throw std::invalid_argument("rate integration requires 0 < dt <= 0.01/gamma0");
  }
}

void rk4_step(const RateNetwork& net, Eigen::VectorXd& y, double dt,
              Eigen::VectorXd& k1, Eigen::VectorXd& k2, Eigen::VectorXd& k3,
              Eigen::VectorXd& k4, Eigen::VectorXd& tmp) {
  net.derivative(y, k1);
  tmp = y + 0.5 * dt * k1;
  net.derivative(tmp, k2);
  tmp = y + 0.5 * dt * k2;
  net.derivative(tmp, k3);
  tmp = y + dt * k3;
  net.derivative(tmp, k4);
  y += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

std::vector<std::pair<double, DensityState>> integrate_spontaneous(
    const ChainParams& params, const DensityState& initial, double t_end,
    double dt, RateModel model, int store_every) {
  check_dt(params, dt);
  if (t_end < 0.0) throw std::invalid_argument("t_end must be >= 0");
  const RateNetwork net =
      RateNetwork::build(params, classify_regime(params), model, {}, {},
                         keys_of(initial));
  Eigen::VectorXd y = net.pack(initial);
  Eigen::VectorXd k1(net.dim()), k2(net.dim()), k3(net.dim()), k4(net.dim()),
      tmp(net.dim());
  std::vector<std::pair<double, DensityState>> trajectory;
  trajectory.emplace_back(0.0, net.unpack(y));
  const int steps = static_cast<int>(std::ceil(t_end / dt - 1e-12));
  const double h = (steps > 0) ? t_end / steps : 0.0;
  for (int i = 0; i < steps; ++i) {
    rk4_step(net, y, h, k1, k2, k3, k4, tmp);
    if ((i + 1) % store_every == 0 || i + 1 == steps) {
      trajectory.emplace_back((i + 1) * h, net.unpack(y));
    }
  }
  return trajectory;
}

DensityState integrate_pumped(const ChainParams& params, const PumpConfig& config,
                              double t_end, double dt, RateModel model,
                              std::optional<Regime> regime) {
  check_dt(params, dt);
  PumpConfig cfg = config;
  cfg.validate(params);
  std::vector<double> pr;
  for (const Pump& p : cfg.pumps) pr.push_back(p.rate / params.gamma0);
  const RateNetwork net =
      RateNetwork::build(params, regime.value_or(classify_regime(params)), model,
                         cfg.wave_indices(params), pr);
  DensityState vacuum;
  vacuum.vacuum = 1.0;
  Eigen::VectorXd y = net.pack(vacuum);
  Eigen::VectorXd k1(net.dim()), k2(net.dim()), k3(net.dim()), k4(net.dim()),
      tmp(net.dim());
  const int steps = static_cast<int>(std::ceil(t_end / dt - 1e-12));
  const double h = (steps > 0) ? t_end / steps : 0.0;
  for (int i = 0; i < steps; ++i) rk4_step(net, y, h, k1, k2, k3, k4, tmp);
  return net.unpack(y);
}

}  // namespace chainlight
