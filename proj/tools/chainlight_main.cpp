// chainlight — far-field optics of a dissipative chain of interacting
// two-level atoms: eigenstates, momentum distributions, emission patterns,
// pump-driven steady states, spectra and intensity correlations.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "chainlight/dynamics.hpp"
#include "chainlight/eigenstates.hpp"
#include "chainlight/io.hpp"
#include "chainlight/momentum.hpp"
#include "chainlight/oracle.hpp"
#include "chainlight/parallel.hpp"
#include "chainlight/pump.hpp"
#include "chainlight/rates.hpp"
#include "chainlight/verify.hpp"

using namespace chainlight;
using nlohmann::json;

namespace {

struct OutputSpec {
  std::string path;    // empty = stdout
  std::string format = "csv";
};

struct CliError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int g_threads = 0;        // 0 = resolve from environment / hardware
bool g_strict_grid = false;

void write_table(const io::Table& table, const OutputSpec& out) {
  std::ostream* os = &std::cout;
  std::ofstream file;
  if (!out.path.empty()) {
    file.open(out.path, std::ios::binary);
    if (!file) throw CliError("cannot open output path '" + out.path + "'");
    os = &file;
  }
  if (out.format == "csv") {
    table.write_csv(*os);
  } else if (out.format == "json") {
    table.write_json(*os);
  } else {
    throw CliError("unknown output format '" + out.format + "'");
  }
}

void add_chain_meta(io::Table& table, const ChainParams& p) {
  table.add_meta("sites", std::to_string(p.sites));
  table.add_meta("lambda_over_a", io::format_number(p.lambda_over_a));
  table.add_meta("theta", io::format_number(p.theta));
  table.add_meta("gamma0", io::format_number(p.gamma0));
  table.add_meta("interaction", io::format_number(p.interaction));
}

// Snap a requested wavenumber (k*a) to the single-excitation grid; under
// --strict-grid an off-grid request is an error that names the nearest value.
WaveIndex snap_wave_checked(const ChainParams& params, double ka,
                            const std::string& what) {
  const Zone zone(params.sites);
  const Zone::Snap snap = zone.snap_wave(ka * params.sites / pi);
  if (g_strict_grid && std::abs(snap.residual) > 1e-9) {
    std::ostringstream os;
    os << what << " = " << io::format_number(ka)
       << "/a is not on the wavenumber grid; nearest grid value is "
       << io::format_number(zone.angle(zone.momentum(snap.k)))
       << "/a (index " << snap.k.ell << ")";
    throw CliError(os.str());
  }
  return snap.k;
}

WaveIndex snap_angle_checked(const ChainParams& params, double beta,
                             const std::string& what) {
  const AngleSnap snap = angle_to_k(params, beta);
  if (g_strict_grid && std::abs(snap.residual) > 1e-9) {
    const Zone zone(params.sites);
    std::ostringstream os;
    os << what << " = " << io::format_number(beta)
       << " rad maps between grid wavenumbers; nearest is ka = "
       << io::format_number(zone.angle(zone.momentum(snap.k)))
       << " (index " << snap.k.ell << ", residual "
       << io::format_number(snap.residual) << " grid spacings)";
    throw CliError(os.str());
  }
  return snap.k;
}

void strict_grid_error(const std::string& what, double requested,
                       double nearest) {
  std::ostringstream os;
  os << what << " = " << io::format_number(requested)
     << "/a is not on the wavenumber grid; nearest grid value is "
     << io::format_number(nearest) << "/a";
  throw CliError(os.str());
}

Momentum snap_com(const ChainParams& params, double ka) {
  // nearest point of the center-of-mass (even) grid
  const Zone zone(params.sites);
  const double target = ka * params.sites / pi;
  const double lo = 2.0 * std::floor(target / 2.0);
  const double pick = (target - lo <= lo + 2.0 - target) ? lo : lo + 2.0;
  const Momentum k{zone.reduce(static_cast<int>(std::lround(pick)))};
  if (g_strict_grid && std::abs(target - pick) > 1e-9) {
    strict_grid_error("K", ka, zone.angle(k));
  }
  return k;
}

Momentum snap_relative(const ChainParams& params, Momentum big_k, double pa) {
  const Zone zone(params.sites);
  Momentum best{0};
  double dist = 1e300;
  for (const Momentum p : zone.relative_grid(big_k)) {
    const double d = std::abs(zone.angle(p) - pa);
    if (d < dist) {
      dist = d;
      best = p;
    }
  }
  if (g_strict_grid && dist > 1e-9) {
    strict_grid_error("p", pa, zone.angle(best));
  }
  return best;
}

// ---------------------------------------------------------------- state spec
struct StateSpec {
  enum class Kind { single, scattering, bound } kind = Kind::scattering;
  double k = 0.0;       // single-excitation wavenumber times a
  double big_k = 0.0;   // center-of-mass wavenumber times a
  double p = pi / 2;    // relative wavenumber times a
};

StateSpec parse_state(const std::string& text) {
  StateSpec spec;
  bool have_k = false, have_p = false, have_bound = false, have_single = false;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    const std::string key = item.substr(0, eq);
    if (key == "K") {
      spec.big_k = io::parse_wavenumber(item.substr(eq + 1));
      have_k = true;
    } else if (key == "p") {
      spec.p = io::parse_wavenumber(item.substr(eq + 1));
      have_p = true;
    } else if (key == "k") {
      spec.k = io::parse_wavenumber(item.substr(eq + 1));
      have_single = true;
    } else if (item == "bound" || item == "BS") {
      have_bound = true;
    } else {
      throw CliError("unknown state component '" + item + "'");
    }
  }
  if (have_single && !have_k && !have_p) {
    spec.kind = StateSpec::Kind::single;
  } else if (have_bound && have_k && !have_p) {
    spec.kind = StateSpec::Kind::bound;
  } else if (have_k && have_p) {
    spec.kind = StateSpec::Kind::scattering;
  } else {
    throw CliError("state must be 'k=...', 'K=...,p=...' or 'K=...,bound'");
  }
  return spec;
}

TwoExcState build_two_exc(const ChainParams& params, const StateSpec& spec,
                          io::Table& table) {
  const Zone zone(params.sites);
  const Momentum big_k = snap_com(params, spec.big_k);
  table.add_meta("K_times_a", io::format_number(zone.angle(big_k)));
  if (spec.kind == StateSpec::Kind::bound) {
    auto bs = bound_state(params, big_k);
    if (!bs) {
      throw CliError("no bound state exists for this K: |Im(Gamma_1) "
                     "cos(Ka/2)| >= U");
    }
    return *bs;
  }
  Momentum rel = snap_relative(params, big_k, spec.p);
  if (rel.u < 0) rel = zone.negate(rel);
  table.add_meta("p_times_a", io::format_number(zone.angle(rel)));
  return scattering_state(params, big_k, rel);
}

// -------------------------------------------------------------------- tasks
void run_rates(const ChainParams& params, int x_max, const OutputSpec& out) {
  io::Table table;
  table.add_meta("task", "rates");
  add_chain_meta(table, params);
  table.columns = {"x", "xi_x", "re_gamma_over_gamma0", "im_gamma_over_gamma0"};
  for (int x = 0; x <= x_max; ++x) {
    const auto g = coupling_rate(params, x);
    table.rows.push_back(
        {static_cast<double>(x), params.xi(x), g.real(), g.imag()});
  }
  write_table(table, out);
}

void run_dispersion(const ChainParams& params, const std::string& model_name,
                    const std::string& sector, const OutputSpec& out) {
  const DispersionModel model = (model_name == "full")
                                    ? DispersionModel::full_range
                                    : DispersionModel::tight_binding;
  const Zone zone(params.sites);
  io::Table table;
  table.add_meta("task", "dispersion");
  table.add_meta("model", model_name);
  add_chain_meta(table, params);
  table.columns = {"sector", "ell_or_K_index", "ka_or_Ka_half_over_pi",
                   "p_over_pi", "shift_over_gamma0", "decay_over_gamma0"};
  if (sector == "single" || sector == "both") {
    for (int ell = 0; ell < params.sites; ++ell) {
      const SingleExcState st = single_dispersion(params, WaveIndex{ell}, model);
      table.rows.push_back({std::string("single"), static_cast<double>(ell),
                            zone.angle(zone.momentum(WaveIndex{ell})) / pi,
                            std::string(""), st.shift, st.decay});
    }
  }
  if (sector == "two" || sector == "both") {
    for (int j = 0; j < params.sites; ++j) {
      const Momentum big_k{zone.reduce(2 * j)};
      const double half = zone.angle(zone.half(big_k)) / pi;
      for (const Momentum p : zone.positive_relative(big_k)) {
        const TwoExcState st = scattering_state(params, big_k, p);
        table.rows.push_back({std::string("scattering"), static_cast<double>(j),
                              half, zone.angle(p) / pi, st.energy.shift,
                              st.energy.decay});
      }
      if (auto bs = bound_state(params, big_k)) {
        table.rows.push_back({std::string("bound"), static_cast<double>(j),
                              half, std::string(""), bs->energy.shift,
                              bs->energy.decay});
      }
    }
  }
  write_table(table, out);
}

void run_eigen(const ChainParams& params, const std::string& state_text,
               const OutputSpec& out) {
  io::Table table;
  table.add_meta("task", "eigen");
  add_chain_meta(table, params);
  const StateSpec spec = parse_state(state_text);
  if (spec.kind == StateSpec::Kind::single) {
    const WaveIndex k = snap_wave_checked(params, spec.k, "k");
    const SingleExcState st = single_dispersion(params, k);
    table.add_meta("kind", "single");
    table.add_meta("ell", std::to_string(k.ell));
    table.add_meta("shift_over_gamma0", io::format_number(st.shift));
    table.add_meta("decay_over_gamma0", io::format_number(st.decay));
    table.columns = {"n", "re_amplitude", "im_amplitude"};
    const Zone zone(params.sites);
    const double ka = zone.angle(zone.momentum(k));
    const double norm = 1.0 / std::sqrt(static_cast<double>(params.sites));
    for (int n = -params.n() / 2; n <= params.n() / 2; ++n) {
      table.rows.push_back({static_cast<double>(n), norm * std::cos(ka * n),
                            norm * std::sin(ka * n)});
    }
  } else {
    const TwoExcState st = build_two_exc(params, spec, table);
    table.add_meta("kind", st.bound() ? "bound" : "scattering");
    table.add_meta("shift_over_gamma0", io::format_number(st.energy.shift));
    table.add_meta("decay_over_gamma0", io::format_number(st.energy.decay));
    table.add_meta(st.bound() ? "alpha" : "phase_factor",
                   io::format_number(st.amplitude.real()) + " + " +
                       io::format_number(st.amplitude.imag()) + "i");
    const int dim = std::min(params.rel_extent(), 1000);
    table.add_meta("nondissipative_residual",
                   io::format_number(analytic_residual(params, st, dim)));
    table.columns = {"x", "re_psi", "im_psi"};
    const Eigen::VectorXcd psi =
        relative_wavefunction(params, st, params.rel_extent());
    for (int x = 0; x <= params.rel_extent(); ++x) {
      table.rows.push_back({static_cast<double>(x), psi[x].real(),
                            psi[x].imag()});
    }
  }
  write_table(table, out);
}

void run_momdist(const ChainParams& params, const std::string& state_text,
                 const std::string& form_name, bool sweep_p,
                 const OutputSpec& out) {
  io::Table table;
  table.add_meta("task", "momdist");
  add_chain_meta(table, params);
  const StateSpec spec = parse_state(state_text);
  if (spec.kind == StateSpec::Kind::single) {
    throw CliError("momentum distributions are defined for two-excitation "
                   "states");
  }
  const EtaForm form = (form_name == "exact") ? EtaForm::exact : EtaForm::reduced;
  table.add_meta("form", form_name);
  const Zone zone(params.sites);
  table.columns = {"pa_over_pi", "ell", "qa_over_pi", "re_eta", "im_eta",
                   "abs2"};
  const auto emit = [&](const TwoExcState& st) {
    const MomentumDistribution dist = momentum_distribution(params, st, form);
    const double pa = st.bound() ? -1.0 : zone.angle(*st.p) / pi;
    for (int ell = 0; ell < params.sites; ++ell) {
      table.rows.push_back({st.bound() ? std::variant<double, std::string>(
                                             std::string("bound"))
                                       : std::variant<double, std::string>(pa),
                            static_cast<double>(ell),
                            zone.angle(dist.q[ell]) / pi, dist.eta[ell].real(),
                            dist.eta[ell].imag(), dist.abs2[ell]});
    }
  };
  if (sweep_p && spec.kind == StateSpec::Kind::scattering) {
    const Momentum big_k = snap_com(params, spec.big_k);
    table.add_meta("K_times_a", io::format_number(zone.angle(big_k)));
    for (const Momentum p : zone.positive_relative(big_k)) {
      emit(scattering_state(params, big_k, p));
    }
  } else {
    emit(build_two_exc(params, spec, table));
  }
  write_table(table, out);
}

struct Sweep {
  double lo = 0.0;
  double hi = 0.0;
  int steps = 1;
};

Sweep parse_sweep(const std::string& text) {
  Sweep sweep;
  std::stringstream ss(text);
  std::string a, b, c;
  if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') ||
      !std::getline(ss, c, ',')) {
    throw CliError("sweep must be 'min,max,steps', got '" + text + "'");
  }
  sweep.lo = std::stod(a);
  sweep.hi = std::stod(b);
  sweep.steps = std::stoi(c);
  if (sweep.steps < 1) throw CliError("sweep needs at least one step");
  return sweep;
}

void run_pattern(const ChainParams& base, const std::string& state_text,
                 double t_ret, const std::string& lambda_scan,
                 const std::vector<int>& sites_scan,
                 const std::vector<double>& interaction_scan, int beta_steps,
                 bool with_dipole, double phi, const OutputSpec& out) {
  io::Table table;
  table.add_meta("task", "pattern");
  add_chain_meta(table, base);
  table.add_meta("t_ret", io::format_number(t_ret));
  const StateSpec spec = parse_state(state_text);

  std::vector<double> lambdas = {base.lambda_over_a};
  if (!lambda_scan.empty()) {
    const Sweep sweep = parse_sweep(lambda_scan);
    lambdas.clear();
    for (int i = 0; i < sweep.steps; ++i) {
      const double f = (sweep.steps == 1) ? 0.0
                                          : static_cast<double>(i) /
                                                (sweep.steps - 1);
      lambdas.push_back(sweep.lo + f * (sweep.hi - sweep.lo));
    }
    table.add_meta("lambda_scan", lambda_scan);
  }
  const std::vector<int> sites_list =
      sites_scan.empty() ? std::vector<int>{base.sites} : sites_scan;
  const std::vector<double> u_list = interaction_scan.empty()
                                         ? std::vector<double>{base.interaction}
                                         : interaction_scan;
  std::vector<ChainParams> combos;
  for (const int sites : sites_list) {
    for (const double u : u_list) {
      for (const double lambda : lambdas) {
        ChainParams p = base;
        p.sites = sites;
        p.interaction = u;
        p.lambda_over_a = lambda;
        p.validate();
        combos.push_back(p);
      }
    }
  }

  const bool continuous = (spec.kind == StateSpec::Kind::bound);
  table.columns = {"sites", "interaction", "lambda_over_a", "beta_over_pi"};
  if (!continuous) {
    table.columns.push_back("bin_width_over_pi");
    table.columns.push_back("k_ell");
  }
  table.columns.push_back("value");
  if (with_dipole) table.columns.push_back("value_with_dipole");

  std::vector<io::Table> partial(combos.size());
  parallel_for(
      static_cast<int>(combos.size()), resolve_workers(g_threads), [&](int i) {
        const ChainParams& params = combos[i];
        io::Table& rows = partial[i];
        const auto dipole = [&](double beta) {
          return dipole_pattern(detection_direction(beta, phi), params.theta);
        };
        const double sites_d = params.sites;
        if (continuous) {
          const Momentum big_k = snap_com(params, spec.big_k);
          if (!bound_state_exists(params, big_k)) return;  // dark region
          const auto bs = bound_state(params, big_k);
          for (int j = 0; j < beta_steps; ++j) {
            const double beta =
                -pi / 2 + pi * static_cast<double>(j) / (beta_steps - 1);
            const double v =
                bound_emission_value_general(params, *bs, beta, t_ret);
            std::vector<std::variant<double, std::string>> row = {
                sites_d, params.interaction, params.lambda_over_a, beta / pi,
                v};
            if (with_dipole) row.push_back(v * dipole(beta));
            rows.rows.push_back(std::move(row));
          }
        } else {
          std::vector<EmissionSample> samples;
          if (spec.kind == StateSpec::Kind::single) {
            const WaveIndex k = snap_wave_checked(params, spec.k, "k");
            samples = emission_pattern_single(params, k, t_ret);
          } else {
            io::Table scratch;
            const TwoExcState st = build_two_exc(params, spec, scratch);
            samples = emission_pattern(params, st, t_ret);
          }
          for (const EmissionSample& s : samples) {
            std::vector<std::variant<double, std::string>> row = {
                sites_d,       params.interaction,
                params.lambda_over_a, s.beta / pi,
                s.bin_width / pi,     static_cast<double>(s.k.ell),
                s.value};
            if (with_dipole) row.push_back(s.value * dipole(s.beta));
            rows.rows.push_back(std::move(row));
          }
        }
      });
  for (io::Table& part : partial) {
    for (auto& row : part.rows) table.rows.push_back(std::move(row));
  }
  write_table(table, out);
}

void occupation_rows(const ChainParams& params, const SteadyState& steady,
                     io::Table& table) {
  const Zone zone(params.sites);
  table.columns = {"type", "K_index_or_ell", "nu", "value"};
  for (const auto& [ell, v] : steady.one) {
    table.rows.push_back(
        {std::string("one"), static_cast<double>(ell), std::string(""), v});
  }
  for (const auto& [key, v] : steady.two) {
    table.rows.push_back({std::string("two"),
                          static_cast<double>(key.big_k_u),
                          key.is_bound() ? std::string("bound")
                                         : std::to_string(key.nu_u),
                          v});
  }
}

void run_pump1(const ChainParams& params, double beta_exc, double xi,
               const std::string& report, bool numeric, const OutputSpec& out) {
  io::Table table;
  table.add_meta("task", "pump1");
  add_chain_meta(table, params);
  const WaveIndex k_p = snap_angle_checked(params, beta_exc, "beta_exc");
  table.add_meta("k_p_index", std::to_string(k_p.ell));
  table.add_meta("xi", io::format_number(xi));
  SteadyState steady;
  if (numeric) {
    PumpConfig config;
    config.pumps.push_back({beta_exc, xi * params.gamma0});
    for (const std::string& w : config.validate(params)) {
      std::cerr << "warning: " << w << "\n";
    }
    steady = rate_steady_numeric(params, config);
    table.add_meta("order", "numeric");
  } else {
    steady = single_pump_steady(params, k_p, xi);
    table.add_meta("order", "analytic_xi2");
  }
  if (report == "occupations") {
    occupation_rows(params, steady, table);
  } else if (report == "g1") {
    const Zone zone(params.sites);
    const Regime regime = classify_regime(params);
    table.columns = {"ell", "ka_over_pi", "g1", "g1_closed"};
    for (int ell = 0; ell < params.sites; ++ell) {
      const double summed = g1_steady(params, steady, WaveIndex{ell});
      std::vector<std::variant<double, std::string>> row = {
          static_cast<double>(ell),
          zone.angle(zone.momentum(WaveIndex{ell})) / pi, summed};
      if (regime == Regime::general) {
        row.push_back(std::string(""));
      } else {
        row.push_back(g1_single_pump_closed(params, WaveIndex{ell}, k_p, xi,
                                            regime));
      }
      table.rows.push_back(std::move(row));
    }
  } else {
    throw CliError("pump1 report must be 'occupations' or 'g1'");
  }
  write_table(table, out);
}

void run_pump2(const ChainParams& params, double beta1, double beta2,
               double eps, double xi, const std::string& report,
               const std::string& beta1_sweep, const OutputSpec& out) {
  io::Table table;
  table.add_meta("task", "pump2");
  add_chain_meta(table, params);
  table.add_meta("xi", io::format_number(xi));
  table.add_meta("epsilon", io::format_number(eps));
  table.add_meta("beta2", io::format_number(beta2));
  const WaveIndex k2 = snap_angle_checked(params, beta2, "beta2");
  if (report == "occupations") {
    const WaveIndex k1 = snap_angle_checked(params, beta1, "beta1");
    table.add_meta("beta1", io::format_number(beta1));
    const SteadyState steady = two_pump_steady(params, k1, k2, xi, eps);
    occupation_rows(params, steady, table);
  } else if (report == "sweep") {
    const Sweep sweep = beta1_sweep.empty() ? Sweep{-pi / 2, pi / 2, 2001}
                                            : parse_sweep(beta1_sweep);
    const Zone zone(params.sites);
    const Regime regime = classify_regime(params);
    table.columns = {"beta1_over_pi", "k1_ell",  "q_u",
                     "delta_g1_nl",   "delta_s_bs", "g2"};
    std::vector<std::vector<std::variant<double, std::string>>> rows(
        sweep.steps);
    parallel_for(sweep.steps, resolve_workers(g_threads), [&](int i) {
      const double f = (sweep.steps == 1)
                           ? 0.0
                           : static_cast<double>(i) / (sweep.steps - 1);
      const double b1 = sweep.lo + f * (sweep.hi - sweep.lo);
      const WaveIndex k1 = angle_to_k(params, b1).k;
      const Momentum q = zone.relative_pair(k1, k2);
      const bool q_zero = (k1.ell == k2.ell);
      const double qa = std::abs(zone.angle(q));
      rows[i] = {b1 / pi,
                 static_cast<double>(k1.ell),
                 static_cast<double>(q.u),
                 delta_g1_formula(qa, q_zero, regime, eps, params.sites),
                 delta_spectrum_bs_formula(qa, q_zero, eps),
                 g2_formula(qa, q_zero, regime, params.sites)};
    });
    table.rows = std::move(rows);
  } else {
    throw CliError("pump2 report must be 'occupations' or 'sweep'");
  }
  write_table(table, out);
}

void run_spectrum(const ChainParams& params, const std::string& setup,
                  double beta_exc, double beta_det, double beta2, double eps,
                  double xi, const std::string& omega_sweep,
                  const OutputSpec& out) {
  io::Table table;
  table.add_meta("task", "spectrum");
  add_chain_meta(table, params);
  table.add_meta("setup", setup);
  table.add_meta("xi", io::format_number(xi));
  SteadyState steady;
  WaveIndex kbar{0};
  if (setup == "single") {
    const WaveIndex k_p = snap_angle_checked(params, beta_exc, "beta_exc");
    kbar = snap_angle_checked(params, beta_det, "beta_det");
    steady = single_pump_steady(params, k_p, xi);
    const Regime regime = classify_regime(params);
    if (regime != Regime::general) {
      table.add_meta(
          "s_origin_closed",
          io::format_number(
              spectrum_origin_peak_closed(params, kbar, k_p, xi, regime)));
    }
    if (regime == Regime::strong) {
      table.add_meta(
          "s_bound_peak_closed",
          io::format_number(
              spectrum_bs_peak_closed(params, kbar, k_p, xi, regime)));
    }
  } else if (setup == "two") {
    const WaveIndex k1 = snap_angle_checked(params, beta_exc, "beta1");
    const WaveIndex k2 = snap_angle_checked(params, beta2, "beta2");
    kbar = k1;  // out-of-plane detection at the first excitation angle
    steady = two_pump_steady(params, k1, k2, xi, eps);
    const Zone zone(params.sites);
    const Momentum q = zone.relative_pair(k1, k2);
    table.add_meta("delta_s_bs",
                   io::format_number(delta_spectrum_bs_formula(
                       std::abs(zone.angle(q)), k1.ell == k2.ell, eps)));
  } else {
    throw CliError("spectrum setup must be 'single' or 'two'");
  }
  const Sweep sweep =
      omega_sweep.empty() ? Sweep{-50.0, 50.0, 2001} : parse_sweep(omega_sweep);
  table.columns = {"omega_offset_over_gamma0", "s_normalized"};
  std::vector<std::vector<std::variant<double, std::string>>> rows(sweep.steps);
  parallel_for(sweep.steps, resolve_workers(g_threads), [&](int i) {
    const double f =
        (sweep.steps == 1) ? 0.0 : static_cast<double>(i) / (sweep.steps - 1);
    const double w = sweep.lo + f * (sweep.hi - sweep.lo);
    rows[i] = {w, spectrum_value(params, steady, kbar, w)};
  });
  table.rows = std::move(rows);
  write_table(table, out);
}

void run_g2(const ChainParams& params, double beta2,
            const std::string& beta1_sweep, bool finite_m,
            const OutputSpec& out) {
  io::Table table;
  table.add_meta("task", "g2");
  add_chain_meta(table, params);
  table.add_meta("beta2", io::format_number(beta2));
  const WaveIndex k2 = snap_angle_checked(params, beta2, "beta2");
  const Zone zone(params.sites);
  const Regime regime = classify_regime(params);
  const Sweep sweep = beta1_sweep.empty() ? Sweep{-pi / 2, pi / 2, 2001}
                                          : parse_sweep(beta1_sweep);
  table.columns = {"beta1_over_pi", "qa_over_pi", "g2_limit", "g2_finite_M"};
  std::vector<std::vector<std::variant<double, std::string>>> rows(sweep.steps);
  parallel_for(sweep.steps, resolve_workers(g_threads), [&](int i) {
    const double f =
        (sweep.steps == 1) ? 0.0 : static_cast<double>(i) / (sweep.steps - 1);
    const double b1 = sweep.lo + f * (sweep.hi - sweep.lo);
    const WaveIndex k1 = angle_to_k(params, b1).k;
    const Momentum q = zone.relative_pair(k1, k2);
    const bool q_zero = (k1.ell == k2.ell);
    const double qa = std::abs(zone.angle(q));
    rows[i] = {b1 / pi, qa / pi, g2_formula(qa, q_zero, regime, std::nullopt),
               finite_m ? std::variant<double, std::string>(
                              g2_formula(qa, q_zero, regime, params.sites))
                        : std::variant<double, std::string>(std::string(""))};
  });
  table.rows = std::move(rows);
  write_table(table, out);
}

void run_sums(int sites, const std::string& q_list, const OutputSpec& out) {
  io::Table table;
  table.add_meta("task", "sums");
  table.add_meta("sites", std::to_string(sites));
  table.columns = {"kind", "qa_over_pi", "finite", "limit"};
  const std::pair<LatticeSumKind, std::string> kinds[] = {
      {LatticeSumKind::q_bg, "q_bg"},         {LatticeSumKind::r_bg, "r_bg"},
      {LatticeSumKind::r_dir, "r_dir"},       {LatticeSumKind::r_bs, "r_bs"},
      {LatticeSumKind::q_cross, "q_cross"},   {LatticeSumKind::r_cross, "r_cross"},
      {LatticeSumKind::r_cross_bs, "r_cross_bs"}};
  std::vector<double> qs;
  std::stringstream ss(q_list);
  std::string item;
  while (std::getline(ss, item, ';')) qs.push_back(io::parse_angle(item));
  for (const auto& [kind, name] : kinds) {
    for (const double qa : qs) {
      table.rows.push_back({std::string(name), qa / pi,
                            lattice_sum(kind, qa, sites, SumMode::finite),
                            lattice_sum(kind, qa, sites, SumMode::limit)});
    }
  }
  write_table(table, out);
}

int run_verify(const OutputSpec& out) {
  const auto results = chainlight::verify::run_all();
  int failed = 0;
  for (const auto& r : results) {
    std::cout << (r.passed ? "[PASS] " : "[FAIL] ") << r.name << " — "
              << r.detail << "\n";
    if (!r.passed) ++failed;
  }
  if (!out.path.empty()) {
    io::Table table;
    table.add_meta("task", "verify");
    table.columns = {"criterion", "passed", "detail"};
    for (const auto& r : results) {
      table.rows.push_back({r.name, r.passed ? 1.0 : 0.0, r.detail});
    }
    write_table(table, out);
  }
  std::cout << (failed == 0 ? "all checks passed" : "SOME CHECKS FAILED")
            << "\n";
  return failed == 0 ? 0 : 1;
}

// --------------------------------------------------------------- JSON config
int line_of_offset(const std::string& text, std::size_t byte) {
  int line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') ++line;
  }
  return line;
}

void reject_unknown_keys(const json& object, const std::string& where,
                         std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : object.items()) {
    bool known = false;
    for (const char* a : allowed) {
      if (key == a) known = true;
    }
    if (!known) {
      throw CliError("unknown key '" + key + "' in " + where);
    }
  }
}

double json_angle(const json& v) {
  if (v.is_number()) return v.get<double>() * pi;  // fractions of pi
  return io::parse_angle(v.get<std::string>());
}

double json_wavenumber(const json& v) {
  if (v.is_number()) return v.get<double>() * pi;
  return io::parse_wavenumber(v.get<std::string>());
}

int run_config(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw CliError("cannot open config '" + path + "'");
  std::stringstream buffer;
  buffer << file.rdbuf();
  const std::string text = buffer.str();
  json cfg;
  try {
    cfg = json::parse(text);
  } catch (const json::parse_error& e) {
    throw CliError("config " + path + ":" +
                   std::to_string(line_of_offset(text, e.byte)) + ": " +
                   e.what());
  }
  reject_unknown_keys(cfg, "config", {"chain", "task", "output", "rates",
                                      "dispersion", "eigen", "momdist",
                                      "pattern", "pump1", "pump2", "spectrum",
                                      "g2", "sums", "verify", "threads",
                                      "strict_grid"});
  ChainParams params;
  if (cfg.contains("chain")) {
    const json& chain = cfg.at("chain");
    reject_unknown_keys(chain, "chain",
                        {"sites", "lambda_over_a", "theta", "gamma0", "U"});
    if (chain.contains("sites")) params.sites = chain.at("sites").get<int>();
    if (chain.contains("lambda_over_a")) {
      params.lambda_over_a = chain.at("lambda_over_a").get<double>();
    }
    if (chain.contains("theta")) params.theta = json_angle(chain.at("theta"));
    if (chain.contains("gamma0")) params.gamma0 = chain.at("gamma0").get<double>();
    if (chain.contains("U")) {
      const json& u = chain.at("U");
      params.interaction = u.is_string() && u.get<std::string>() == "strong"
                               ? 1e6
                               : u.get<double>();
    }
  }
  params.validate();
  if (cfg.contains("threads")) g_threads = cfg.at("threads").get<int>();
  if (cfg.contains("strict_grid")) {
    g_strict_grid = cfg.at("strict_grid").get<bool>();
  }
  OutputSpec out;
  if (cfg.contains("output")) {
    reject_unknown_keys(cfg.at("output"), "output", {"path", "format"});
    if (cfg.at("output").contains("path")) {
      out.path = cfg.at("output").at("path").get<std::string>();
    }
    if (cfg.at("output").contains("format")) {
      out.format = cfg.at("output").at("format").get<std::string>();
    }
  }
  const std::string task = cfg.at("task").get<std::string>();
  const json body = cfg.contains(task) ? cfg.at(task) : json::object();

  if (task == "rates") {
    reject_unknown_keys(body, task, {"x_max"});
    run_rates(params, body.value("x_max", 10), out);
  } else if (task == "dispersion") {
    reject_unknown_keys(body, task, {"model", "sector"});
    run_dispersion(params, body.value("model", "tb"),
                   body.value("sector", "both"), out);
  } else if (task == "eigen") {
    reject_unknown_keys(body, task, {"state"});
    run_eigen(params, body.at("state").get<std::string>(), out);
  } else if (task == "momdist") {
    reject_unknown_keys(body, task, {"state", "form", "sweep_p"});
    run_momdist(params, body.at("state").get<std::string>(),
                body.value("form", "reduced"), body.value("sweep_p", false),
                out);
  } else if (task == "pattern") {
    reject_unknown_keys(body, task,
                        {"state", "t_ret", "lambda_scan", "sites_scan",
                         "interaction_scan", "beta_steps", "dipole", "phi"});
    run_pattern(params, body.at("state").get<std::string>(),
                body.value("t_ret", 0.0), body.value("lambda_scan", ""),
                body.value("sites_scan", std::vector<int>{}),
                body.value("interaction_scan", std::vector<double>{}),
                body.value("beta_steps", 721), body.value("dipole", false),
                body.contains("phi") ? json_angle(body.at("phi")) : pi / 2,
                out);
  } else if (task == "pump1") {
    reject_unknown_keys(body, task, {"beta_exc", "xi", "report", "numeric"});
    run_pump1(params, json_angle(body.at("beta_exc")), body.value("xi", 1e-3),
              body.value("report", "occupations"), body.value("numeric", false),
              out);
  } else if (task == "pump2") {
    reject_unknown_keys(body, task, {"beta1", "beta2", "epsilon", "xi",
                                     "report", "beta1_sweep"});
    run_pump2(params,
              body.contains("beta1") ? json_angle(body.at("beta1")) : 0.0,
              json_angle(body.at("beta2")), body.value("epsilon", 1.0),
              body.value("xi", 1e-3), body.value("report", "sweep"),
              body.value("beta1_sweep", ""), out);
  } else if (task == "spectrum") {
    reject_unknown_keys(body, task, {"setup", "beta_exc", "beta_det", "beta2",
                                     "epsilon", "xi", "omega_sweep"});
    const std::string setup = body.value("setup", "single");
    const double beta_exc =
        body.contains("beta_exc") ? json_angle(body.at("beta_exc")) : 0.3;
    run_spectrum(params, setup, beta_exc,
                 body.contains("beta_det") ? json_angle(body.at("beta_det"))
                                           : beta_exc,
                 body.contains("beta2") ? json_angle(body.at("beta2")) : 0.0,
                 body.value("epsilon", 1.0), body.value("xi", 1e-3),
                 body.value("omega_sweep", ""), out);
  } else if (task == "g2") {
    reject_unknown_keys(body, task, {"beta2", "beta1_sweep", "finite_M"});
    run_g2(params, json_angle(body.at("beta2")), body.value("beta1_sweep", ""),
           body.value("finite_M", true), out);
  } else if (task == "sums") {
    reject_unknown_keys(body, task, {"sites", "q_values"});
    run_sums(body.value("sites", 10000), body.value("q_values", "0;0.25;0.5"),
             out);
  } else if (task == "verify") {
    return run_verify(out);
  } else {
    throw CliError("unknown task '" + task + "'");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "chainlight: collective far-field emission from a one-dimensional "
      "chain of interacting two-level atoms"};
  app.require_subcommand(0, 1);

  std::string config_path;
  app.add_option("--config", config_path, "run a JSON configuration file");
  app.add_option("--threads", g_threads,
                 "worker threads for sweeps (default: CHAINLIGHT_THREADS "
                 "environment variable, then hardware concurrency)");
  app.add_flag("--strict-grid", g_strict_grid,
               "reject wavenumber/angle requests that are not exactly on the "
               "grid instead of snapping");

  ChainParams params;
  std::string u_text = "0";
  std::string theta_text = "0.5";
  OutputSpec out;
  const auto add_common = [&](CLI::App* cmd) {
    cmd->fallthrough();  // --threads / --strict-grid may follow the subcommand
    cmd->add_option("-M,--sites", params.sites, "atom count (odd)");
    cmd->add_option("--lambda-over-a", params.lambda_over_a,
                    "emission wavelength over lattice constant");
    cmd->add_option("--theta", theta_text,
                    "dipole angle (fraction of pi, or 'pi/4', 'arcsin(x)')");
    cmd->add_option("--gamma0", params.gamma0, "bare decay rate (rate unit)");
    cmd->add_option("-U,--interaction", u_text,
                    "nearest-neighbour interaction in gamma0 units, or "
                    "'strong'");
    cmd->add_option("-o,--output", out.path, "output path (default: stdout)");
    cmd->add_option("--format", out.format, "csv or json");
  };

  int x_max = 10;
  auto* rates_cmd = app.add_subcommand("rates", "reservoir coupling rates");
  add_common(rates_cmd);
  rates_cmd->add_option("--x-max", x_max, "largest separation");

  std::string model_name = "tb", sector = "both";
  auto* disp_cmd = app.add_subcommand("dispersion",
                                      "single- and two-excitation bands");
  add_common(disp_cmd);
  disp_cmd->add_option("--model", model_name, "tb or full");
  disp_cmd->add_option("--sector", sector, "single, two or both");

  std::string state_text = "K=0,p=pi/2a";
  auto* eigen_cmd = app.add_subcommand("eigen", "one eigenstate in detail");
  add_common(eigen_cmd);
  eigen_cmd->add_option("--state", state_text,
                        "'k=...', 'K=...,p=...' or 'K=...,bound'");

  std::string form_name = "reduced";
  bool sweep_p = false;
  auto* mom_cmd = app.add_subcommand("momdist",
                                     "momentum distribution of a pair state");
  add_common(mom_cmd);
  mom_cmd->add_option("--state", state_text, "'K=...,p=...' or 'K=...,bound'");
  mom_cmd->add_option("--form", form_name, "reduced or exact");
  mom_cmd->add_flag("--sweep-p", sweep_p,
                    "emit the full map over all relative wavenumbers of K");

  double t_ret = 0.0, phi = pi / 2;
  std::string lambda_scan;
  std::vector<int> sites_scan;
  std::vector<double> interaction_scan;
  int beta_steps = 721;
  bool with_dipole = false;
  auto* pattern_cmd =
      app.add_subcommand("pattern", "angle-resolved emission pattern");
  add_common(pattern_cmd);
  pattern_cmd->add_option("--state", state_text, "initial eigenstate");
  pattern_cmd->add_option("--t-ret", t_ret, "retarded time (1/gamma0)");
  pattern_cmd->add_option("--lambda-scan", lambda_scan,
                          "'min,max,steps' sweep of lambda/a");
  pattern_cmd->add_option("--sites-scan", sites_scan,
                          "repeat the pattern for several atom counts");
  pattern_cmd->add_option("--interaction-scan", interaction_scan,
                          "repeat the pattern for several U values");
  pattern_cmd->add_option("--beta-steps", beta_steps,
                          "angle samples for continuous patterns");
  pattern_cmd->add_flag("--dipole", with_dipole,
                        "include the single-dipole factor");
  pattern_cmd->add_option("--phi", phi, "azimuth for the dipole factor (rad)");

  std::string beta_exc_text = "0", report = "occupations";
  double xi = 1e-3;
  bool numeric = false;
  auto* pump1_cmd = app.add_subcommand("pump1",
                                       "steady state of one incoherent pump");
  add_common(pump1_cmd);
  pump1_cmd->add_option("--beta-exc", beta_exc_text, "excitation angle");
  pump1_cmd->add_option("--xi", xi, "pump rate over gamma0");
  pump1_cmd->add_option("--report", report, "occupations or g1");
  pump1_cmd->add_flag("--numeric", numeric,
                      "solve the full rate equations instead of the Xi^2 "
                      "expansion");

  std::string beta1_text = "0", beta2_text = "arcsin(0.5)", beta1_sweep;
  double eps = 1.0;
  std::string report2 = "sweep";
  auto* pump2_cmd = app.add_subcommand("pump2",
                                       "two-pump setup: nonlinear response");
  add_common(pump2_cmd);
  pump2_cmd->add_option("--beta1", beta1_text, "first excitation angle");
  pump2_cmd->add_option("--beta2", beta2_text, "second excitation angle");
  pump2_cmd->add_option("--epsilon", eps, "pump amplitude ratio");
  pump2_cmd->add_option("--xi", xi, "pump rate over gamma0");
  pump2_cmd->add_option("--report", report2, "occupations or sweep");
  pump2_cmd->add_option("--beta1-sweep", beta1_sweep, "'min,max,steps' (rad)");

  std::string setup = "single", beta_det_text, omega_sweep;
  auto* spec_cmd = app.add_subcommand("spectrum", "steady-state emission "
                                                  "spectrum");
  add_common(spec_cmd);
  spec_cmd->add_option("--setup", setup, "single or two");
  spec_cmd->add_option("--beta-exc", beta_exc_text,
                       "excitation angle (setup two: first pump)");
  spec_cmd->add_option("--beta-det", beta_det_text,
                       "detection angle (default: the excitation angle)");
  spec_cmd->add_option("--beta2", beta2_text, "second excitation angle");
  spec_cmd->add_option("--epsilon", eps, "pump amplitude ratio");
  spec_cmd->add_option("--xi", xi, "pump rate over gamma0");
  spec_cmd->add_option("--omega-sweep", omega_sweep,
                       "'min,max,steps' for omega - omega0 (gamma0 units)");

  bool finite_m = true;
  auto* g2_cmd = app.add_subcommand("g2", "zero-delay intensity correlation");
  add_common(g2_cmd);
  g2_cmd->add_option("--beta2", beta2_text, "second detector angle");
  g2_cmd->add_option("--beta1-sweep", beta1_sweep, "'min,max,steps' (rad)");
  g2_cmd->add_flag("--finite-M,!--no-finite-M", finite_m,
                   "emit the finite-M bound-state correction column");

  int sum_sites = 10000;
  std::string q_values = "0;0.25;0.5";
  auto* sums_cmd = app.add_subcommand("sums", "zone sums over |eta|^2 "
                                              "products");
  add_common(sums_cmd);
  sums_cmd->add_option("--sum-sites", sum_sites, "lattice size of the sums");
  sums_cmd->add_option("--q-values", q_values,
                       "semicolon-separated angles (fractions of pi)");

  auto* verify_cmd = app.add_subcommand(
      "verify", "run the complete oracle verification suite");
  add_common(verify_cmd);

  CLI11_PARSE(app, argc, argv);

  try {
    if (!config_path.empty()) {
      if (app.get_subcommands().size() > 0) {
        throw CliError("--config and a subcommand are mutually exclusive");
      }
      return run_config(config_path);
    }
    if (app.get_subcommands().empty()) {
      std::cerr << app.help();
      return 2;
    }
    params.theta = io::parse_angle(theta_text);
    params.interaction = (u_text == "strong") ? 1e6 : std::stod(u_text);
    params.validate();
    CLI::App* cmd = app.get_subcommands().front();
    if (cmd == rates_cmd) {
      run_rates(params, x_max, out);
    } else if (cmd == disp_cmd) {
      run_dispersion(params, model_name, sector, out);
    } else if (cmd == eigen_cmd) {
      run_eigen(params, state_text, out);
    } else if (cmd == mom_cmd) {
      run_momdist(params, state_text, form_name, sweep_p, out);
    } else if (cmd == pattern_cmd) {
      run_pattern(params, state_text, t_ret, lambda_scan, sites_scan,
                  interaction_scan, beta_steps, with_dipole, phi, out);
    } else if (cmd == pump1_cmd) {
      run_pump1(params, io::parse_angle(beta_exc_text), xi, report, numeric,
                out);
    } else if (cmd == pump2_cmd) {
      run_pump2(params, io::parse_angle(beta1_text),
                io::parse_angle(beta2_text), eps, xi, report2, beta1_sweep,
                out);
    } else if (cmd == spec_cmd) {
      const double beta_exc = io::parse_angle(beta_exc_text);
      const double beta_det =
          beta_det_text.empty() ? beta_exc : io::parse_angle(beta_det_text);
      run_spectrum(params, setup, beta_exc, beta_det,
                   io::parse_angle(beta2_text), eps, xi, omega_sweep, out);
    } else if (cmd == g2_cmd) {
      run_g2(params, io::parse_angle(beta2_text), beta1_sweep, finite_m, out);
    } else if (cmd == sums_cmd) {
      run_sums(sum_sites, q_values, out);
    } else if (cmd == verify_cmd) {
      return run_verify(out);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
