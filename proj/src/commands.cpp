#include "qmeas/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "qmeas/classical.hpp"
#include "qmeas/collision.hpp"
#include "qmeas/ctap.hpp"
#include "qmeas/decoherence.hpp"
#include "qmeas/output.hpp"
#include "qmeas/parallel.hpp"
#include "qmeas/povm.hpp"
#include "qmeas/qbm.hpp"
#include "qmeas/qpc.hpp"
#include "qmeas/tls.hpp"

namespace qmeas {

namespace {

struct RunOutput {
  CsvTable table{{"empty"}};
  std::vector<std::pair<std::string, CsvTable>> extra;  // suffix, table
  Sidecar sidecar;
};

using Body = std::function<RunOutput(const RunConfig&, std::ostream&)>;

struct Command {
  Schema schema;
  Body body;
};

ParamSpec real(std::string key, std::string fallback, std::string help) {
  return {std::move(key), ParamType::real, std::move(fallback), std::move(help), {}};
}
ParamSpec integer(std::string key, std::string fallback, std::string help) {
  return {std::move(key), ParamType::integer, std::move(fallback), std::move(help), {}};
}
ParamSpec choice(std::string key, std::vector<std::string> choices, std::string help) {
  std::string fb = choices.front();
  return {std::move(key), ParamType::choice, std::move(fb), std::move(help), std::move(choices)};
}
ParamSpec optional(ParamSpec p) {
  p.fallback.clear();
  p.optional = true;
  return p;
}

// ---- chain and pulses

std::vector<ParamSpec> chain_params(const std::string& t_total, const std::string& schedule) {
  ParamSpec sched = choice("schedule", {"delayed", "symmetric"}, "pulse family (Stokes first in both)");
  sched.fallback = schedule;
  return {
      integer("n_dots", "5", "number of dots"),
      real("omega_max", "1", "pulse peak and intermediate coupling (energy)"),
      real("t_total", t_total, "transfer time T"),
      sched,
      optional(real("pulse_width", "", "Gaussian pulse width; default from the schedule family")),
      optional(real("pulse_centers", "", "pump,stokes centres; default from the schedule family")),
      optional(real("t_start", "", "integration start; default from the schedule family")),
      optional(real("t_end", "", "integration end; default from the schedule family")),
      real("dt", "0.01", "RK4 step"),
      integer("from", "0", "initial site, 0-based"),
      optional(integer("to", "", "target site, 0-based; default n_dots-1")),
      integer("record_every", "10", "keep every k-th step in the CSV"),
  };
}

ChainSpec read_chain(const RunConfig& c) {
  ChainSpec ch;
  ch.dots = static_cast<int>(c.integer("n_dots"));
  ch.omega_max = c.real("omega_max");
  ch.from = static_cast<int>(c.integer("from"));
  ch.to = c.has("to") ? static_cast<int>(c.integer("to")) : ch.dots - 1;
  ch.validate();
  return ch;
}

PulseSchedule read_schedule(const RunConfig& c, double T) {
  const double om = c.real("omega_max");
  PulseSchedule s = c.text("schedule") == "delayed" ? PulseSchedule::delayed(T, om) : PulseSchedule::symmetric(T, om);
  if (c.has("pulse_width")) s.width = c.real("pulse_width");
  if (c.has("pulse_centers")) {
    const auto v = c.reals("pulse_centers");
    if (v.size() != 2) throw ConfigError("key 'pulse_centers': expected pump,stokes");
    s.pump_center = v[0];
    s.stokes_center = v[1];
  }
  if (c.has("t_start")) s.start = c.real("t_start");
  if (c.has("t_end")) s.end = c.real("t_end");
  s.validate();
  return s;
}

std::vector<std::string> population_header(int dots) {
  std::vector<std::string> h{"time"};
  for (int i = 0; i < dots; ++i) h.push_back("pop_" + std::to_string(i));
  return h;
}

RunOutput ctap_run(const RunConfig& c, std::ostream& out) {
  const ChainSpec chain = read_chain(c);
  const PulseSchedule sched = read_schedule(c, c.real("t_total"));
  TransportOptions opt;
  opt.dt = c.real("dt");
  opt.record_every = static_cast<int>(c.integer("record_every"));
  const TransportResult r = run_transport(chain, sched, chain.from, opt);

  auto header = population_header(chain.dots);
  header.push_back("fidelity");
  RunOutput o;
  o.table = CsvTable(header);
  for (std::size_t i = 0; i < r.trajectory.times.size(); ++i) {
    const StateVector& s = r.trajectory.states[i];
    std::vector<Cell> row{r.trajectory.times[i]};
    for (int k = 0; k < chain.dots; ++k) row.emplace_back(s.population(k));
    row.emplace_back(s.population(chain.to));
    o.table.add(row);
  }
  o.sidecar.set("fidelity", r.fidelity);
  o.sidecar.set("dynamical_phase", r.dynamical_phase);
  o.sidecar.set("steps", r.trajectory.stats.steps);
  o.sidecar.set("max_norm_drift", r.trajectory.stats.max_norm_drift);
  out << "fidelity " << format_real(r.fidelity) << "\n";
  return o;
}

RunOutput ctap_sweep(const RunConfig& c, std::ostream& out) {
  const ChainSpec chain = read_chain(c);
  const auto Ts = c.reals("t_values");
  std::vector<TransportResult> runs(Ts.size());
  std::vector<double> leak(Ts.size());
  parallel_for(Ts.size(), [&](std::size_t i) {
    const PulseSchedule s = read_schedule(c, Ts[i]);
    TransportOptions opt;
    opt.dt = c.real("dt");
    opt.record_every = static_cast<int>(c.integer("record_every"));
    runs[i] = run_transport(chain, s, chain.from, opt);
    leak[i] = max_nonadiabatic_population(chain, s, runs[i].trajectory);
  });
  RunOutput o;
  o.table = CsvTable({"t_total", "fidelity", "dynamical_phase", "max_leakage"});
  for (std::size_t i = 0; i < Ts.size(); ++i) {
    o.table.add({Ts[i], runs[i].fidelity, runs[i].dynamical_phase, leak[i]});
    out << "T " << format_real(Ts[i]) << " fidelity " << format_real(runs[i].fidelity) << "\n";
  }
  o.sidecar.set("points", static_cast<long>(Ts.size()));
  return o;
}

// ---- QPC

RunOutput qpc_loss(const RunConfig& c, std::ostream& out) {
  const auto dots = c.integers("n_dots");
  const auto Ts = c.reals("t_totals");
  if (dots.size() != Ts.size()) throw ConfigError("key 't_totals': need one transfer time per n_dots entry");
  const bool local = c.text("locality") == "local";
  const auto ratios = local ? std::vector<double>{0.0} : c.reals("a_over_d");
  const bool lindblad = c.text("lindblad") == "yes";
  if (lindblad && !local) throw ConfigError("key 'lindblad': full integration needs locality=local");

  struct Task {
    long dots;
    double T;
    double a_over_d;
  };
  std::vector<Task> tasks;
  for (std::size_t i = 0; i < dots.size(); ++i)
    for (double r : ratios) tasks.push_back({dots[i], Ts[i], r});

  std::vector<LossResult> loss(tasks.size());
  std::vector<LindbladCheck> full(tasks.size());
  parallel_for(tasks.size(), [&](std::size_t i) {
    const Task& t = tasks[i];
    QpcArray q;
    q.locality = local ? Locality::local : Locality::nonlocal;
    q.d = 1.0;
    q.a = local ? 1.0 : t.a_over_d;
    q.alpha = c.real("alpha_over_a") * q.a;
    q.rate = c.real("rate_per_sensor");
    q.n_qpc = 1;
    q.site_cutoff = static_cast<int>(c.integer("site_cutoff"));
    ChainSpec chain;
    chain.dots = static_cast<int>(t.dots);
    chain.omega_max = c.real("omega_max");
    chain.from = 0;
    chain.to = chain.dots - 1;
    const PulseSchedule s = c.text("schedule") == "delayed" ? PulseSchedule::delayed(t.T, chain.omega_max)
                                                             : PulseSchedule::symmetric(t.T, chain.omega_max);
    LossOptions lo;
    lo.points = static_cast<int>(c.integer("points"));
    loss[i] = transfer_loss(q, chain, s, lo);
    if (lindblad) full[i] = lindblad_cross_check(q, chain, s, c.real("dt"), lo);
  });

  RunOutput o;
  std::vector<std::string> header{"a_over_d", "n_dots", "t_total", "loss"};
  if (lindblad) {
    header.push_back("loss_full");
    header.push_back("loss_adiabatic_total");
  }
  o.table = CsvTable(header);
  long warnings = 0;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    std::vector<Cell> row{tasks[i].a_over_d, tasks[i].dots, tasks[i].T, loss[i].value};
    if (lindblad) {
      row.emplace_back(full[i].loss_full);
      row.emplace_back(1.0 - full[i].fidelity_adiabatic);
    }
    o.table.add(row);
    warnings += static_cast<long>(loss[i].warnings.size());
    for (const auto& w : loss[i].warnings) out << "warning (n_dots " << tasks[i].dots << "): " << w << "\n";
  }
  o.sidecar.set("warnings", warnings);
  return o;
}

// ---- TLS

RunOutput tls_run(const RunConfig& c, std::ostream& out) {
  const ChainSpec chain = read_chain(c);
  const PulseSchedule sched = read_schedule(c, c.real("t_total"));
  TlsBath bath = TlsBath::uniform(chain.window(), c.real("chi"), c.real("inversion"));
  if (c.has("couplings")) bath.couplings = c.reals("couplings");
  if (c.has("inversions")) bath.inversions = c.reals("inversions");
  TlsTransportOptions opt;
  opt.dt = c.real("dt");
  opt.record_every = static_cast<int>(c.integer("record_every"));
  opt.memory_budget_bytes = c.real("memory_budget_mb") * 1e6;
  const TlsTransportResult r = transport_with_tls(chain, sched, bath, StateVector::basis(chain.dots, chain.from), opt);

  auto header = population_header(chain.dots);
  header.push_back("purity");
  RunOutput o;
  o.table = CsvTable(header);
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    std::vector<Cell> row{r.times[i]};
    for (int k = 0; k < chain.dots; ++k) row.emplace_back(r.reduced[i](k, k).real());
    row.emplace_back(r.purity[i]);
    o.table.add(row);
  }
  CsvTable blocks({"block", "weight", "fidelity", "dynamical_phase"});
  for (std::size_t b = 0; b < r.blocks.size(); ++b) {
    std::string signs;
    for (int s : r.blocks[b].signs) signs += s > 0 ? '+' : '-';
    blocks.add({signs, r.blocks[b].weight, r.block_fidelity[b], r.block_phase[b]});
  }
  o.extra.emplace_back("blocks", std::move(blocks));
  const double osc = fast_oscillation_amplitude(r.times, r.reduced, c.real("oscillation_window"));
  const auto crossing =
      crossing_condition(chain, bath, step_two_samples(sched, static_cast<int>(c.integer("crossing_samples"))));
  o.sidecar.set("fidelity", r.fidelity);
  o.sidecar.set("final_purity", r.purity.back());
  o.sidecar.set("fast_oscillation", osc);
  o.sidecar.set("crossing_condition_satisfied", crossing.satisfied);
  o.sidecar.set("crossing_margin", crossing.margin);
  out << "fidelity " << format_real(r.fidelity) << " fast_oscillation " << format_real(osc) << "\n";
  return o;
}

// ---- gas

std::vector<ParamSpec> gas_params(const std::string& n_g, const std::string& m_g) {
  return {
      real("n_g", n_g, "gas density (1/length)"),
      real("T", "1", "gas temperature, k_B = 1"),
      real("m_g", m_g, "gas particle mass"),
      real("W_g", "1", "gas packet width"),
      real("delta", "1", "coarse-graining time"),
      real("m", "1", "Brownian mass"),
  };
}

GasModel read_gas(const RunConfig& c) {
  GasModel g;
  g.n_g = c.real("n_g");
  g.T = c.real("T");
  g.m_g = c.real("m_g");
  g.W_g = c.real("W_g");
  g.delta = c.real("delta");
  if (!(c.real("m") > 0.0)) throw ConfigError("key 'm': mass must be positive");
  g.validate();
  return g;
}

std::vector<double> time_grid(double t_end, long points) {
  if (points < 2) throw ConfigError("key 't_points': need at least 2");
  if (!(t_end > 0.0)) throw ConfigError("key 't_end': must be positive");
  std::vector<double> t(static_cast<std::size_t>(points));
  for (long i = 0; i < points; ++i) t[static_cast<std::size_t>(i)] = t_end * static_cast<double>(i) / (points - 1);
  return t;
}

RunOutput classical_mc(const RunConfig& c, std::ostream& out) {
  const GasModel gas = read_gas(c);
  const ClassicalParticle start{c.real("x0"), c.real("p0"), c.real("m")};
  const auto times = time_grid(c.real("t_end"), c.integer("t_points"));
  EnsembleOptions opt;
  opt.trajectories = c.integer("trajectories");
  opt.seed = c.seed("seed");
  opt.chunk = c.integer("chunk");
  opt.stats = c.text("statistics") == "flux_weighted" ? CollisionStatistics::flux_weighted
                                                      : CollisionStatistics::maxwell_only;
  if (opt.trajectories < 2) throw ConfigError("key 'trajectories': need at least 2");
  if (opt.chunk < 1) throw ConfigError("key 'chunk': must be positive");
  const EnsembleMoments e = ensemble_moments(gas, start, times, opt);
  RunOutput o;
  o.table = CsvTable({"time", "x", "x_se", "p", "p_se", "xx", "xx_se", "pp", "pp_se", "xp", "xp_se"});
  for (std::size_t i = 0; i < e.times.size(); ++i) {
    const auto& m = e.mean[i];
    const auto& s = e.std_error[i];
    o.table.add({e.times[i], m.x, s.x, m.p, s.p, m.xx, s.xx, m.pp, s.pp, m.xp, s.xp});
  }
  const Kramers k = kramers(gas, c.real("m"));
  o.sidecar.set("trajectories", e.trajectories);
  o.sidecar.set("collisions", e.collisions);
  o.sidecar.set("kramers_gamma", k.gamma);
  o.sidecar.set("kramers_diffusion", k.diffusion);
  out << "trajectories " << e.trajectories << " collisions " << e.collisions << "\n";
  return o;
}

RunOutput qbm_moments(const RunConfig& c, std::ostream& out) {
  const GasModel gas = read_gas(c);
  const double m = c.real("m");
  MomentVector start;
  start.x = c.real("x0");
  start.p = c.real("p0");
  start.xx = start.x * start.x + c.real("var_x0");
  start.pp = start.p * start.p + c.real("var_p0");
  start.xp = start.x * start.p;
  const auto times = time_grid(c.real("t_end"), c.integer("t_points"));
  QbmOptions opt;
  opt.model = c.text("model") == "exact" ? QbmModel::exact : QbmModel::linear;
  opt.delta_term = c.text("delta_term") == "yes";
  opt.dt = c.real("dt");
  if (!(opt.dt > 0.0)) throw ConfigError("key 'dt': must be positive");
  const MomentSeries s = evolve_moments(start, gas, m, times, opt);
  RunOutput o;
  o.table = CsvTable({"time", "x", "p", "xx", "pp", "xp", "linear_xx", "linear_pp"});
  for (std::size_t i = 0; i < s.times.size(); ++i) {
    const auto& v = s.moments[i];
    const MomentVector a = analytic_moments(start, gas, m, s.times[i], opt.delta_term);
    o.table.add({s.times[i], v.x, v.p, v.xx, v.pp, v.xp, a.xx, a.pp});
  }
  const StandardForm sf = standard_form_coeffs(gas, m, opt.delta_term);
  o.sidecar.set("gamma", sf.gamma);
  o.sidecar.set("D_pp", sf.D_pp);
  o.sidecar.set("D_xx", sf.D_xx);
  o.sidecar.set("lindblad_ok", sf.lindblad_ok);
  o.sidecar.set("thermal_heating_average", thermal_heating_average(gas, m));
  out << "gamma " << format_real(sf.gamma) << " lindblad_ok " << (sf.lindblad_ok ? "yes" : "no") << "\n";
  return o;
}

RunOutput validity_cmd(const RunConfig& c, std::ostream& out) {
  GasModel gas;
  gas.T = c.real("T");
  gas.m_g = c.real("m_g");
  gas.W_g = c.real("W_g");
  gas.delta = c.real("delta");
  gas.n_g = c.has("headline") ? c.real("headline") * std::sqrt(gas.m_g * gas.T) / hbar : c.real("n_g");
  gas.validate();
  const ValidityCheck v = validity_check(gas, c.real("m"));
  RunOutput o;
  o.table = CsvTable({"name", "statement", "lhs", "rhs", "satisfied"});
  for (const auto& r : v.rows) o.table.add({r.name, r.statement, r.lhs, r.rhs, std::string(r.satisfied ? "yes" : "no")});
  const auto bad = v.violated();
  std::string joined;
  for (const auto& b : bad) joined += (joined.empty() ? "" : ";") + b;
  o.sidecar.set("headline", v.headline);
  o.sidecar.set("n_g", gas.n_g);
  o.sidecar.set("all_ok", v.all_ok());
  o.sidecar.set("violated", joined);
  out << "headline n_g hbar/sqrt(m_g T) = " << format_real(v.headline) << "\n";
  if (bad.empty()) out << "all inequalities satisfied\n";
  for (const auto& r : v.rows)
    if (!r.satisfied) out << "violated: " << r.name << "  " << r.statement << "  (" << format_real(r.lhs) << " vs "
                          << format_real(r.rhs) << ")\n";
  return o;
}

// ---- collision and decoherence

UniformAxis read_axis(const RunConfig& c, const std::string& stem) {
  UniformAxis a{c.real(stem + "_lo"), c.real(stem + "_hi"), static_cast<int>(c.integer(stem + "_points"))};
  a.validate(stem.c_str());
  return a;
}

RunOutput collide_cmd(const RunConfig& c, std::ostream& out) {
  const double alpha = c.real("alpha");
  if (!(alpha > 0.0)) throw ConfigError("key 'alpha': must be positive");
  const CollisionInput in = com_frame(c.real("x"), c.real("p"), c.real("m"), alpha, c.real("W"));
  in.validate();
  const double t = c.real("t");
  const UniformAxis xs = read_axis(c, "x");
  const UniformAxis xg = read_axis(c, "xg");
  const UniformAxis ps = read_axis(c, "p");
  const int quad = static_cast<int>(c.integer("quad_points"));

  std::vector<double> closed(static_cast<std::size_t>(xs.n)), exact(closed.size());
  parallel_for(closed.size(), [&](std::size_t i) {
    const double x = xs.at(static_cast<int>(i));
    closed[i] = in_collision_position_density(in, t, x);
    exact[i] = in_collision_position_density_exact(in, t, x, quad);
  });
  RunOutput o;
  o.table = CsvTable({"x", "density", "density_exact"});
  for (std::size_t i = 0; i < closed.size(); ++i) o.table.add({xs.at(static_cast<int>(i)), closed[i], exact[i]});

  const RVec pd = in_collision_momentum_density(in, t, xs, xg, ps);
  CsvTable mom({"p", "density"});
  for (int j = 0; j < ps.n; ++j) mom.add({ps.at(j), pd(j)});
  o.extra.emplace_back("momentum", std::move(mom));

  const ScatterResult s = scatter(in);
  const CollisionOutcome cl = collide(in.brownian.p, in.gas.p, in.brownian.mass, in.gas.mass);
  o.sidecar.set("t_c", s.report.t_c);
  o.sidecar.set("validity_ok", s.report.ok());
  o.sidecar.set("brownian_x_after", s.brownian.x);
  o.sidecar.set("brownian_p_after", s.brownian.p);
  o.sidecar.set("gas_x_after", s.gas.x);
  o.sidecar.set("gas_p_after", s.gas.p);
  o.sidecar.set("classical_p_after", cl.p);
  o.sidecar.set("classical_p_g_after", cl.p_g);
  out << "t_c " << format_real(s.report.t_c) << " p_after " << format_real(s.brownian.p) << "\n";
  return o;
}

RunOutput wigner_sweep(const RunConfig& c, std::ostream& out) {
  const bool position = c.text("mode") == "position";
  const double sep = c.real("separation");
  const double W = c.real("W");
  const double m = c.real("m");
  CatState cat;
  cat.a = {position ? 0.5 * sep : 0.0, position ? 0.0 : 0.5 * sep, W, m};
  cat.b = {position ? -0.5 * sep : 0.0, position ? 0.0 : -0.5 * sep, W, m};
  cat.validate();

  const bool over_T = c.text("sweep") == "temperature";
  const auto values = over_T ? c.reals("T_values") : c.reals("t_values");
  RunOutput o;
  o.table = CsvTable({"T", "t_window", "decoherence", "std_error", "law", "law_small"});
  for (double v : values) {
    DecoherenceRun run;
    run.T = over_T ? v : c.real("T");
    run.t_window = over_T ? c.real("t_window") : v;
    run.alpha = c.real("alpha");
    run.samples = static_cast<int>(c.integer("samples"));
    run.seed = c.seed("seed");
    run.x_ref = c.real("x_ref");
    run.p_ref = c.real("p_ref");
    const DecoherenceResult r = mc_decoherence(cat, run);
    const double m_g = run.alpha * m;
    const double law = position ? position_decoherence_general(sep, run.T, m_g)
                                : momentum_decoherence(sep, run.T, m_g, m, run.t_window);
    const double small = position ? position_decoherence_small(sep, run.T, m_g)
                                  : momentum_decoherence_small(sep, run.T, m_g, m, run.t_window);
    o.table.add({run.T, run.t_window, r.decoherence, r.std_error, law, small});
    out << "T " << format_real(run.T) << " t " << format_real(run.t_window) << " decoherence "
        << format_real(r.decoherence) << " +- " << format_real(r.std_error) << "\n";
  }
  return o;
}

std::vector<Command> build_commands() {
  std::vector<Command> cmds;

  {
    auto p = chain_params("60", "delayed");
    cmds.push_back({{"ctap-run", "single CTAP transport; populations over time and final fidelity", p}, ctap_run});
  }
  {
    auto p = chain_params("60", "delayed");
    p.erase(std::remove_if(p.begin(), p.end(), [](const ParamSpec& s) { return s.key == "t_total"; }), p.end());
    p.push_back(real("t_values", "40,60,80,100,120", "comma-separated transfer times"));
    cmds.push_back({{"ctap-sweep", "CTAP fidelity against transfer time", p}, ctap_sweep});
  }
  cmds.push_back({{"qpc-loss",
                   "adiabatic transfer loss under QPC measurements against a/d",
                   {
                       integer("n_dots", "3,5,7,9,11", "comma-separated chain lengths (transport end to end)"),
                       real("t_totals", "150,196,225,242,249", "transfer time per n_dots entry"),
                       real("a_over_d", "0.1,0.5,1,2,3,5,10,20", "comma-separated sensor distances a/d"),
                       choice("locality", {"nonlocal", "local"}, "sensor kernel; local ignores a_over_d"),
                       real("alpha_over_a", "0.04", "sensitivity alpha/a"),
                       real("rate_per_sensor", "1", "measurement rate per sensor R/N"),
                       real("omega_max", "1", "pulse peak and intermediate coupling"),
                       choice("schedule", {"symmetric", "delayed"}, "pulse family"),
                       integer("points", "2000", "trapezoid points over step two"),
                       integer("site_cutoff", "10000", "rail half-width in sensors"),
                       choice("lindblad", {"no", "yes"}, "also integrate the full master equation (local only)"),
                       real("dt", "0.02", "RK4 step of the master equation"),
                   }},
                  qpc_loss});
  {
    auto p = chain_params("150", "symmetric");
    p.push_back(real("chi", "0", "uniform TLS coupling"));
    p.push_back(real("inversion", "0", "uniform initial TLS inversion in [-1, 1]"));
    p.push_back(optional(real("couplings", "", "per-window-site couplings, overrides chi")));
    p.push_back(optional(real("inversions", "", "per-window-site inversions, overrides inversion; +-1 picks one block")));
    p.push_back(real("memory_budget_mb", "2000", "refuse runs above this estimate"));
    p.push_back(real("oscillation_window", "10", "running-mean window for the fast-oscillation measure"));
    p.push_back(integer("crossing_samples", "41", "step-two samples for the level-crossing check"));
    cmds.push_back({{"tls-run", "CTAP with one two-level fluctuator per window site", p}, tls_run});
  }
  {
    auto p = gas_params("1", "0.01");
    for (auto q : {real("x0", "0", "initial position"), real("p0", "0", "initial momentum"),
                   real("t_end", "3", "last output time"), integer("t_points", "31", "output times"),
                   integer("trajectories", "10000", "ensemble size"), integer("chunk", "1000", "trajectories per stream")})
      p.push_back(q);
    p.push_back({"seed", ParamType::seed, "1", "run seed", {}});
    p.push_back(choice("statistics", {"flux_weighted", "maxwell_only"}, "collision partner statistics"));
    cmds.push_back({{"classical-mc", "classical jump-process ensemble moments", p}, classical_mc});
  }
  cmds.push_back({{"collide",
                   "single Gaussian collision in the centre-of-mass frame; position and momentum densities",
                   {
                       real("x", "10", "Brownian start position"),
                       real("p", "-2", "Brownian start momentum"),
                       real("m", "1", "Brownian mass"),
                       real("alpha", "0.3", "mass ratio m_g/m"),
                       real("W", "4", "Brownian packet width"),
                       real("t", "5", "evaluation time"),
                       real("x_lo", "-20", "Brownian grid start"),
                       real("x_hi", "20", "Brownian grid end"),
                       integer("x_points", "500", "Brownian grid points"),
                       real("xg_lo", "-40", "gas grid start (momentum density)"),
                       real("xg_hi", "40", "gas grid end (momentum density)"),
                       integer("xg_points", "500", "gas grid points (momentum density)"),
                       real("p_lo", "-4", "momentum grid start"),
                       real("p_hi", "4", "momentum grid end"),
                       integer("p_points", "161", "momentum grid points"),
                       integer("quad_points", "4001", "Simpson points of the exact position density"),
                   }},
                  collide_cmd});
  {
    auto p = gas_params("3.1332853432887503", "0.01");
    for (auto q : {real("x0", "0", "initial <x>"), real("p0", "2", "initial <p>"),
                   real("var_x0", "0", "initial position variance"), real("var_p0", "0", "initial momentum variance"),
                   real("t_end", "3", "last output time"), integer("t_points", "31", "output times"),
                   real("dt", "0.001", "RK4 step")})
      p.push_back(q);
    p.push_back(choice("model", {"exact", "linear"}, "collision terms"));
    p.push_back(choice("delta_term", {"no", "yes"}, "include the delta^2 position-diffusion source"));
    cmds.push_back({{"qbm-moments", "quantum Brownian motion moment equations", p}, qbm_moments});
  }
  {
    ParamSpec seed{"seed", ParamType::seed, "1", "run seed", {}};
    cmds.push_back({{"wigner-sweep",
                     "Monte Carlo decoherence of a cat state by one gas collision",
                     {
                         choice("mode", {"position", "momentum"}, "cat separated in position or momentum"),
                         real("separation", "40", "full branch separation x_D or p_D"),
                         real("W", "4", "packet width"),
                         real("m", "1", "Brownian mass"),
                         real("alpha", "0.0001", "mass ratio m_g/m"),
                         choice("sweep", {"temperature", "time"}, "swept variable"),
                         real("T_values", "0.05,0.1,0.15,0.2", "temperatures when sweeping temperature"),
                         real("t_values", "10,20,30,40,50", "windows when sweeping time"),
                         real("T", "0.5", "temperature when sweeping time"),
                         real("t_window", "20", "collision window when sweeping temperature"),
                         integer("samples", "200", "gas samples per point"),
                         seed,
                         real("x_ref", "0", "reference x of the interference term"),
                         real("p_ref", "0", "reference p of the interference term"),
                     }},
                    wigner_sweep});
  }
  {
    auto p = gas_params("1", "0.01");
    p.front() = real("n_g", "1", "gas density; ignored when headline is set");
    p.push_back(optional(real("headline", "", "sets n_g from n_g hbar/sqrt(m_g T)")));
    cmds.push_back({{"validity", "inequalities behind the collisional master equation", p}, validity_cmd});
  }

  for (auto& c : cmds) {
    c.schema.params.push_back({"out_dir", ParamType::path, ".", "output directory", {}});
    c.schema.params.push_back({"name", ParamType::text, c.schema.command, "output file stem", {}});
  }
  return cmds;
}

const std::vector<Command>& commands() {
  static const std::vector<Command> cmds = build_commands();
  return cmds;
}

}  // namespace

const std::vector<Schema>& command_schemas() {
  static const std::vector<Schema> s = [] {
    std::vector<Schema> v;
    for (const auto& c : commands()) v.push_back(c.schema);
    return v;
  }();
  return s;
}

std::string usage() {
  std::ostringstream os;
  os << "usage: qmeas <command> [--config FILE] [--key=value ...]\n"
        "       qmeas <command> --help   prints the command's keys\n\ncommands:\n";
  for (const auto& c : commands()) os << "  " << c.schema.command << std::string(14 - c.schema.command.size(), ' ')
                                      << c.schema.summary << "\n";
  os << "\nthreads: QMEAS_THREADS (default: hardware concurrency)\n";
  return os.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  if (args.empty()) {
    err << usage();
    return 2;
  }
  if (args[0] == "-h" || args[0] == "--help" || args[0] == "help") {
    out << usage();
    return 0;
  }
  const Command* cmd = nullptr;
  for (const auto& c : commands())
    if (c.schema.command == args[0]) cmd = &c;
  if (!cmd) {
    err << "unknown command '" << args[0] << "'\n" << usage();
    return 2;
  }

  try {
    CLI::App app{cmd->schema.summary, "qmeas " + cmd->schema.command};
    app.set_help_flag();
    app.allow_extras();
    bool help = false;
    std::string config_path;
    app.add_flag("-h,--help", help);
    app.add_option("--config", config_path);
    std::map<std::string, std::string> flag_values;
    std::map<std::string, CLI::Option*> opts;
    for (const auto& p : cmd->schema.params) opts[p.key] = app.add_option("--" + p.key, flag_values[p.key]);

    std::vector<std::string> rest(args.begin() + 1, args.end());
    std::reverse(rest.begin(), rest.end());  // CLI11 consumes a reversed vector
    app.parse(rest);
    if (help) {
      out << cmd->schema.describe();
      return 0;
    }
    if (const auto extra = app.remaining(); !extra.empty()) {
      std::string key = extra.front();
      key.erase(0, key.find_first_not_of('-'));
      if (const auto eq = key.find('='); eq != std::string::npos) key.erase(eq);
      throw ConfigError("unknown key '" + key + "' for " + cmd->schema.command);
    }
    std::map<std::string, std::string> flags;
    for (const auto& [k, o] : opts)
      if (o->count() > 0) flags[k] = flag_values[k];
    const auto file = config_path.empty() ? std::map<std::string, std::string>{} : read_config_file(config_path);
    const RunConfig config(cmd->schema, file, flags);

    const auto t0 = std::chrono::steady_clock::now();
    RunOutput result = cmd->body(config, out);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const std::filesystem::path dir = config.text("out_dir");
    std::filesystem::create_directories(dir);
    const std::string stem = config.text("name");
    const auto csv = dir / (stem + ".csv");
    result.table.write(csv.string());
    for (const auto& [suffix, table] : result.extra) table.write((dir / (stem + "_" + suffix + ".csv")).string());

    Sidecar& side = result.sidecar;
    side.set("command", cmd->schema.command);
    side.set_config(config.values());
    for (const auto& [k, v] : version_info()) side.set(k, v);
    side.set("threads", static_cast<long>(worker_count()));
    side.set("wall_time_s", wall);
    side.set("csv", csv.string());
    side.write((dir / (stem + ".json")).string());
    out << "wrote " << csv.string() << "\n";
    return 0;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const CLI::ParseError& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "numeric failure: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace qmeas
