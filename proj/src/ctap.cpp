#include "qmeas/ctap.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "qmeas/eigtrack.hpp"
#include "qmeas/gaussian.hpp"

namespace qmeas {

void ChainSpec::validate() const {
  if (dots < 3 || dots % 2 == 0) throw ConfigError("n_dots must be an odd integer >= 3");
  if (!(omega_max > 0.0)) throw ConfigError("omega_max must be positive");
  if (from < 0 || to >= dots || from >= to) throw ConfigError("transport endpoints out of range");
  if ((to - from) % 2 != 0) throw ConfigError("transport span must contain an odd number of sites");
}

double PulseSchedule::pump(double t) const {
  const double u = (t - pump_center) / width;
  return omega_max * std::exp(-u * u);
}

double PulseSchedule::stokes(double t) const {
  const double u = (t - stokes_center) / width;
  return omega_max * std::exp(-u * u);
}

void PulseSchedule::validate() const {
  if (!(omega_max >= 0.0)) throw ConfigError("pulse amplitude must be non-negative");
  if (!(width > 0.0)) throw ConfigError("pulse_width must be positive");
  if (!(end >= start)) throw ConfigError("pulse window end precedes start");
}

PulseSchedule PulseSchedule::delayed(double T, double omega_max) {
  if (!(T > 0.0)) throw ConfigError("t_total must be positive");
  return {omega_max, 0.9 * T, 0.5 * T, 0.25 * T, -0.5 * T, 2.0 * T};
}

PulseSchedule PulseSchedule::symmetric(double T, double omega_max) {
  if (!(T > 0.0)) throw ConfigError("t_total must be positive");
  return {omega_max, 0.75 * T, 0.25 * T, 0.25 * T, -T / 3.0, 4.0 * T / 3.0};
}

PulseSchedule PulseSchedule::none() { return {0.0, 0.0, 0.0, 1.0, 0.0, 0.0}; }

double PulseSchedule::step_two_start(double fraction) const {
  return pump_center - width * std::sqrt(-std::log(fraction));
}

double PulseSchedule::step_two_end(double fraction) const {
  return stokes_center + width * std::sqrt(-std::log(fraction));
}

CMat chain_hamiltonian(const ChainSpec& chain, double pump, double stokes, std::span<const double> diagonal) {
  chain.validate();
  const int n = chain.dots;
  if (!diagonal.empty() && static_cast<int>(diagonal.size()) != n)
    throw ConfigError("diagonal length " + std::to_string(diagonal.size()) + " does not match n_dots " +
                      std::to_string(n));
  CMat h = CMat::Zero(n, n);
  for (int i = chain.from; i < chain.to; ++i) {
    double c = chain.omega_max;
    if (i == chain.from) c = pump;
    if (i == chain.to - 1) c = stokes;
    h(i, i + 1) = c;
    h(i + 1, i) = c;
  }
  for (std::size_t i = 0; i < diagonal.size(); ++i) h(static_cast<int>(i), static_cast<int>(i)) = diagonal[i];
  return h;
}

CMat chain_hamiltonian(const ChainSpec& chain, const PulseSchedule& schedule, double t,
                       std::span<const double> diagonal) {
  return chain_hamiltonian(chain, schedule.pump(t), schedule.stokes(t), diagonal);
}

StateVector dark_state(double pump, double stokes, double omega_max, int span_length) {
  if (span_length < 3 || span_length % 2 == 0) throw ConfigError("dark state span must be odd and >= 3");
  if (pump == 0.0 && stokes == 0.0) throw ConfigError("dark state undefined with both pulses off");
  const double theta = std::atan2(pump, stokes);
  const double mixing = pump * stokes / (omega_max * std::hypot(pump, stokes));
  CVec v = CVec::Zero(span_length);
  const int half = (span_length - 1) / 2;
  v(0) = std::cos(theta);
  v(span_length - 1) = (half % 2 == 0 ? 1.0 : -1.0) * std::sin(theta);
  // Interior sites 3, 5, ... (1-based) carry -X(-1)^j.
  for (int j = 2; j <= half; ++j) v(2 * j - 2) = -mixing * (j % 2 == 0 ? 1.0 : -1.0);
  return StateVector(std::move(v));
}

StateVector chain_dark_state(const ChainSpec& chain, double pump, double stokes) {
  const StateVector d = dark_state(pump, stokes, chain.omega_max, chain.window());
  CVec v = CVec::Zero(chain.dots);
  v.segment(chain.from, chain.window()) = d.amplitudes();
  return StateVector(std::move(v), false);
}

namespace {

CMat window_block(const ChainSpec& chain, const CMat& h) {
  return h.block(chain.from, chain.from, chain.window(), chain.window());
}

int best_overlap(const CMat& vecs, const CVec& ref) {
  Eigen::Index k = 0;
  (vecs.adjoint() * ref).cwiseAbs().maxCoeff(&k);
  return static_cast<int>(k);
}

CVec window_reference(const ChainSpec& chain, double pump, double stokes) {
  if (pump == 0.0 && stokes == 0.0) {
    CVec e = CVec::Zero(chain.window());
    e(0) = 1.0;
    return e;
  }
  return dark_state(pump, stokes, chain.omega_max, chain.window()).amplitudes();
}

}  // namespace

AdiabaticityReport adiabaticity_metric(const ChainSpec& chain, const PulseSchedule& schedule, double t,
                                       std::span<const double> diagonal) {
  const double h = 4.0 * schedule.width / 2000.0;
  const CVec ref = window_reference(chain, schedule.pump(t), schedule.stokes(t));
  RVec e0, em, ep;
  CMat v0, vm, vp;
  sorted_eigensystem(window_block(chain, chain_hamiltonian(chain, schedule, t, diagonal)), e0, v0);
  sorted_eigensystem(window_block(chain, chain_hamiltonian(chain, schedule, t - h, diagonal)), em, vm);
  sorted_eigensystem(window_block(chain, chain_hamiltonian(chain, schedule, t + h, diagonal)), ep, vp);
  const int k = best_overlap(v0, ref);
  const CVec c = v0.col(k);
  auto aligned = [&](const CMat& v) {
    CVec u = v.col(best_overlap(v, c));
    const cplx o = c.dot(u);
    return CVec(u * (std::conj(o) / std::abs(o)));
  };
  const CVec deriv = (aligned(vp) - aligned(vm)) / (2.0 * h);

  AdiabaticityReport r;
  for (int m = 0; m < e0.size(); ++m) {
    if (m == k) continue;
    const double gap = std::abs(e0(m) - e0(k));
    if (gap < 1e-10) {
      r.anticrossing = true;
      r.ratios.push_back(std::numeric_limits<double>::infinity());
      continue;
    }
    r.ratios.push_back(hbar * std::abs(v0.col(m).dot(deriv)) / gap);
  }
  for (double x : r.ratios) r.max_ratio = std::max(r.max_ratio, x);
  return r;
}

TransportResult run_transport(const ChainSpec& chain, const PulseSchedule& schedule, const StateVector& initial,
                              const TransportOptions& opt) {
  chain.validate();
  schedule.validate();
  if (initial.dim() != chain.dots) throw ConfigError("initial state dimension does not match n_dots");
  if (!(opt.dt > 0.0) || chain.omega_max * opt.dt > 0.05 + 1e-12)
    throw ConfigError("dt must satisfy omega_max*dt <= 0.05");
  const std::vector<double> diag = opt.diagonal;
  HamiltonianFn hf = [&](double t) { return chain_hamiltonian(chain, schedule, t, diag); };

  TransportResult res;
  // Full step grid for the zero-branch phase, thinned to record_every afterwards.
  res.trajectory = evolve_schrodinger(hf, initial, {schedule.start, schedule.end}, {opt.dt, 1});
  const StateVector& fin = res.trajectory.final_state();
  res.fidelity = fin.population(chain.to);
  if (opt.target) {
    if (opt.target->dim() != chain.dots) throw ConfigError("target dimension does not match n_dots");
    res.coherent_fidelity = std::norm(opt.target->amplitudes().dot(fin.amplitudes()));
  }

  // Zero branch on the window block, tracked by overlap from the dark state at the start.
  const auto& times = res.trajectory.times;
  res.zero_branch.resize(times.size(), 0.0);
  if (times.size() > 1) {
    RVec vals;
    CMat vecs;
    sorted_eigensystem(window_block(chain, hf(times.front())), vals, vecs);
    int k = best_overlap(vecs, window_reference(chain, schedule.pump(times.front()), schedule.stokes(times.front())));
    CVec cur = vecs.col(k);
    res.zero_branch[0] = vals(k);
    for (std::size_t i = 1; i < times.size(); ++i) {
      sorted_eigensystem(window_block(chain, hf(times[i])), vals, vecs);
      k = best_overlap(vecs, cur);
      cur = vecs.col(k);
      res.zero_branch[i] = vals(k);
      res.dynamical_phase += 0.5 * (res.zero_branch[i] + res.zero_branch[i - 1]) * (times[i] - times[i - 1]);
    }
  }
  const std::size_t every = static_cast<std::size_t>(std::max(1, opt.record_every));
  if (every > 1) {
    Trajectory<StateVector> thin;
    thin.stats = res.trajectory.stats;
    std::vector<double> branch;
    for (std::size_t i = 0; i < times.size(); ++i)
      if (i % every == 0 || i + 1 == times.size()) {
        thin.times.push_back(times[i]);
        thin.states.push_back(res.trajectory.states[i]);
        branch.push_back(res.zero_branch[i]);
      }
    res.trajectory = std::move(thin);
    res.zero_branch = std::move(branch);
  }
  return res;
}

TransportResult run_transport(const ChainSpec& chain, const PulseSchedule& schedule, int initial_site,
                              const TransportOptions& opt) {
  chain.validate();
  return run_transport(chain, schedule, StateVector::basis(chain.dots, initial_site), opt);
}

double max_nonadiabatic_population(const ChainSpec& chain, const PulseSchedule& schedule,
                                   const Trajectory<StateVector>& traj) {
  double worst = 0.0;
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const double t = traj.times[i];
    const double pp = schedule.pump(t), ss = schedule.stokes(t);
    if (pp == 0.0 && ss == 0.0) continue;
    const StateVector d = chain_dark_state(chain, pp, ss);
    const double leak = 1.0 - std::norm(d.amplitudes().dot(traj.states[i].amplitudes()));
    worst = std::max(worst, leak);
  }
  return worst;
}

}  // namespace qmeas
