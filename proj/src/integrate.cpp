#include "qmeas/integrate.hpp"

#include <cmath>
#include <sstream>

namespace qmeas {

namespace {

constexpr double kHermitianTol = 1e-10;
constexpr double kTraceAbort = 1e-5;

long step_count(TimeSpan span, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt must be positive");
  if (!(span.end >= span.start)) throw ConfigError("time span must be increasing");
  if (span.end == span.start) return 0;
  return static_cast<long>(std::ceil((span.end - span.start) / dt - 1e-9));
}

CMat checked_h(const HamiltonianFn& h, double t, int dim) {
  CMat m = h(t);
  if (m.rows() != dim || m.cols() != dim) throw ConfigError("Hamiltonian dimension does not match the state");
  if (!is_hermitian(m, kHermitianTol)) {
    std::ostringstream os;
    os << "Hamiltonian not Hermitian at t=" << t;
    throw ConfigError(os.str());
  }
  return m;
}

bool keep(long i, long n, int every) { return i == n || i % every == 0; }

}  // namespace

Trajectory<StateVector> evolve_schrodinger(const HamiltonianFn& h, const StateVector& psi0, TimeSpan span,
                                           StepOptions opt) {
  const long n = step_count(span, opt.dt);
  const double dt = n > 0 ? (span.end - span.start) / static_cast<double>(n) : 0.0;
  const int dim = psi0.dim();
  const int every = std::max(1, opt.record_every);

  Trajectory<StateVector> out;
  out.stats.step = dt;
  out.times.push_back(span.start);
  out.states.push_back(psi0);

  CVec psi = psi0.amplitudes();
  for (long i = 1; i <= n; ++i) {
    const double t = span.start + static_cast<double>(i - 1) * dt;
    const CMat h0 = checked_h(h, t, dim);
    const CMat hm = checked_h(h, t + 0.5 * dt, dim);
    const CMat h1 = checked_h(h, t + dt, dim);
    const CVec k1 = -I * (h0 * psi);
    const CVec k2 = -I * (hm * (psi + 0.5 * dt * k1));
    const CVec k3 = -I * (hm * (psi + 0.5 * dt * k2));
    const CVec k4 = -I * (h1 * (psi + dt * k3));
    psi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!psi.allFinite()) throw NumericError("non-finite amplitude at t=" + std::to_string(t + dt));
    const double nrm = psi.norm();
    out.stats.max_norm_drift = std::max(out.stats.max_norm_drift, std::abs(nrm - 1.0));
    psi /= nrm;
    if (keep(i, n, every)) {
      out.times.push_back(span.start + static_cast<double>(i) * dt);
      out.states.emplace_back(psi, false);
    }
  }
  out.stats.steps = n;
  return out;
}

Trajectory<DensityOperator> evolve_lindblad(const HamiltonianFn& h, const std::vector<CMat>& jumps,
                                            const DensityOperator& rho0, TimeSpan span, StepOptions opt) {
  const long n = step_count(span, opt.dt);
  const double dt = n > 0 ? (span.end - span.start) / static_cast<double>(n) : 0.0;
  const int dim = rho0.dim();
  const int every = std::max(1, opt.record_every);

  CMat anti = CMat::Zero(dim, dim);
  for (const auto& l : jumps) {
    if (l.rows() != dim || l.cols() != dim) throw ConfigError("jump operator dimension does not match the state");
    anti += l.adjoint() * l;
  }
  anti *= 0.5;

  auto rhs = [&](const CMat& hm, const CMat& r) {
    const CMat heff = hm - I * anti;
    CMat d = -I * (heff * r - r * heff.adjoint());
    for (const auto& l : jumps) d.noalias() += l * r * l.adjoint();
    return d;
  };

  Trajectory<DensityOperator> out;
  out.stats.step = dt;
  out.times.push_back(span.start);
  out.states.push_back(rho0);
  const double tr0 = rho0.trace();

  CMat rho = rho0.matrix();
  for (long i = 1; i <= n; ++i) {
    const double t = span.start + static_cast<double>(i - 1) * dt;
    const CMat h0 = checked_h(h, t, dim);
    const CMat hm = checked_h(h, t + 0.5 * dt, dim);
    const CMat h1 = checked_h(h, t + dt, dim);
    const CMat k1 = rhs(h0, rho);
    const CMat k2 = rhs(hm, rho + 0.5 * dt * k1);
    const CMat k3 = rhs(hm, rho + 0.5 * dt * k2);
    const CMat k4 = rhs(h1, rho + dt * k3);
    rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!rho.allFinite()) throw NumericError("non-finite density matrix at t=" + std::to_string(t + dt));
    const double drift = std::abs(rho.trace().real() - tr0);
    out.stats.max_trace_drift = std::max(out.stats.max_trace_drift, drift);
    if (drift > kTraceAbort) {
      std::ostringstream os;
      os << "trace drift " << drift << " at t=" << t + dt << " (step " << i << ", dt=" << dt << ")";
      throw NumericError(os.str());
    }
    out.stats.max_hermiticity_error =
        std::max(out.stats.max_hermiticity_error, (rho - rho.adjoint()).cwiseAbs().maxCoeff());
    if (keep(i, n, every)) {
      out.times.push_back(span.start + static_cast<double>(i) * dt);
      out.states.push_back(DensityOperator::unchecked(rho));
    }
  }
  out.stats.steps = n;
  return out;
}

double schrodinger_step_halving(const HamiltonianFn& h, const StateVector& psi0, TimeSpan span, double dt) {
  const StepOptions coarse{dt, 1 << 30};
  const StepOptions fine{dt / 2.0, 1 << 30};
  const auto a = evolve_schrodinger(h, psi0, span, coarse).final_state().amplitudes();
  const auto b = evolve_schrodinger(h, psi0, span, fine).final_state().amplitudes();
  return (a - b).cwiseAbs().maxCoeff();
}

double lindblad_step_halving(const HamiltonianFn& h, const std::vector<CMat>& jumps, const DensityOperator& rho0,
                             TimeSpan span, double dt) {
  const StepOptions coarse{dt, 1 << 30};
  const StepOptions fine{dt / 2.0, 1 << 30};
  const auto a = evolve_lindblad(h, jumps, rho0, span, coarse).final_state().matrix();
  const auto b = evolve_lindblad(h, jumps, rho0, span, fine).final_state().matrix();
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace qmeas
