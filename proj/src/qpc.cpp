#include "qmeas/qpc.hpp"

#include <cmath>
#include <functional>

#include "qmeas/integrate.hpp"

namespace qmeas {

void QpcArray::validate() const {
  if (!(a > 0.0) || !(d > 0.0)) throw ConfigError("qpc distances a and d must be positive");
  if (!(alpha >= 0.0)) throw ConfigError("qpc sensitivity alpha must be non-negative");
  if (locality == Locality::nonlocal && !(alpha < a)) throw ConfigError("qpc weakness requires alpha/a < 1");
  if (!(rate >= 0.0)) throw ConfigError("measurement rate must be non-negative");
  if (n_qpc < 1) throw ConfigError("n_qpc must be positive");
  if (site_cutoff < 1) throw ConfigError("site_cutoff must be positive");
}

double QpcArray::distance(long i, long j) const {
  const double s = static_cast<double>(i - j) * d;
  return std::sqrt(a * a + s * s);
}

double QpcArray::weight(long i, long j) const {
  if (locality == Locality::local) return i == j ? 1.0 + alpha : 1.0;
  return 1.0 - alpha / distance(i, j);
}

double kappa_with_cutoff(const QpcArray& array, long cutoff) {
  array.validate();
  const double n = static_cast<double>(array.n_qpc);
  if (array.locality == Locality::local) return n / (n + array.alpha);
  const long half = array.n_qpc / 2;
  const long c = std::min(cutoff, half);
  // sum_j alpha/r_0j, |j| <= c, then a midpoint integral tail out to the rail end.
  double s = array.alpha / array.a;
  for (long j = c; j >= 1; --j) s += 2.0 * array.alpha / array.distance(0, j);
  if (half > c) {
    auto prim = [&](double x) { return std::asinh(x * array.d / array.a) / array.d; };
    s += 2.0 * array.alpha * (prim(static_cast<double>(half) + 0.5) - prim(static_cast<double>(c) + 0.5));
  }
  return 1.0 / (1.0 - s / n);
}

double kappa(const QpcArray& array) { return kappa_with_cutoff(array, array.site_cutoff); }

std::vector<RMat> ring_effect_operators(const QpcArray& array, int n_sites) {
  array.validate();
  if (n_sites < 1) throw ConfigError("ring needs at least one site");
  auto ring_weight = [&](int i, int j) {
    int s = std::abs(i - j);
    s = std::min(s, n_sites - s);
    if (array.locality == Locality::local) return s == 0 ? 1.0 + array.alpha : 1.0;
    return 1.0 - array.alpha / array.distance(0, s);
  };
  double col = 0.0;
  for (int j = 0; j < n_sites; ++j) col += ring_weight(0, j);
  const double kbar = static_cast<double>(n_sites) / col;
  std::vector<RMat> out;
  out.reserve(static_cast<std::size_t>(n_sites));
  for (int j = 0; j < n_sites; ++j) {
    RMat e = RMat::Zero(n_sites, n_sites);
    for (int i = 0; i < n_sites; ++i) e(i, i) = kbar / n_sites * ring_weight(i, j);
    out.push_back(std::move(e));
  }
  return out;
}

double dephasing_rate(const QpcArray& array, long k, long l) {
  array.validate();
  if (k == l) return 0.0;
  const double pref = array.per_sensor_rate();
  if (array.locality == Locality::local) {
    const double s = std::sqrt(1.0 + array.alpha);
    return pref * (s - 1.0) * (s - 1.0);
  }
  const long lo = std::min(k, l) - array.site_cutoff;
  const long hi = std::max(k, l) + array.site_cutoff;
  double sum = 0.0;
  for (long j = lo; j <= hi; ++j) {
    const double diff = std::sqrt(array.weight(k, j)) - std::sqrt(array.weight(l, j));
    sum += 0.5 * diff * diff;
  }
  // Far-field terms behave as alpha^2 (k-l)^2 / (8 d^2 j^4): bound the neglected tail.
  const double sep = static_cast<double>(k - l);
  const double c = static_cast<double>(array.site_cutoff);
  const double tail = array.alpha * array.alpha * sep * sep / (12.0 * array.d * array.d * c * c * c);
  if (tail > 1e-8 * sum) throw NumericError("dephasing_rate: truncation tail above bound; raise site_cutoff");
  return pref * sum;
}

std::vector<CMat> qpc_jump_operators(const QpcArray& array, int dots) {
  array.validate();
  std::vector<CMat> out;
  const double amp = std::sqrt(array.per_sensor_rate());
  const long lo = array.locality == Locality::local ? 0 : -static_cast<long>(array.site_cutoff);
  const long hi = array.locality == Locality::local ? dots - 1 : dots - 1 + array.site_cutoff;
  for (long j = lo; j <= hi; ++j) {
    CMat l = CMat::Zero(dots, dots);
    for (int i = 0; i < dots; ++i) l(i, i) = amp * std::sqrt(array.weight(i, j));
    out.push_back(std::move(l));
  }
  return out;
}

namespace {

double trapezoid(const std::function<double(double)>& f, double a, double b, int points) {
  const double h = (b - a) / (points - 1);
  double s = 0.5 * (f(a) + f(b));
  for (int i = 1; i < points - 1; ++i) s += f(a + h * i);
  return s * h;
}

struct SensorTable {
  long first = 0;
  RMat w;  // rows: window sites, cols: sensors
  RMat s;
};

SensorTable sensor_table(const QpcArray& array, const ChainSpec& chain, long extra_site) {
  long lo = chain.from, hi = chain.to;
  if (extra_site >= 0) {
    lo = std::min(lo, extra_site);
    hi = std::max(hi, extra_site);
  }
  if (array.locality == Locality::nonlocal) {
    lo -= array.site_cutoff;
    hi += array.site_cutoff;
  }
  SensorTable t;
  t.first = lo;
  const int rows = chain.window() + 1;  // last row: extra site
  const int cols = static_cast<int>(hi - lo + 1);
  t.w.resize(rows, cols);
  for (int r = 0; r < rows; ++r) {
    const long site = r < chain.window() ? chain.from + r : extra_site;
    for (int c = 0; c < cols; ++c) t.w(r, c) = site >= 0 ? array.weight(site, lo + c) : 1.0;
  }
  t.s = t.w.cwiseSqrt();
  return t;
}

RVec window_populations(const ChainSpec& chain, double pump, double stokes) {
  const StateVector d = dark_state(pump, stokes, chain.omega_max, chain.window());
  return d.amplitudes().cwiseAbs2();
}

LossResult integrate_rate(const QpcArray& array, const ChainSpec& chain, const PulseSchedule& schedule,
                          const LossOptions& opt, const std::function<double(const RVec&)>& rate) {
  if (opt.points < 3) throw ConfigError("loss quadrature needs at least 3 points");
  const double t0 = schedule.step_two_start(opt.threshold);
  const double t1 = schedule.step_two_end(opt.threshold);
  LossResult r;
  if (array.rate == 0.0 || !(t1 > t0)) return r;
  auto f = [&](double t) { return rate(window_populations(chain, schedule.pump(t), schedule.stokes(t))); };
  r.value = trapezoid(f, t0, t1, opt.points);
  const double fine = trapezoid(f, t0, t1, 2 * opt.points - 1);
  r.doubled_grid_difference = r.value != 0.0 ? std::abs(fine - r.value) / std::abs(r.value) : 0.0;
  for (int i = 0; i <= 50; ++i) {
    const double t = t0 + (t1 - t0) * i / 50.0;
    r.max_adiabaticity = std::max(r.max_adiabaticity, adiabaticity_metric(chain, schedule, t).max_ratio);
  }
  if (r.max_adiabaticity >= 0.1) r.warnings.push_back("adiabaticity metric exceeds 0.1 during step two");
  if (r.doubled_grid_difference > 1e-4) r.warnings.push_back("loss quadrature not converged to 1e-4");
  return r;
}

}  // namespace

LossResult transfer_loss(const QpcArray& array, const ChainSpec& chain, const PulseSchedule& schedule,
                         const LossOptions& opt) {
  array.validate();
  chain.validate();
  const SensorTable tab = sensor_table(array, chain, -1);
  const int win = chain.window();
  const double pref = array.per_sensor_rate();
  auto rate = [&](const RVec& p) {
    const RVec mean_w = tab.w.topRows(win).transpose() * p;
    const RVec mean_s = tab.s.topRows(win).transpose() * p;
    return pref * (mean_w - mean_s.cwiseAbs2()).sum();
  };
  return integrate_rate(array, chain, schedule, opt, rate);
}

LossResult coherence_loss(const QpcArray& array, const ChainSpec& chain, const PulseSchedule& schedule, int bystander,
                          const LossOptions& opt) {
  array.validate();
  chain.validate();
  if (bystander >= chain.from && bystander <= chain.to)
    throw ConfigError("bystander site must lie outside the transport window");
  if (bystander < 0) throw ConfigError("bystander site must be non-negative");
  const SensorTable tab = sensor_table(array, chain, bystander);
  const int win = chain.window();
  const double pref = array.per_sensor_rate();
  auto rate = [&](const RVec& p) {
    const RVec mean_w = tab.w.topRows(win).transpose() * p;
    const RVec mean_s = tab.s.topRows(win).transpose() * p;
    const RVec wk = tab.w.row(win).transpose();
    const RVec sk = tab.s.row(win).transpose();
    return pref * (0.5 * (wk + mean_w) - sk.cwiseProduct(mean_s)).sum();
  };
  return integrate_rate(array, chain, schedule, opt, rate);
}

LindbladCheck lindblad_cross_check(const QpcArray& array, const ChainSpec& chain, const PulseSchedule& schedule,
                                   double dt, const LossOptions& opt) {
  array.validate();
  chain.validate();
  if (array.locality != Locality::local) throw ConfigError("lindblad_cross_check requires local measurements");
  HamiltonianFn h = [&](double t) { return chain_hamiltonian(chain, schedule, t); };
  const auto jumps = qpc_jump_operators(array, chain.dots);
  const DensityOperator rho0 = DensityOperator::pure(StateVector::basis(chain.dots, chain.from));
  const auto traj = evolve_lindblad(h, jumps, rho0, {schedule.start, schedule.end}, {dt, 1 << 30});

  LindbladCheck c;
  c.fidelity_full = traj.final_state()(chain.to, chain.to).real();
  TransportOptions topt;
  topt.dt = dt;
  topt.record_every = 1 << 30;
  c.fidelity_closed = run_transport(chain, schedule, chain.from, topt).fidelity;
  c.loss_adiabatic = transfer_loss(array, chain, schedule, opt).value;
  c.fidelity_adiabatic = c.fidelity_closed - c.loss_adiabatic;
  c.loss_full = 1.0 - c.fidelity_full;
  const double ref = 1.0 - c.fidelity_adiabatic;
  c.relative_difference = ref > 0.0 ? std::abs(c.loss_full - ref) / ref : std::abs(c.loss_full);
  return c;
}

}  // namespace qmeas
