// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "qmeas/classical.hpp"
#include "qmeas/collision.hpp"
#include "qmeas/ctap.hpp"
#include "qmeas/decoherence.hpp"
#include "qmeas/oscillator.hpp"
#include "qmeas/povm.hpp"
#include "qmeas/qbm.hpp"
#include "qmeas/qpc.hpp"
#include "qmeas/rng.hpp"
#include "qmeas/tls.hpp"

using namespace qmeas;

namespace {

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    if (!ok) pass = false;
    detail << (detail.tellp() > 0 ? "; " : "") << what << (ok ? "" : " [x]");
  }
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

int failures = 0;

void criterion(const std::string& name, double budget_s, const std::function<void(Verdict&)>& body) {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(v);
  } catch (const std::exception& e) {
    v.check(false, std::string("threw: ") + e.what());
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  v.check(wall < budget_s, "runtime " + num(wall) + " s < " + num(budget_s) + " s");
  if (!v.pass) ++failures;
  std::printf("%s %s: %s\n", v.pass ? "PASS" : "FAIL", name.c_str(), v.detail.str().c_str());
  std::fflush(stdout);
}

bool within(double value, double target, double tol) { return std::abs(value - target) <= tol; }

int local_maxima(const std::vector<double>& y, double floor) {
  int n = 0;
  for (std::size_t i = 1; i + 1 < y.size(); ++i)
    if (y[i] > y[i - 1] && y[i] >= y[i + 1] && y[i] > floor) ++n;
  return n;
}

CatState cat_at(double xa, double pa, double xb, double pb, double W, double m) {
  CatState c;
  c.a = {xa, pa, W, m};
  c.b = {xb, pb, W, m};
  return c;
}

double mean(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); }

double std_error(const std::vector<double>& v) {
  const double mu = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - mu) * (x - mu);
  return std::sqrt(s / (v.size() - 1.0) / v.size());
}

}  // namespace

int main() {
  criterion("ctap_fidelity", 10.0, [](Verdict& v) {
    const ChainSpec chain{5, 1.0, 0, 4};
    TransportOptions opt;
    opt.dt = 0.01;
    opt.record_every = 1 << 30;
    const double f40 = run_transport(chain, PulseSchedule::delayed(40.0), 0, opt).fidelity;
    const double f60 = run_transport(chain, PulseSchedule::delayed(60.0), 0, opt).fidelity;
    v.check(within(f40, 0.973, 0.002), "T=40 fidelity " + num(f40) + " vs 0.973+-0.002");
    v.check(within(f60, 0.998, 0.002), "T=60 fidelity " + num(f60) + " vs 0.998+-0.002");
  });

  criterion("tls_fidelity", 30.0, [](Verdict& v) {
    // Block with the first fluctuator flipped: diagonal (-chi, chi, chi, chi, chi).
    const ChainSpec chain{5, 1.0, 0, 4};
    const PulseSchedule s = PulseSchedule::symmetric(150.0);
    auto run = [&](double chi) {
      TlsBath bath = TlsBath::uniform(5, chi);
      bath.inversions = {-1.0, 1.0, 1.0, 1.0, 1.0};
      TlsTransportOptions opt;
      opt.dt = 0.01;
      opt.record_every = 10;
      return transport_with_tls(chain, s, bath, StateVector::basis(5, 0), opt);
    };
    const auto r0 = run(0.0);
    const auto r15 = run(0.15);
    const auto r30 = run(0.3);
    const auto r45 = run(0.45);
    const double osc45 = fast_oscillation_amplitude(r45.times, r45.reduced, 10.0);
    const double osc30 = fast_oscillation_amplitude(r30.times, r30.reduced, 10.0);
    v.check(within(r0.fidelity, 0.9996, 0.0003), "chi=0 " + num(r0.fidelity) + " vs 0.9996+-0.0003");
    v.check(within(r15.fidelity, 0.975, 0.005), "chi=0.15 " + num(r15.fidelity) + " vs 0.975+-0.005");
    v.check(r45.fidelity < 0.1, "chi=0.45 " + num(r45.fidelity) + " < 0.1");
    v.check(osc45 < 0.01, "chi=0.45 oscillation " + num(osc45) + " < 0.01 (chi=0.3: " + num(osc30) + ")");
  });

  criterion("dephasing_rate_algebra", 5.0, [](Verdict& v) {
    double worst = 0.0;
    for (double ad : {0.5, 1.0, 2.0, 5.0}) {
      QpcArray q;
      q.d = 1.0;
      q.a = ad;
      q.alpha = 1e-3 * ad;
      q.rate = 1.0;
      q.site_cutoff = 200000;
      const long sep = std::lround(40.0 * ad);
      const double D = dephasing_rate(q, 0, sep);
      const double sat = pi * q.rate * q.alpha * q.alpha / (4.0 * q.d * q.d) / std::tanh(pi * ad) / ad;
      worst = std::max(worst, std::abs(D / sat - 1.0));
    }
    v.check(worst <= 0.02, "saturation at 40(a/d): worst relative deviation " + num(worst) + " <= 0.02");
    double local = 0.0;
    for (double alpha : {0.01, 0.04, 0.2}) {
      QpcArray q;
      q.locality = Locality::local;
      q.alpha = alpha;
      q.rate = 7.0;
      q.n_qpc = 7;
      const double expect = q.rate / q.n_qpc * (2.0 + alpha - 2.0 * std::sqrt(1.0 + alpha));
      local = std::max(local, std::abs(dephasing_rate(q, 2, 5) - expect));
    }
    v.check(local <= 1e-12, "local limit deviation " + num(local) + " <= 1e-12");
  });

  criterion("qpc_transport_loss", 120.0, [](Verdict& v) {
    QpcArray q;
    q.locality = Locality::local;
    q.alpha = 0.04;
    q.rate = 1.0;  // R = N
    auto loss = [&](int dots, double T) {
      return transfer_loss(q, {dots, 1.0, 0, dots - 1}, PulseSchedule::symmetric(T)).value;
    };
    const double l11 = loss(11, 249.0);
    const double l3 = loss(3, 150.0);
    v.check(std::abs(l11 / 11e-3 - 1.0) <= 0.15, "11 dots " + num(l11) + " vs 11e-3 within 15%");
    v.check(std::abs(l3 / 4e-3 - 1.0) <= 0.15, "3 dots " + num(l3) + " vs 4e-3 within 15%");
    const LindbladCheck c = lindblad_cross_check(q, {5, 1.0, 0, 4}, PulseSchedule::symmetric(196.0), 0.02);
    v.check(c.relative_difference <= 0.10, "5 dots full loss " + num(c.loss_full) + " vs adiabatic " +
                                               num(1.0 - c.fidelity_adiabatic) + ", relative " +
                                               num(c.relative_difference) + " <= 0.1");
  });

  criterion("collision_engine", 60.0, [](Verdict& v) {
    Rng rng = task_stream(7, 0);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    double centre = 0.0;
    for (int i = 0; i < 200; ++i) {
      const double alpha = std::exp(u(rng));
      const CollisionInput in{{u(rng) + 5.0, u(rng), 2.0, 1.5}, {u(rng) - 5.0, u(rng), 2.0 / std::sqrt(alpha), 1.5 * alpha}};
      const ScatterResult s = scatter(in);
      const CollisionOutcome c = collide(in.brownian.p, in.gas.p, in.brownian.mass, in.gas.mass);
      centre = std::max({centre, std::abs(s.brownian.p - c.p), std::abs(s.gas.p - c.p_g)});
    }
    v.check(centre <= 1e-12, "scatter vs classical momenta " + num(centre) + " <= 1e-12");

    double dc = 0.0, dphi = 0.0;
    for (int i = 0; i < 200; ++i) {
      const double alpha = std::exp(0.5 * u(rng));
      const double W = 1.0 + std::abs(u(rng));
      CatState cat = cat_at(u(rng) + 4.0, u(rng), u(rng) + 4.0, u(rng), W, 1.0);
      cat.c = 0.8;
      cat.phi = u(rng);
      const GaussianLabel gas = matched_gas(u(rng) - 6.0, u(rng), cat, alpha);
      const CatState a = collide_cat(cat, gas);
      const CatState b = collide_cat_params(cat, gas);
      dc = std::max(dc, std::abs(a.c - b.c));
      dphi = std::max(dphi, std::abs(std::remainder(a.phi - b.phi, 2.0 * pi)));
    }
    v.check(dc <= 1e-10 && dphi <= 1e-10, "gas-overlap vs closed form: c " + num(dc) + ", phi " + num(dphi));

    const CollisionInput in = com_frame(10.0, -2.0, 1.0, 0.3, 4.0);
    const UniformAxis xs{-20.0, 20.0, 500};
    std::vector<double> pos;
    double peak = 0.0;
    for (int i = 0; i < xs.n; ++i) {
      pos.push_back(in_collision_position_density(in, 5.0, xs.at(i)));
      peak = std::max(peak, pos.back());
    }
    const int pos_modes = local_maxima(pos, 1e-3 * peak);
    v.check(pos_modes == 1, "position density modes " + std::to_string(pos_modes));

    const UniformAxis ps{-4.0, 4.0, 161};
    const RVec pd = in_collision_momentum_density(in, 5.0, xs, {-40.0, 40.0, 500}, ps);
    std::vector<double> mom(pd.data(), pd.data() + pd.size());
    const int mid = ps.n / 2;  // p = 0
    const int left = static_cast<int>(std::max_element(mom.begin(), mom.begin() + mid) - mom.begin());
    const int right = static_cast<int>(std::max_element(mom.begin() + mid + 1, mom.end()) - mom.begin());
    double dip = mom[left];
    for (int j = left; j <= right; ++j) dip = std::min(dip, mom[j]);
    const double ratio = dip / std::min(mom[left], mom[right]);
    v.check(ratio < 0.1, "momentum peaks at " + num(ps.at(left)) + ", " + num(ps.at(right)) + ", dip ratio " +
                             num(ratio) + " < 0.1");
  });

  criterion("povm_suite", 60.0, [](Verdict& v) {
    Rng rng = task_stream(11, 0);
    std::uniform_real_distribution<double> u(-2.0, 2.0);

    double completeness = 0.0;
    for (double nbar : {0.0, 0.3, 2.0}) {
      PovmSpec spec;
      spec.W = 1.5;
      spec.nbar = nbar;
      const GaussianLabel state{u(rng), u(rng), 1.5, 1.0};
      const Uncertainties d = measurement_uncertainties(spec);
      const int n = 401;
      const double hx = 24.0 * d.dx / (n - 1), hp = 24.0 * d.dp / (n - 1);
      double s = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          s += effect_probability(spec, state.x - 12.0 * d.dx + i * hx, state.p - 12.0 * d.dp + j * hp, state);
      completeness = std::max(completeness, std::abs(s * hx * hp - 1.0));
    }
    v.check(completeness <= 1e-6, "effect completeness " + num(completeness) + " <= 1e-6");

    double kraus = 0.0;
    for (int i = 0; i < 500; ++i) {
      const double alpha = std::exp(u(rng));
      const double W = 1.0 + std::abs(u(rng));
      const GaussianLabel state{u(rng), u(rng), W, 1.0};
      const double xt = state.x + u(rng), pt = state.p + u(rng) / W;
      const LabelAmplitude b = kraus_B_apply(alpha, u(rng), u(rng), xt, pt, state);
      const double e = effect_probability(PovmSpec::from_collision(W, alpha), xt, pt, state);
      kraus = std::max(kraus, std::abs(std::norm(b.amplitude) - e));
    }
    v.check(kraus <= 1e-8, "Kraus-effect consistency " + num(kraus) + " <= 1e-8");

    double label = 0.0, coh = 0.0;
    for (int i = 0; i < 100; ++i) {
      const double alpha = std::exp(u(rng));
      const double W = 1.0 + std::abs(u(rng));
      CatState cat = cat_at(u(rng) + 3.0, u(rng), u(rng) + 3.0, u(rng), W, 1.0);
      cat.c = 0.6;
      cat.phi = u(rng);
      const GaussianLabel gas = matched_gas(u(rng) - 3.0, u(rng), cat, alpha);
      const CatState nr = non_readout_transform(cat, gas);
      const ScatterResult sa = scatter({cat.a, gas});
      const ScatterResult sb = scatter({cat.b, gas});
      label = std::max({label, std::abs(nr.a.x - sa.brownian.x), std::abs(nr.a.p - sa.brownian.p),
                        std::abs(nr.b.x - sb.brownian.x), std::abs(nr.b.p - sb.brownian.p)});
      const CatState cc = collide_cat(cat, gas);
      coh = std::max({coh, std::abs(nr.c - cc.c), std::abs(std::remainder(nr.phi - cc.phi, 2.0 * pi))});
    }
    v.check(label <= 1e-9 && coh <= 1e-9,
            "non-readout vs scatter: labels " + num(label) + ", coherence " + num(coh) + " <= 1e-9");

    const Oscillator osc(60, 1.3);
    CMat O = osc.thermal(0.4);
    O(0, 1) += 0.1;
    O(1, 0) += 0.1;
    const double ident = displacement_identity_residual(osc, O, {0.0, cplx(0.3, -0.2), cplx(-0.5, 0.4)});
    v.check(ident <= 1e-6, "displacement identities on 60 levels " + num(ident) + " <= 1e-6");
  });

  criterion("qbm_vs_classical", 300.0, [](Verdict& v) {
    GasModel gas;
    gas.T = 1.0;
    gas.m_g = 0.01;
    gas.n_g = std::sqrt(pi) / (4.0 * std::sqrt(2.0 * gas.m_g * gas.T));  // gamma = 1
    const double m = 1.0;
    const std::vector<double> times{0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0};
    EnsembleOptions eo;
    eo.trajectories = 100000;
    eo.seed = 2024;
    const EnsembleMoments mc = ensemble_moments(gas, {0.0, 2.0, m}, times, eo);
    MomentVector start;
    start.p = 2.0;
    start.pp = 4.0;
    QbmOptions qo;
    qo.model = QbmModel::exact;
    const MomentSeries ode = evolve_moments(start, gas, m, times, qo);
    double worst = 0.0;
    std::string where;
    for (std::size_t i = 1; i < times.size(); ++i) {
      const MomentVector& a = mc.mean[i];
      const MomentVector& s = mc.std_error[i];
      const MomentVector& b = ode.moments[i];
      const double z[5] = {(a.x - b.x) / s.x, (a.p - b.p) / s.p, (a.xx - b.xx) / s.xx, (a.pp - b.pp) / s.pp,
                           (a.xp - b.xp) / s.xp};
      const char* names[5] = {"x", "p", "xx", "pp", "xp"};
      for (int k = 0; k < 5; ++k)
        if (std::abs(z[k]) > worst) {
          worst = std::abs(z[k]);
          where = std::string(names[k]) + " at t=" + num(times[i]);
        }
    }
    v.check(worst <= 2.0, "moments vs 1e5 trajectories: worst " + num(worst) + " SE (" + where + ") <= 2");

    double steady = 0.0;
    for (double alpha : {0.01, 0.1}) {
      GasModel g = gas;
      g.m_g = alpha * m;
      g.n_g = std::sqrt(pi) / (4.0 * std::sqrt(2.0 * g.m_g * g.T));
      QbmOptions o = qo;
      o.dt = 5e-3;
      const std::vector<double> t{0.0, 30.0};
      const MomentSeries s = evolve_moments(start, g, m, t, o);
      steady = std::max(steady, std::abs(s.moments.back().pp / (m * g.T) - 1.0));
    }
    v.check(steady <= 0.01, "steady <p^2>/mT deviation " + num(steady) + " <= 0.01");

    double heat = 0.0;
    for (double alpha : {0.3, 1.0}) {
      GasModel g = gas;
      g.m_g = alpha * m;
      heat = std::max(heat, std::abs(thermal_heating_average(g, m)));
    }
    v.check(heat <= 1e-6, "thermal average of h_T " + num(heat) + " <= 1e-6");
  });

  criterion("position_diffusion", 10.0, [](Verdict& v) {
    GasModel gas;
    gas.T = 1.0;
    gas.m_g = 0.01;
    gas.n_g = 3.0;
    gas.delta = 0.01;
    const double m = 1.0;
    const MomentVector rest;
    double shape = 0.0;
    for (double t : {0.005, 0.01, 0.02, 0.03, 0.05}) {
      const double xx = analytic_moments(rest, gas, m, t, true).xx;
      shape = std::max(shape, std::abs(xx / short_time_position_spread(gas, m, t, true) - 1.0));
    }
    v.check(shape <= 0.05, "short-time <x^2> vs (4t^3 + t delta^2) law " + num(shape) + " <= 0.05");

    QbmOptions on;
    on.delta_term = true;
    on.dt = 1e-5;
    QbmOptions off = on;
    off.delta_term = false;
    std::vector<double> times{0.0};
    for (double k : {3.0, 5.0, 10.0, 30.0}) times.push_back(k * gas.delta);
    const MomentSeries a = evolve_moments(rest, gas, m, times, on);
    const MomentSeries b = evolve_moments(rest, gas, m, times, off);
    double share = 0.0;
    for (std::size_t i = 1; i < times.size(); ++i)
      share = std::max(share, (a.moments[i].xx - b.moments[i].xx) / a.moments[i].xx);
    v.check(share < 0.05, "delta-term share of <x^2> for t >= 3 delta " + num(share) + " < 0.05");
  });

  criterion("lindblad_inequality", 1.0, [](Verdict& v) {
    GasModel gas;
    gas.T = 1.0;
    gas.m_g = 0.01;
    gas.n_g = 1.0;
    gas.delta = 10.0 * hbar / gas.T;
    const StandardForm bare = standard_form_coeffs(gas, 1.0, false);
    const StandardForm kept = standard_form_coeffs(gas, 1.0, true);
    v.check(bare.D_xx == 0.0 && !bare.lindblad_ok, "D_xx = 0 fails the inequality");
    v.check(kept.lindblad_ok, "delta = 10 hbar/T: D_xx D_pp = " + num(kept.D_xx * kept.D_pp) + " >= (hbar gamma/4)^2 = " +
                                  num(std::pow(hbar * kept.gamma / 4.0, 2)));
  });

  criterion("wigner_decoherence", 120.0, [](Verdict& v) {
    const double alpha = 1e-4, m = 1.0, m_g = alpha * m;

    // Position cat: per-collision decoherence linear in T.
    const CatState pos = cat_at(20.0, 0.0, -20.0, 0.0, 4.0, m);
    const double x_D = pos.x_separation();
    const std::vector<double> Ts{0.05, 0.1, 0.15, 0.2};
    std::vector<std::vector<double>> r;
    for (double T : Ts) {
      DecoherenceRun run;
      run.T = T;
      run.alpha = alpha;
      run.t_window = 20.0;
      run.samples = 200;
      run.seed = 5;
      r.push_back(mc_decoherence(pos, run).ratios);
    }
    double tt = 0.0;
    for (double T : Ts) tt += T * T;
    std::vector<double> slopes(200, 0.0);
    for (std::size_t i = 0; i < 200; ++i)
      for (std::size_t k = 0; k < Ts.size(); ++k) slopes[i] += Ts[k] * (1.0 - r[k][i]) / tt;
    const double slope = mean(slopes), slope_se = std_error(slopes);
    const double law = position_decoherence_small(x_D, 1.0, m_g);
    v.check(std::abs(slope - law) <= 0.05 * law + 2.0 * slope_se,
            "position slope " + num(slope) + " +- " + num(slope_se) + " vs " + num(law));

    // Momentum cat: excess decoherence quadratic in the window.
    const CatState mom = cat_at(0.0, 1.2, 0.0, -1.2, 4.0, m);
    const double p_D = mom.p_separation();
    DecoherenceRun run;
    run.T = 0.5;
    run.alpha = alpha;
    run.samples = 200;
    run.seed = 6;
    run.t_window = 0.0;
    const double base = mean(mc_decoherence(mom, run).ratios);
    const std::vector<double> ts{2.5, 5.0, 7.5, 10.0};
    double t4 = 0.0;
    for (double t : ts) t4 += std::pow(t, 4);
    std::vector<double> quad(200, 0.0);
    for (double t : ts) {
      run.t_window = t;
      const auto rt = mc_decoherence(mom, run).ratios;
      for (std::size_t i = 0; i < 200; ++i) quad[i] += t * t * (1.0 - rt[i] / base) / t4;
    }
    const double k = mean(quad), k_se = std_error(quad);
    const double klaw = momentum_decoherence_small(p_D, 0.5, m_g, m, 1.0);
    v.check(std::abs(k - klaw) <= 0.05 * klaw + 2.0 * k_se,
            "momentum t^2 coefficient " + num(k) + " +- " + num(k_se) + " vs " + num(klaw));

    // Hot position cat: more than complete decoherence, fringes flipped.
    DecoherenceRun hot;
    hot.T = 7.0;
    hot.alpha = alpha;
    hot.t_window = 20.0;
    hot.samples = 200;
    hot.seed = 8;
    const DecoherenceResult h0 = mc_decoherence(pos, hot);
    hot.p_ref = pi * hbar / x_D;
    const DecoherenceResult h1 = mc_decoherence(pos, hot);
    const double expect = position_decoherence_general(x_D, 7.0, m_g);
    v.check(h0.decoherence - 2.0 * h0.std_error > 1.0,
            "T=7 decoherence " + num(h0.decoherence) + " +- " + num(h0.std_error) + " > 1 (law " + num(expect) + ")");
    v.check(h0.before > 0 && h0.after < 0 && h1.before < 0 && h1.after > 0,
            "fringe signs flipped at p=0 and p=pi hbar/x_D");
  });

  criterion("time_slicing_identity", 1.0, [](Verdict& v) {
    double worst = 0.0;
    for (double p_D : {0.3, 2.4, 7.0})
      for (double T : {0.1, 0.5, 3.0})
        for (double t : {1.0, 10.0, 50.0}) {
          const double a = momentum_decoherence_time_sliced(p_D, T, 1e-4, 1.0, t);
          const double b = momentum_decoherence(p_D, T, 1e-4, 1.0, t);
          worst = std::max(worst, std::abs(a - b));
        }
    v.check(worst <= 1e-10, "time-sliced position law vs momentum law " + num(worst) + " <= 1e-10");
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
