#include "qmeas/decoherence.hpp"

#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "qmeas/collision.hpp"

namespace qmeas {

GaussianLabel matched_gas(double x_g, double p_g, const CatState& cat, double alpha) {
  if (!(alpha > 0.0)) throw ConfigError("mass ratio alpha must be positive");
  return {x_g, p_g, cat.a.width / std::sqrt(alpha), alpha * cat.a.mass};
}

CatState collide_cat_params(const CatState& cat, const GaussianLabel& gas) {
  cat.validate();
  const CollisionInput ia{cat.a, gas};
  if (!validity(ia).matched_widths) throw ConfigError("collide_cat_params: cat and gas widths are not matched");
  const double a = ia.alpha();
  const double W = cat.a.width;
  const double xA = cat.x_center(), pA = cat.p_center(), xD = cat.x_separation(), pD = cat.p_separation();
  CatState out = cat;
  out.a = scatter(ia).brownian;
  out.b = scatter({cat.b, gas}).brownian;
  const double s = (1.0 + a) * (1.0 + a);
  out.c = cat.c * std::exp(-a / s * (xD * xD / (W * W) + W * W * pD * pD / (hbar * hbar)));
  const double dphi = (2.0 * a * (xA * pD - xD * pA) + (1.0 - a) * gas.p * xD - a * (1.0 - a) * gas.x * pD) / (s * hbar);
  out.phi = std::remainder(cat.phi + dphi, 2.0 * pi);
  return out;
}

GasSample colliding_gas_from_uniforms(double T, double m_g, double t_window, double u1, double u2) {
  if (!(T > 0.0 && m_g > 0.0)) throw ConfigError("T and m_g must be positive");
  if (!(t_window >= 0.0)) throw ConfigError("time window must be non-negative");
  const double s = 2.0 * m_g * T;
  const double p_g = u1 < 0.5 ? -std::sqrt(-s * std::log(2.0 * u1)) : std::sqrt(-s * std::log(2.0 * (1.0 - u1)));
  return {-u2 * p_g * t_window / m_g, p_g};
}

GasSample sample_colliding_gas(double T, double m_g, double t_window, Rng& rng) {
  const double u1 = uniform_open(rng);
  const double u2 = uniform_open(rng);
  return colliding_gas_from_uniforms(T, m_g, t_window, u1, u2);
}

double colliding_momentum_density(double p_g, double T, double m_g) {
  const double s = 2.0 * m_g * T;
  return std::abs(p_g) / s * std::exp(-p_g * p_g / s);
}

DecoherenceResult mc_decoherence(const CatState& cat, const DecoherenceRun& run) {
  cat.validate();
  if (run.samples < 1) throw ConfigError("need at least one sample");
  if (!(run.T > 0.0)) throw ConfigError("temperature T must be positive");
  const double m_g = run.alpha * cat.a.mass;
  DecoherenceResult res;
  res.before = wigner_interference_at(cat, run.x_ref, run.p_ref);
  if (std::abs(res.before) < 1e-300) throw NumericError("interference term vanishes at the reference point");
  const bool grid = run.grid_x && run.grid_p;
  if (grid) {
    PhaseSpaceGrid g = wigner_cat(cat, *run.grid_x, *run.grid_p, false);
    g.values.setZero();
    res.averaged = std::move(g);
  }
  res.ratios.reserve(static_cast<std::size_t>(run.samples));
  for (int i = 0; i < run.samples; ++i) {
    GasSample s{0.0, 0.0};
    if (run.forced_p_g) {
      s.p_g = *run.forced_p_g;
    } else {
      Rng rng = task_stream(run.seed, static_cast<std::uint64_t>(i));
      s = sample_colliding_gas(run.T, m_g, run.t_window, rng);
    }
    const CatState after = collide_cat_params(cat, matched_gas(s.x_g, s.p_g, cat, run.alpha));
    res.ratios.push_back(wigner_interference_at(after, run.x_ref, run.p_ref) / res.before);
    if (grid) {
      PhaseSpaceGrid& avg = *res.averaged;
      for (int ix = 0; ix < avg.x.n; ++ix)
        for (int ip = 0; ip < avg.p.n; ++ip)
          avg.values(ix, ip) += wigner_cat_at(after, avg.x.at(ix), avg.p.at(ip), false) / run.samples;
    }
  }
  double sum = 0.0, sq = 0.0;
  for (double r : res.ratios) {
    sum += r;
    sq += r * r;
  }
  const double n = static_cast<double>(res.ratios.size());
  const double mean = sum / n;
  res.after = mean * res.before;
  res.decoherence = 1.0 - mean;
  res.std_error = n > 1 ? std::sqrt(std::max(0.0, (sq / n - mean * mean) * n / (n - 1.0)) / n) : 0.0;
  return res;
}

double dawson(double x) {
  const double ax = std::abs(x);
  if (ax <= 6.0) {
    // x exp(-x^2) sum x^2k/(k!(2k+1)); all terms positive.
    const double y = x * x;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 200; ++k) {
      term *= y / k;
      const double add = term / (2 * k + 1);
      sum += add;
      if (add < 1e-17 * sum) break;
    }
    return x * std::exp(-y) * sum;
  }
  // Asymptotic series, stopped at the smallest term.
  const double y = 1.0 / (2.0 * x * x);
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 100; ++k) {
    const double next = term * (2 * k - 1) * y;
    if (next >= term) break;
    term = next;
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum / (2.0 * x);
}

double position_decoherence_small(double x_D, double T, double m_g) {
  return 4.0 * m_g * T * x_D * x_D / (hbar * hbar);
}

double position_decoherence_general(double x_D, double T, double m_g) {
  const double a = 2.0 * std::abs(x_D) * std::sqrt(2.0 * m_g * T) / hbar;
  return a * dawson(0.5 * a);
}

double position_decoherence_quadrature(double x_D, double T, double m_g) {
  using boost::math::quadrature::gauss_kronrod;
  const double a = 2.0 * std::abs(x_D) * std::sqrt(2.0 * m_g * T) / hbar;
  if (a == 0.0) return 0.0;
  auto f = [a](double u) { return std::exp(-u * u) * std::sin(a * u); };
  double sum = 0.0;
  // Integrate panel by panel up to where exp(-u^2) is below rounding.
  const double panel = std::min(1.0, pi / a);
  for (double lo = 0.0; lo < 9.0; lo += panel) sum += gauss_kronrod<double, 31>::integrate(f, lo, lo + panel, 10, 1e-15);
  return a * sum;
}

namespace {

double momentum_b(double p_D, double T, double m_g, double m, double t) {
  return 2.0 * t * std::sqrt(2.0 * m_g * T) * std::abs(p_D) / (m * hbar);
}

}  // namespace

double momentum_decoherence(double p_D, double T, double m_g, double m, double t) {
  const double b = momentum_b(p_D, T, m_g, m, t);
  if (b == 0.0) return 0.0;
  return 1.0 - 2.0 / b * dawson(0.5 * b);
}

double momentum_decoherence_small(double p_D, double T, double m_g, double m, double t) {
  return 4.0 * m_g * T * t * t * p_D * p_D / (3.0 * m * m * hbar * hbar);
}

double momentum_decoherence_time_sliced(double p_D, double T, double m_g, double m, double t) {
  using boost::math::quadrature::gauss_kronrod;
  if (!(t > 0.0)) return 0.0;
  auto f = [&](double s) { return position_decoherence_general(s * t * p_D / m, T, m_g); };
  return gauss_kronrod<double, 61>::integrate(f, 0.0, 1.0, 8, 1e-13);
}

double position_decoherence_rate(const GasModel& gas, double x_D, bool general) {
  gas.validate();
  const double r0 = gas.n_g * std::sqrt(2.0 * gas.T / (pi * gas.m_g));
  return r0 * (general ? position_decoherence_general(x_D, gas.T, gas.m_g)
                       : position_decoherence_small(x_D, gas.T, gas.m_g));
}

}  // namespace qmeas
