#include "qmeas/qbm.hpp"

#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/erf.hpp>

#include "qmeas/gaussian.hpp"

namespace qmeas {

namespace {

// int_0^a exp(-x^2/(2 s2)) dx and int_0^a x^2 exp(-x^2/(2 s2)) dx.
struct PartialGaussian {
  double i0, i2;
};

PartialGaussian partial_gaussian(double a, double s2) {
  const double s = std::sqrt(s2);
  const double i0 = s * std::sqrt(pi / 2.0) * boost::math::erf(a / (s * std::sqrt(2.0)));
  return {i0, s2 * (i0 - a * std::exp(-a * a / (2.0 * s2)))};
}

}  // namespace

double friction_fT(double p, const GasModel& gas, double m) {
  gas.validate();
  const double a = gas.alpha(m), mg = gas.m_g, T = gas.T;
  const auto [i0, i2] = partial_gaussian(a * p, mg * T);
  const double pre = 4.0 * mg / (1.0 + a) * gas.n_g / std::sqrt(2.0 * pi * mg * T);
  return pre * (2.0 * p * T / m * std::exp(-a * p * p / (2.0 * m * T)) + p * p / (m * m) * i0 + i2 / (mg * mg));
}

double heating_hT(double p, const GasModel& gas, double m) {
  gas.validate();
  const double a = gas.alpha(m), mg = gas.m_g, T = gas.T;
  const auto [i0, i2] = partial_gaussian(a * p, mg * T);
  const double pre = 8.0 * gas.n_g / ((1.0 + a) * (1.0 + a) * mg * std::sqrt(2.0 * pi * mg * T));
  const double e = std::exp(-a * p * p / (2.0 * m * T));
  return pre * (e * (2.0 * a * (1.0 - a) * mg * T * p * p - 2.0 * mg * T * mg * T) + a * a * p * p * p * i0 +
                (1.0 - 2.0 * a) * p * i2);
}

double position_diffusion_gT(double p, const GasModel& gas, double m) {
  const double a = gas.alpha(m);
  // n_g E|v_g - v|^3 from the kick moments: K2 = n_g (2 m_g/(1+alpha))^2 E|w|^3.
  const double c = 2.0 * gas.m_g / (1.0 + a);
  return a * a / (3.0 * (1.0 + a) * (1.0 + a)) * kick_second_moment(gas, m, p) / (c * c);
}

double position_diffusion_gT_quadrature(double p, const GasModel& gas, double m) {
  using boost::math::quadrature::gauss_kronrod;
  gas.validate();
  const double a = gas.alpha(m), mg = gas.m_g, T = gas.T;
  const double s = std::sqrt(mg * T);
  const double v = p / m;
  auto f = [&](double pg) {
    const double w = std::abs(v - pg / mg);
    return gas.n_g * std::exp(-pg * pg / (2.0 * s * s)) / (std::sqrt(2.0 * pi) * s) * w * w * w;
  };
  // Split at the kink p_g = m_g v.
  const double kink = mg * v;
  const double lo = std::min(kink, 0.0) - 40.0 * s, hi = std::max(kink, 0.0) + 40.0 * s;
  const double val = gauss_kronrod<double, 61>::integrate(f, lo, kink, 20, 1e-13) +
                     gauss_kronrod<double, 61>::integrate(f, kink, hi, 20, 1e-13);
  return a * a / (3.0 * (1.0 + a) * (1.0 + a)) * val;
}

double friction_fast_limit(double p, const GasModel& gas, double m) {
  const double a = gas.alpha(m);
  const double sgn = p > 0.0 ? 1.0 : (p < 0.0 ? -1.0 : 0.0);
  return 2.0 * gas.n_g * gas.m_g / (1.0 + a) * (p * std::abs(p) / (m * m) + gas.T * sgn / gas.m_g);
}

double thermal_heating_average(const GasModel& gas, double m) {
  using boost::math::quadrature::gauss_kronrod;
  gas.validate();
  const double s = std::sqrt(m * gas.T);
  auto f = [&](double p) { return std::exp(-p * p / (2.0 * s * s)) / (std::sqrt(2.0 * pi) * s) * heating_hT(p, gas, m); };
  const double avg = gauss_kronrod<double, 61>::integrate(f, -14.0 * s, 14.0 * s, 20, 1e-14);
  return avg / std::abs(heating_hT(0.0, gas, m));
}

CollisionTerms qbm_terms(const GasModel& gas, double m, const QbmOptions& opt) {
  gas.validate();
  CollisionTerms t;
  if (opt.model == QbmModel::linear) {
    const Kramers k = kramers(gas, m);
    t.kick = [k](double p) { return -k.gamma * p; };
    t.momentum_square = [k](double p) { return 2.0 * k.diffusion - 2.0 * k.gamma * p * p; };
    const double a = gas.alpha(m);
    const double src = opt.delta_term ? gas.delta * gas.delta * a * a * gas.n_g / (3.0 * std::sqrt(pi)) *
                                            std::pow(2.0 * gas.T / gas.m_g, 1.5)
                                      : 0.0;
    t.position_square = [src](double) { return src; };
  } else {
    t.kick = [gas, m](double p) { return -friction_fT(p, gas, m); };
    t.momentum_square = [gas, m](double p) { return -heating_hT(p, gas, m); };
    if (opt.delta_term) {
      const double d2 = gas.delta * gas.delta;
      t.position_square = [gas, m, d2](double p) { return d2 * position_diffusion_gT(p, gas, m); };
    } else {
      t.position_square = [](double) { return 0.0; };
    }
  }
  return t;
}

MomentSeries evolve_moments(const MomentVector& start, const GasModel& gas, double m, std::span<const double> times,
                            const QbmOptions& opt) {
  return integrate_moments(qbm_terms(gas, m, opt), m, start, times, opt.dt);
}

MomentVector analytic_moments(const MomentVector& s, const GasModel& gas, double m, double t, bool delta_term) {
  const double g = kramers(gas, m).gamma;
  const double T = gas.T;
  const double a = gas.alpha(m);
  const double e1 = std::exp(-g * t), e2 = std::exp(-2.0 * g * t);
  const double anti0 = 2.0 * s.xp;
  const double src =
      delta_term ? gas.delta * gas.delta * a * a * gas.n_g / (3.0 * std::sqrt(pi)) * std::pow(2.0 * T / gas.m_g, 1.5)
                 : 0.0;
  MomentVector r;
  r.p = e1 * s.p;
  r.x = s.x + (1.0 - e1) * s.p / (m * g);
  r.pp = m * T * (1.0 - e2) + e2 * s.pp;
  const double anti = 2.0 * T / g * (1.0 - e1) * (1.0 - e1) + 2.0 * s.pp / (m * g) * (e1 - e2) + anti0 * e1;
  r.xp = 0.5 * anti;
  r.xx = s.xx + anti0 * (1.0 - e1) / (m * g) + s.pp * (1.0 - e1) * (1.0 - e1) / (m * g * m * g) -
         T / (m * g * g) * (3.0 - 4.0 * e1 + e2) + t * (2.0 * T / (m * g) + src);
  return r;
}

double short_time_position_spread(const GasModel& gas, double m, double t, bool delta_term) {
  gas.validate();
  const double d2 = delta_term ? gas.delta * gas.delta : 0.0;
  return gas.n_g * std::sqrt(gas.m_g) * std::pow(2.0 * gas.T, 1.5) / (3.0 * std::sqrt(pi) * m * m) *
         (4.0 * t * t * t + t * d2);
}

double growth_exponent(const MomentVector& start, const GasModel& gas, double m, double t_lo, double t_hi, int points,
                       bool delta_term) {
  if (!(t_lo > 0.0 && t_hi > t_lo) || points < 2) throw ConfigError("growth_exponent needs 0 < t_lo < t_hi, points >= 2");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < points; ++i) {
    const double t = t_lo * std::pow(t_hi / t_lo, static_cast<double>(i) / (points - 1));
    const double dx2 = analytic_moments(start, gas, m, t, delta_term).xx - start.xx;
    if (!(dx2 > 0.0)) throw NumericError("position spread did not grow");
    const double lx = std::log(t), ly = std::log(dx2);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (points * sxy - sx * sy) / (points * sxx - sx * sx);
}

StandardForm standard_form_coeffs(const GasModel& gas, double m, bool keep_delta_term) {
  const Kramers k = kramers(gas, m);
  StandardForm f;
  f.gamma = k.gamma;
  f.D_pp = k.diffusion;
  f.D_xx = keep_delta_term ? gas.n_g / (6.0 * std::sqrt(pi)) * std::pow(2.0 * gas.T / gas.m_g, 1.5) * gas.delta * gas.delta
                           : 0.0;
  const double bound = hbar * f.gamma / 4.0;
  f.lindblad_ok = f.D_xx * f.D_pp >= bound * bound;
  return f;
}

}  // namespace qmeas
