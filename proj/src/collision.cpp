#include "qmeas/collision.hpp"

#include <cmath>
#include <functional>
#include <limits>

#include <boost/math/special_functions/erf.hpp>

namespace qmeas {

void CollisionInput::validate() const {
  for (const GaussianLabel* l : {&brownian, &gas}) {
    if (!(l->width > 0.0)) throw ConfigError("packet width must be positive");
    if (!(l->mass > 0.0)) throw ConfigError("packet mass must be positive");
    if (!std::isfinite(l->x) || !std::isfinite(l->p)) throw ConfigError("packet centre must be finite");
  }
}

CollisionInput com_frame(double x, double p, double m, double alpha, double W) {
  if (!(alpha > 0.0)) throw ConfigError("mass ratio alpha must be positive");
  CollisionInput in{{x, p, W, m}, {-x / alpha, -p, W / std::sqrt(alpha), alpha * m}};
  in.validate();
  return in;
}

ValidityReport validity(const CollisionInput& in) {
  in.validate();
  const GaussianLabel& b = in.brownian;
  const GaussianLabel& g = in.gas;
  const double a = in.alpha();
  ValidityReport r;
  const double spread = std::sqrt(g.width * g.width + b.width * b.width);
  r.overlap_ok = std::abs(g.x - b.x) >= 5.0 * spread;
  r.momentum_ok = std::abs(a * b.p - g.p) >= 5.0 * std::sqrt(1.0 + a) * hbar / g.width;
  const double mw = b.mass * b.width * b.width;
  r.matched_widths = std::abs(mw - g.mass * g.width * g.width) <= 1e-9 * mw;
  const double dv = std::abs(b.velocity() - g.velocity());
  if (dv == 0.0) {
    r.t_c = std::numeric_limits<double>::infinity();
    r.momentum_ok = false;
  } else {
    r.t_c = 2.0 * spread / dv;
  }
  return r;
}

ScatterResult scatter(const CollisionInput& in) {
  ScatterResult r;
  r.report = validity(in);
  const GaussianLabel& b = in.brownian;
  const GaussianLabel& g = in.gas;
  const double a = in.alpha();
  r.gas = {(2.0 * b.x - (1.0 - a) * g.x) / (1.0 + a), (2.0 * a * b.p - (1.0 - a) * g.p) / (1.0 + a), g.width, g.mass};
  r.brownian = {(2.0 * a * g.x + (1.0 - a) * b.x) / (1.0 + a), (2.0 * g.p + (1.0 - a) * b.p) / (1.0 + a), b.width,
                b.mass};
  return r;
}

double entanglement_coefficient(double W, double W_g, double m, double m_g) {
  if (!(W > 0.0 && W_g > 0.0 && m > 0.0 && m_g > 0.0)) throw ConfigError("widths and masses must be positive");
  const double a = m_g / m;
  return -4.0 * (1.0 - a) * (W * W - a * W_g * W_g) / (2.0 * (1.0 + a) * (1.0 + a) * hbar * hbar);
}

cplx free_wavefunction(const GaussianLabel& l, double t, double xprime) {
  const cplx s = 1.0 + I * hbar * t / (l.mass * l.width * l.width);
  const double y = xprime - l.x - l.p * t / l.mass;
  return std::pow(pi * l.width * l.width, -0.25) / std::sqrt(s) * std::exp(-y * y / (2.0 * l.width * l.width * s)) *
         std::exp(I * (l.p * (xprime - 0.5 * l.x) - l.p * l.p * t / (2.0 * l.mass)) / hbar);
}

namespace {

struct Reflected {
  double xg, x;
};

// Mirror in mass-weighted coordinates; leaves the contact line x_g = x fixed.
Reflected reflect(double a, double xg, double x) {
  const double xg2 = (2.0 * x - (1.0 - a) * xg) / (1.0 + a);
  return {xg2, a * xg + x - a * xg2};
}

void require_gas_left(const CollisionInput& in) {
  in.validate();
  if (!(in.gas.x < in.brownian.x)) throw ConfigError("gas packet must start to the left of the Brownian packet");
}

void require_com(const CollisionInput& in) {
  require_gas_left(in);
  const double scale = in.brownian.mass * (std::abs(in.brownian.x) + in.brownian.width);
  if (std::abs(in.brownian.mass * in.brownian.x + in.gas.mass * in.gas.x) > 1e-9 * scale ||
      std::abs(in.brownian.p + in.gas.p) > 1e-9 * (std::abs(in.brownian.p) + 1.0))
    throw ConfigError("closed-form density needs the centre-of-mass frame at the origin");
  const ValidityReport r = validity(in);
  if (!r.matched_widths) throw ConfigError("closed-form density needs matched widths");
}

double er(double z) { return 0.5 * boost::math::erfc(-z); }

double simpson(const std::function<double(double)>& f, double lo, double hi, int points) {
  int n = std::max(points, 3);
  if (n % 2 == 0) ++n;
  const double h = (hi - lo) / (n - 1);
  double s = f(lo) + f(hi);
  for (int i = 1; i < n - 1; ++i) s += (i % 2 ? 4.0 : 2.0) * f(lo + h * i);
  return s * h / 3.0;
}

double gas_lower_limit(const CollisionInput& in, double t, double xprime) {
  auto spread = [t](const GaussianLabel& l) {
    const double tau = hbar * t / (l.mass * l.width);
    return std::sqrt(l.width * l.width + tau * tau);
  };
  const double G = in.gas.x + in.gas.p * t / in.gas.mass;
  const double B = in.brownian.x + in.brownian.p * t / in.brownian.mass;
  // Generous: the mirrored term reaches far out when alpha is small.
  const double reach = std::abs(G) + std::abs(B) + std::abs(xprime) + 15.0 * (spread(in.gas) + spread(in.brownian));
  return std::min({xprime, G, B}) - reach * (1.0 + 2.0 / in.alpha());
}

}  // namespace

cplx two_particle_wavefunction(const CollisionInput& in, double t, double xg, double x) {
  if (xg > x) return 0.0;
  const Reflected r = reflect(in.alpha(), xg, x);
  return free_wavefunction(in.gas, t, xg) * free_wavefunction(in.brownian, t, x) -
         free_wavefunction(in.gas, t, r.xg) * free_wavefunction(in.brownian, t, r.x);
}

double in_collision_position_density(const CollisionInput& in, double t, double xprime) {
  require_com(in);
  const GaussianLabel& b = in.brownian;
  const double a = in.alpha();
  const double X = b.x + b.p * t / b.mass;
  const double tau = hbar * t / (b.mass * b.width);
  const double S = std::sqrt(b.width * b.width + tau * tau);
  const double ra = std::sqrt(a) * S;
  const double u = (xprime - X) / S, v = (xprime + X) / S;
  return (std::exp(-u * u) * er((a * xprime + X) / ra) + std::exp(-v * v) * er((a * xprime - X) / ra)) /
         (std::sqrt(pi) * S);
}

double in_collision_position_density_quadrature(const CollisionInput& in, double t, double xprime, int points) {
  require_com(in);
  const double a = in.alpha();
  auto f = [&](double xg) {
    const Reflected r = reflect(a, xg, xprime);
    return std::norm(free_wavefunction(in.gas, t, xg) * free_wavefunction(in.brownian, t, xprime)) +
           std::norm(free_wavefunction(in.gas, t, r.xg) * free_wavefunction(in.brownian, t, r.x));
  };
  return simpson(f, gas_lower_limit(in, t, xprime), xprime, points);
}

double in_collision_position_density_exact(const CollisionInput& in, double t, double xprime, int points) {
  require_gas_left(in);
  auto f = [&](double xg) { return std::norm(two_particle_wavefunction(in, t, xg, xprime)); };
  return simpson(f, gas_lower_limit(in, t, xprime), xprime, points);
}

RVec in_collision_momentum_density(const CollisionInput& in, double t, const UniformAxis& x_axis,
                                   const UniformAxis& xg_axis, const UniformAxis& p_axis) {
  require_gas_left(in);
  x_axis.validate("position");
  xg_axis.validate("gas position");
  p_axis.validate("momentum");
  const double nyquist = pi * hbar / x_axis.step();
  if (std::max(std::abs(p_axis.lo), std::abs(p_axis.hi)) > nyquist)
    throw ConfigError("momentum axis exceeds the Nyquist momentum " + std::to_string(nyquist) + " of the position grid");
  CMat psi(x_axis.n, xg_axis.n);
  for (int j = 0; j < xg_axis.n; ++j)
    for (int i = 0; i < x_axis.n; ++i) psi(i, j) = two_particle_wavefunction(in, t, xg_axis.at(j), x_axis.at(i));
  CMat kernel(p_axis.n, x_axis.n);
  const double norm = x_axis.step() / std::sqrt(2.0 * pi * hbar);
  for (int k = 0; k < p_axis.n; ++k)
    for (int i = 0; i < x_axis.n; ++i) kernel(k, i) = norm * std::exp(-I * p_axis.at(k) * x_axis.at(i) / hbar);
  const CMat phi = kernel * psi;
  RVec out = phi.cwiseAbs2().rowwise().sum() * xg_axis.step();
  return out;
}

CatState collide_cat(const CatState& cat, const GaussianLabel& gas) {
  cat.validate();
  const CollisionInput ia{cat.a, gas}, ib{cat.b, gas};
  if (!validity(ia).matched_widths) throw ConfigError("collide_cat: cat and gas widths are not matched");
  const ScatterResult ra = scatter(ia), rb = scatter(ib);
  const cplx ov = overlap(rb.gas, ra.gas);
  CatState out = cat;
  out.a = ra.brownian;
  out.b = rb.brownian;
  out.c = cat.c * std::abs(ov);
  out.phi = std::remainder(cat.phi + std::arg(ov), 2.0 * pi);
  return out;
}

}  // namespace qmeas
