#include "qmeas/povm.hpp"

#include <cmath>
#include <limits>

#include <boost/math/special_functions/erf.hpp>

#include "qmeas/collision.hpp"

namespace qmeas {

PovmSpec PovmSpec::from_collision(double W, double alpha) {
  if (!(alpha > 0.0)) throw ConfigError("mass ratio alpha must be positive");
  return {W, (1.0 - alpha) * (1.0 - alpha) / (4.0 * alpha), alpha};
}

void PovmSpec::validate() const {
  if (!(W > 0.0)) throw ConfigError("measurement width W must be positive");
  if (!(nbar >= 0.0) || !std::isfinite(nbar)) throw ConfigError("imperfection nbar must be finite and non-negative");
  if (alpha) {
    const double a = *alpha;
    if (!(a > 0.0)) throw ConfigError("mass ratio alpha must be positive");
    const double expect = (1.0 - a) * (1.0 - a) / (4.0 * a);
    if (std::abs(nbar - expect) > 1e-12 * (1.0 + expect))
      throw ConfigError("nbar does not match (1-alpha)^2/(4 alpha) for the given alpha");
  }
}

double PovmSpec::contraction() const {
  if (alpha) return (1.0 - *alpha) / (1.0 + *alpha);
  return std::sqrt(nbar / (nbar + 1.0));
}

Uncertainties measurement_uncertainties(const PovmSpec& spec) {
  spec.validate();
  const double f = std::sqrt(spec.nbar + 0.5);
  return {spec.W * f, hbar / spec.W * f};
}

namespace {

cplx beta_of(double x, double p, double W) { return {x / (std::sqrt(2.0) * W), W * p / (std::sqrt(2.0) * hbar)}; }

void require_width(const GaussianLabel& l, double W) {
  if (std::abs(l.width - W) > 1e-12 * W) throw ConfigError("state width does not match the measurement width");
}

struct LogAmplitude {
  cplx beta;     // output label
  cplx log_amp;  // log of the amplitude, no branch cut involved
};

// D(xi) sqrt(sigma) D^+(bt)|beta> / sqrt(2 pi hbar), sqrt(sigma) = sqrt(1-c^2) c^n.
LogAmplitude displaced_contraction(cplx xi, cplx bt, double c, cplx beta) {
  const cplx d = beta - bt;
  const double keep = 1.0 - c * c;
  cplx log_amp = -0.5 * std::log(2.0 * pi * hbar) + 0.5 * std::log(keep) - 0.5 * keep * std::norm(d);
  log_amp += I * std::imag(-bt * std::conj(beta));
  log_amp += I * std::imag(xi * std::conj(c * d));
  return {xi + c * d, log_amp};
}

cplx kraus_centre(double alpha, double x_g, double p_g, double xt, double pt, double W) {
  return beta_of(((1.0 - alpha) * xt + 2.0 * alpha * x_g) / (1.0 + alpha), ((1.0 - alpha) * pt + 2.0 * p_g) / (1.0 + alpha),
                 W);
}

LogAmplitude kraus_log(double alpha, double x_g, double p_g, double xt, double pt, const GaussianLabel& s) {
  const double c = (1.0 - alpha) / (1.0 + alpha);
  return displaced_contraction(kraus_centre(alpha, x_g, p_g, xt, pt, s.width), beta_of(xt, pt, s.width), c,
                               s.coherent());
}

}  // namespace

double effect_probability(const PovmSpec& spec, double xt, double pt, const GaussianLabel& state) {
  spec.validate();
  require_width(state, spec.W);
  const double d2 = std::norm(state.coherent() - beta_of(xt, pt, spec.W));
  return std::exp(-d2 / (spec.nbar + 1.0)) / (2.0 * pi * hbar * (spec.nbar + 1.0));
}

LabelAmplitude sqrt_sigma_apply(const PovmSpec& spec, double xt, double pt, const GaussianLabel& state) {
  spec.validate();
  require_width(state, spec.W);
  const cplx bt = beta_of(xt, pt, spec.W);
  const LogAmplitude r = displaced_contraction(bt, bt, spec.contraction(), state.coherent());
  return {GaussianLabel::from_coherent(r.beta, state.width, state.mass), std::exp(r.log_amp)};
}

LabelAmplitude kraus_B_apply(double alpha, double x_g, double p_g, double xt, double pt, const GaussianLabel& state) {
  if (!(alpha > 0.0)) throw ConfigError("mass ratio alpha must be positive");
  const LogAmplitude r = kraus_log(alpha, x_g, p_g, xt, pt, state);
  return {GaussianLabel::from_coherent(r.beta, state.width, state.mass), std::exp(r.log_amp)};
}

cplx kraus_overlap_integral(double alpha, double x_g, double p_g, const GaussianLabel& a, const GaussianLabel& b) {
  if (!(alpha > 0.0)) throw ConfigError("mass ratio alpha must be positive");
  require_width(b, a.width);
  const double W = a.width;
  // Exponent of A_a A_b^* is an exact quadratic in v = (x~/W, W p~/hbar); read it off by differences.
  auto E = [&](double v1, double v2) {
    const double xt = v1 * W, pt = v2 * hbar / W;
    return kraus_log(alpha, x_g, p_g, xt, pt, a).log_amp + std::conj(kraus_log(alpha, x_g, p_g, xt, pt, b).log_amp);
  };
  const cplx e0 = E(0, 0);
  const cplx ex = E(1, 0), emx = E(-1, 0), ey = E(0, 1), emy = E(0, -1), exy = E(1, 1);
  const cplx q11 = ex + emx - 2.0 * e0;
  const cplx q22 = ey + emy - 2.0 * e0;
  const cplx g1 = 0.5 * (ex - emx), g2 = 0.5 * (ey - emy);
  const cplx q12 = exy - e0 - g1 - g2 - 0.5 * q11 - 0.5 * q22;
  // int exp(e0 + g.v + v.Q.v/2) d^2v with A = -Q.
  const cplx a11 = -q11, a22 = -q22, a12 = -q12;
  const cplx det = a11 * a22 - a12 * a12;
  if (!(std::real(a11) > 0.0 && std::real(det) > 0.0)) throw NumericError("Kraus overlap integrand is not decaying");
  const cplx quad = (a22 * g1 * g1 - 2.0 * a12 * g1 * g2 + a11 * g2 * g2) / det;
  return hbar * 2.0 * pi / std::sqrt(det) * std::exp(e0 + 0.5 * quad);
}

CatState non_readout_transform(const CatState& cat, const GaussianLabel& gas) {
  cat.validate();
  const CollisionInput probe{cat.a, gas};
  if (!validity(probe).matched_widths) throw ConfigError("non_readout_transform: widths not matched");
  const double alpha = probe.alpha();
  CatState out = cat;
  out.a = kraus_B_apply(alpha, gas.x, gas.p, 0.0, 0.0, cat.a).label;
  out.b = kraus_B_apply(alpha, gas.x, gas.p, 0.0, 0.0, cat.b).label;
  const cplx f = kraus_overlap_integral(alpha, gas.x, gas.p, cat.a, cat.b);
  out.c = cat.c * std::abs(f);
  out.phi = std::remainder(cat.phi + std::arg(f), 2.0 * pi);
  return out;
}

InferredOutcome inferred_outcome(double alpha, double x_g, double p_g, double xt_g, double pt_g) {
  if (!(alpha > 0.0)) throw ConfigError("mass ratio alpha must be positive");
  return {0.5 * (1.0 - alpha) * x_g + 0.5 * (1.0 + alpha) * xt_g,
          (1.0 - alpha) / (2.0 * alpha) * p_g + (1.0 + alpha) / (2.0 * alpha) * pt_g};
}

double gas_outcome_probability(const GaussianLabel& brownian, const GaussianLabel& gas, double xt_g, double pt_g) {
  const ScatterResult r = scatter({brownian, gas});
  const GaussianLabel measured{xt_g, pt_g, gas.width, gas.mass};
  return std::norm(overlap(measured, r.gas)) / (2.0 * pi * hbar);
}

double ThermalDecomposition::weight(double p_g) const {
  const double s2 = m_g * T_tilde;
  return std::exp(-p_g * p_g / (2.0 * s2)) / std::sqrt(2.0 * pi * s2);
}

ThermalDecomposition thermal_decomposition(double T, double W_g, double m_g) {
  if (!(T > 0.0 && W_g > 0.0 && m_g > 0.0)) throw ConfigError("T, W_g and m_g must be positive");
  const double shift = hbar * hbar / (2.0 * m_g * W_g * W_g);
  const double Tt = T - shift;
  if (!(Tt > 0.0))
    throw ConfigError("gas packet width too small for the temperature: T~ = " + std::to_string(Tt) + " <= 0");
  return {Tt, m_g, shift < 0.01 * T};
}

double rate_density(const GasModel& gas, double m, double p, double p_g) { return collision_density(gas, m, p, p_g); }

double rate_total(const GasModel& gas, double m, double p) {
  gas.validate();
  const double v = p / m;
  const double k = std::sqrt(gas.m_g / (2.0 * gas.T));
  return gas.n_g * std::sqrt(2.0 * gas.T / (pi * gas.m_g)) *
         (std::exp(-k * k * v * v) + std::sqrt(pi) * k * v * boost::math::erf(k * v));
}

double rate_total_slow(const GasModel& gas, double m, double p) { return total_rate_slow(gas, m, p); }

bool ValidityCheck::all_ok() const {
  for (const auto& r : rows)
    if (!r.satisfied) return false;
  return true;
}

std::vector<std::string> ValidityCheck::violated() const {
  std::vector<std::string> out;
  for (const auto& r : rows)
    if (!r.satisfied) out.push_back(r.name);
  return out;
}

ValidityCheck validity_check(const GasModel& gas, double m) {
  gas.validate();
  if (!(m > 0.0)) throw ConfigError("Brownian mass must be positive");
  const double a = gas.alpha(m);
  const double T = gas.T, mg = gas.m_g, ng = gas.n_g, Wg = gas.W_g, d = gas.delta;
  const double margin = 10.0;
  ValidityCheck c;
  auto much_greater = [&](std::string name, std::string text, double lhs, double rhs) {
    c.rows.push_back({std::move(name), std::move(text), lhs, rhs, lhs >= margin * rhs});
  };
  auto much_less = [&](std::string name, std::string text, double lhs, double rhs) {
    c.rows.push_back({std::move(name), std::move(text), lhs, rhs, margin * lhs <= rhs});
  };
  const double vtyp = std::sqrt(T / mg);
  const double inf = std::numeric_limits<double>::infinity();
  much_greater("collision_resolution", "delta >> sqrt(1+alpha) W_g/|v_g - v|", d, std::sqrt(1.0 + a) * Wg / vtyp);
  much_less("low_density", "delta n_g sqrt(2T/(pi m_g)) << 1", d * ng * std::sqrt(2.0 * T / (pi * mg)), 1.0);
  much_greater("thermal_width", "W_g >> sqrt(1+alpha) hbar/sqrt(m_g T)", Wg, std::sqrt(1.0 + a) * hbar / std::sqrt(mg * T));
  much_greater("high_temperature", "delta >> (1+alpha) hbar/T", d, (1.0 + a) * hbar / T);
  much_less("density_width", "W_g << sqrt(pi/(2(1+alpha)))/n_g", Wg,
            ng > 0.0 ? std::sqrt(pi / (2.0 * (1.0 + a))) / ng : inf);
  much_greater("delta_lower", "delta >> hbar/T", d, hbar / T);
  much_less("delta_upper", "delta << sqrt(m_g)/(n_g sqrt(T))", d, ng > 0.0 ? std::sqrt(mg) / (ng * std::sqrt(T)) : inf);
  much_greater("width_lower", "W_g >> hbar/sqrt(m_g T)", Wg, hbar / std::sqrt(mg * T));
  much_less("width_upper", "W_g << 1/n_g", Wg, ng > 0.0 ? 1.0 / ng : inf);
  c.headline = ng * hbar / std::sqrt(mg * T);
  much_less("headline", "n_g hbar/sqrt(m_g T) << 1", c.headline, 1.0);
  return c;
}

double displacement_identity_residual(const Oscillator& osc, const CMat& O, const std::vector<cplx>& probes) {
  if (O.rows() != osc.dim() || O.cols() != osc.dim()) throw ConfigError("operator dimension does not match the basis");
  const double W = osc.width();
  const CMat& X = osc.position();
  const CMat& P = osc.momentum();
  const cplx tr = O.trace();
  const cplx tx = (O * X).trace(), tp = (O * P).trace();
  const cplx txx = (O * X * X).trace(), tpp = (O * P * P).trace(), txp = (O * (X * P + P * X)).trace();

  // Husimi function of O on a square grid in gamma; trapezoid converges spectrally for these Gaussians.
  const double R = 7.0, h = 0.1;
  const int n = static_cast<int>(std::lround(2.0 * R / h)) + 1;
  std::vector<cplx> gammas;
  std::vector<cplx> q;
  gammas.reserve(static_cast<std::size_t>(n) * n);
  q.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const cplx g(-R + h * i, -R + h * j);
      const CVec v = osc.coherent(g);
      gammas.push_back(g);
      q.push_back(v.dot(O * v));
    }
  const double weight = h * h / pi;

  double worst = 0.0;
  for (cplx probe : probes) {
    const double x0 = std::sqrt(2.0) * W * probe.real();
    const double p0 = std::sqrt(2.0) * hbar * probe.imag() / W;
    cplx lhs[6] = {};
    for (std::size_t k = 0; k < gammas.size(); ++k) {
      const double x = x0 - std::sqrt(2.0) * W * gammas[k].real();
      const double p = p0 - std::sqrt(2.0) * hbar * gammas[k].imag() / W;
      const cplx w = weight * q[k];
      lhs[0] += w;
      lhs[1] += w * x;
      lhs[2] += w * p;
      lhs[3] += w * x * x;
      lhs[4] += w * p * p;
      lhs[5] += w * 2.0 * x * p;
    }
    const cplx rhs[6] = {tr,
                         tr * x0 - tx,
                         tr * p0 - tp,
                         tr * (x0 * x0 + 0.5 * W * W) - 2.0 * tx * x0 + txx,
                         tr * (p0 * p0 + 0.5 * hbar * hbar / (W * W)) - 2.0 * tp * p0 + tpp,
                         tr * 2.0 * x0 * p0 - 2.0 * tx * p0 - 2.0 * tp * x0 + txp};
    for (int k = 0; k < 6; ++k) worst = std::max(worst, std::abs(lhs[k] - rhs[k]) / std::max(1.0, std::abs(rhs[k])));
  }
  return worst;
}

}  // namespace qmeas
