#include "qmeas/gaussian.hpp"

#include <cmath>

namespace qmeas {

cplx GaussianLabel::coherent() const {
  return {x / (std::sqrt(2.0) * width), width * p / (std::sqrt(2.0) * hbar)};
}

GaussianLabel GaussianLabel::from_coherent(cplx beta, double width, double mass) {
  return {std::sqrt(2.0) * width * beta.real(), std::sqrt(2.0) * hbar * beta.imag() / width, width, mass};
}

cplx GaussianLabel::wavefunction(double xprime) const {
  const double d = xprime - x;
  const double amp = std::pow(pi * width * width, -0.25) * std::exp(-d * d / (2.0 * width * width));
  return amp * std::exp(I * (p * xprime - 0.5 * x * p) / hbar);
}

cplx coherent_overlap(cplx beta2, cplx beta1) {
  return std::exp(-0.5 * std::norm(beta1 - beta2) + I * std::imag(std::conj(beta2) * beta1));
}

cplx overlap(const GaussianLabel& b, const GaussianLabel& a) {
  if (std::abs(a.width - b.width) > 1e-12 * a.width) throw ConfigError("overlap: labels must share a width");
  return coherent_overlap(b.coherent(), a.coherent());
}

double phase_gaussian(double x, double p, double x0, double p0, double width) {
  const double dx = (x - x0) / width;
  const double dp = width * (p - p0) / hbar;
  return std::exp(-dx * dx - dp * dp);
}

double CatState::trace() const { return 2.0 + 2.0 * c * std::real(std::exp(I * phi) * overlap(b, a)); }

void CatState::validate() const {
  if (!(c >= 0.0 && c <= 1.0)) throw ConfigError("cat coherence c must lie in [0,1]");
  if (!(a.width > 0.0 && a.mass > 0.0)) throw ConfigError("cat branch width and mass must be positive");
  if (std::abs(a.width - b.width) > 1e-12 * a.width || std::abs(a.mass - b.mass) > 1e-12 * a.mass)
    throw ConfigError("cat branches must share width and mass");
}

}  // namespace qmeas
