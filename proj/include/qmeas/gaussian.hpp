#pragma once

#include <complex>

#include "qmeas/linalg.hpp"

namespace qmeas {

// Natural units throughout.
inline constexpr double hbar = 1.0;

// Minimum-uncertainty packet |x,p>_W = D(x,p)|0,0>_W.
struct GaussianLabel {
  double x = 0.0;
  double p = 0.0;
  double width = 1.0;
  double mass = 1.0;

  // Glauber amplitude beta = x/(sqrt2 W) + i W p/(sqrt2 hbar).
  cplx coherent() const;
  static GaussianLabel from_coherent(cplx beta, double width, double mass);
  cplx wavefunction(double xprime) const;
  double velocity() const { return p / mass; }
};

// <b|a> for labels of the same width.
cplx overlap(const GaussianLabel& b, const GaussianLabel& a);
// <beta2|beta1> for Glauber amplitudes.
cplx coherent_overlap(cplx beta2, cplx beta1);

// Normalised Gaussian G(x0,p0) on phase space: exp(-(x-x0)^2/W^2 - W^2 (p-p0)^2/hbar^2).
double phase_gaussian(double x, double p, double x0, double p0, double width);

// rho proportional to |a><a| + |b><b| + c e^{i phi} |a><b| + c e^{-i phi} |b><a|.
struct CatState {
  GaussianLabel a;
  GaussianLabel b;
  double c = 1.0;
  double phi = 0.0;

  double x_center() const { return 0.5 * (a.x + b.x); }
  double p_center() const { return 0.5 * (a.p + b.p); }
  double x_separation() const { return a.x - b.x; }
  double p_separation() const { return a.p - b.p; }
  // Trace of the unnormalised operator above.
  double trace() const;
  void validate() const;
};

}  // namespace qmeas
