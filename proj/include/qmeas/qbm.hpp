#pragma once

#include <span>

#include "qmeas/classical.hpp"

namespace qmeas {

// d<p>/dt = -<f_T(p)>, d<p^2>/dt = -<h_T(p)>, d<x^2>/dt = <{x,p}>/m + delta^2 <g_T(p)>.
double friction_fT(double p, const GasModel& gas, double m);
double heating_hT(double p, const GasModel& gas, double m);
double position_diffusion_gT(double p, const GasModel& gas, double m);
// g_T by direct quadrature of the cubic velocity moment.
double position_diffusion_gT_quadrature(double p, const GasModel& gas, double m);

// Fast-particle drag 2 n_g m_g (p|p|/m^2 + T sgn(p)/m_g)/(1+alpha).
double friction_fast_limit(double p, const GasModel& gas, double m);

// Thermal average of h_T at the gas temperature, divided by |h_T(0)|.
double thermal_heating_average(const GasModel& gas, double m);

enum class QbmModel {
  linear,  // slow heavy particle: constant gamma, D_pp = m T gamma
  exact,   // f_T, h_T, g_T averaged over a Gaussian closure
};

struct QbmOptions {
  QbmModel model = QbmModel::exact;
  bool delta_term = false;
  double dt = 1e-3;
};

// Moment trajectory; MomentVector::xp is the symmetrised product, half of <{x,p}>.
CollisionTerms qbm_terms(const GasModel& gas, double m, const QbmOptions& opt);
MomentSeries evolve_moments(const MomentVector& start, const GasModel& gas, double m, std::span<const double> times,
                            const QbmOptions& opt);
// Closed-form solution of the linear system.
MomentVector analytic_moments(const MomentVector& start, const GasModel& gas, double m, double t, bool delta_term);

// Short-time <x^2> from rest: n_g sqrt(m_g) (2T)^{3/2} (4t^3 + t delta^2)/(3 sqrt(pi) m^2).
double short_time_position_spread(const GasModel& gas, double m, double t, bool delta_term);

// Log-log slope of <x^2>(t) - <x^2>(0) between t_lo and t_hi (least squares over `points` samples).
double growth_exponent(const MomentVector& start, const GasModel& gas, double m, double t_lo, double t_hi, int points,
                       bool delta_term);

struct StandardForm {
  double gamma = 0.0;
  double D_pp = 0.0;
  double D_xx = 0.0;
  bool lindblad_ok = false;  // D_xx D_pp >= (hbar gamma/4)^2
};
StandardForm standard_form_coeffs(const GasModel& gas, double m, bool keep_delta_term);

}  // namespace qmeas
