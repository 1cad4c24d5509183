#pragma once

#include <vector>

#include "qmeas/gaussian.hpp"
#include "qmeas/phase_space.hpp"

namespace qmeas {

// Brownian packet and one gas packet; masses and widths carried by the labels.
struct CollisionInput {
  GaussianLabel brownian;
  GaussianLabel gas;

  double alpha() const { return gas.mass / brownian.mass; }
  void validate() const;
};

// Centre-of-mass frame set-up: gas at (-x/alpha, -p) with the matched width W/sqrt(alpha).
CollisionInput com_frame(double x, double p, double m, double alpha, double W);

struct ValidityReport {
  bool overlap_ok = false;
  bool momentum_ok = false;
  bool matched_widths = false;
  double t_c = 0.0;  // +inf when the velocities are equal

  bool ok() const { return overlap_ok && momentum_ok && matched_widths; }
};

ValidityReport validity(const CollisionInput& in);

struct ScatterResult {
  GaussianLabel brownian;
  GaussianLabel gas;
  ValidityReport report;  // carried along; scatter never refuses
};

// Post-collision labels of a complete hard-core collision.
ScatterResult scatter(const CollisionInput& in);

// Cross coefficient of u u_g in the exponent of the scattered two-particle state.
double entanglement_coefficient(double W, double W_g, double m, double m_g);

// Freely evolved |x,p> at time t.
cplx free_wavefunction(const GaussianLabel& label, double t, double xprime);

// Exact hard-core two-particle wavefunction; zero for x_g' > x'. Requires the gas to start on the left.
cplx two_particle_wavefunction(const CollisionInput& in, double t, double xg, double x);

// Closed-form Brownian position density during the collision (COM frame only).
double in_collision_position_density(const CollisionInput& in, double t, double xprime);
// The same two-term integrand summed by trapezoid over `points` gas positions (check of the Er terms).
double in_collision_position_density_quadrature(const CollisionInput& in, double t, double xprime, int points);
// Integral of the exact |Psi|^2 over the gas coordinate, cross term included.
double in_collision_position_density_exact(const CollisionInput& in, double t, double xprime, int points);

// Brownian momentum density from the exact wavefunction on an (x', x_g') grid; DFT over x' per row.
// Throws ConfigError when |p| exceeds the Nyquist momentum of the x' grid.
RVec in_collision_momentum_density(const CollisionInput& in, double t, const UniformAxis& x_axis,
                                   const UniformAxis& xg_axis, const UniformAxis& p_axis);

// Both branches scattered off the same gas packet, gas traced out. The coherence picks up the overlap
// of the two post-collision gas labels.
CatState collide_cat(const CatState& cat, const GaussianLabel& gas);

}  // namespace qmeas
