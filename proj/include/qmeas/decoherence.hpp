#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qmeas/classical.hpp"
#include "qmeas/gaussian.hpp"
#include "qmeas/phase_space.hpp"
#include "qmeas/rng.hpp"

namespace qmeas {

// Closed-form collision map on cat parameters: labels scattered, c damped, phi shifted.
CatState collide_cat_params(const CatState& cat, const GaussianLabel& gas);

// Matched gas packet for a cat branch of width W and mass m: width W/sqrt(alpha), mass alpha m.
GaussianLabel matched_gas(double x_g, double p_g, const CatState& cat, double alpha);

struct GasSample {
  double x_g = 0.0;
  double p_g = 0.0;
};

// Collision-weighted p_g (density |p_g| exp(-p_g^2/2m_gT)/(2m_gT)) by inverse CDF; x_g uniform on the
// stretch travelled towards the origin within t_window.
GasSample sample_colliding_gas(double T, double m_g, double t_window, Rng& rng);
GasSample colliding_gas_from_uniforms(double T, double m_g, double t_window, double u1, double u2);
double colliding_momentum_density(double p_g, double T, double m_g);

struct DecoherenceRun {
  double T = 1.0;
  double alpha = 1e-4;   // m_g/m, m taken from the cat
  double t_window = 20.0;
  int samples = 200;
  std::uint64_t seed = 1;
  double x_ref = 0.0;    // reference point of the interference term
  double p_ref = 0.0;
  std::optional<double> forced_p_g;  // single gas momentum with x_g = 0
  std::optional<UniformAxis> grid_x;  // averaged Wigner function when both axes are given
  std::optional<UniformAxis> grid_p;
};

struct DecoherenceResult {
  double before = 0.0;          // interference term at the reference point
  double after = 0.0;           // its sample mean after one collision
  double decoherence = 0.0;     // 1 - after/before
  double std_error = 0.0;
  std::vector<double> ratios;   // per-sample after/before, in stream order
  std::optional<PhaseSpaceGrid> averaged;  // unnormalised three-term Wigner function
};

DecoherenceResult mc_decoherence(const CatState& cat, const DecoherenceRun& run);

// Dawson integral F(x) = exp(-x^2) int_0^x exp(t^2) dt.
double dawson(double x);

// Per-collision decoherence laws.
double position_decoherence_small(double x_D, double T, double m_g);          // 4 m_g T x_D^2/hbar^2
double position_decoherence_general(double x_D, double T, double m_g);        // a F(a/2), a = 2 x_D sqrt(2 m_g T)/hbar
double position_decoherence_quadrature(double x_D, double T, double m_g);     // the sine integral by quadrature
double momentum_decoherence(double p_D, double T, double m_g, double m, double t);        // 1 - (2/b) F(b/2)
double momentum_decoherence_small(double p_D, double T, double m_g, double m, double t);  // 4 m_g T t^2 p_D^2/(3 m^2 hbar^2)
// Position law averaged over x_D(t') = t' p_D/m, t' in (0, t), by quadrature.
double momentum_decoherence_time_sliced(double p_D, double T, double m_g, double m, double t);

// Position decoherence rate: collision rate R(0) times the per-collision value.
double position_decoherence_rate(const GasModel& gas, double x_D, bool general);

}  // namespace qmeas
