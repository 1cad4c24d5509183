#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qmeas/classical.hpp"
#include "qmeas/gaussian.hpp"
#include "qmeas/oscillator.hpp"

namespace qmeas {

// Smeared position-momentum measurement: effects D(x~,p~) sigma D^+(x~,p~)/(2 pi hbar), sigma thermal
// with occupation nbar in the width-W oscillator basis.
struct PovmSpec {
  double W = 1.0;
  double nbar = 0.0;
  std::optional<double> alpha;  // set when the measurement comes from a collision

  static PovmSpec from_collision(double W, double alpha);
  void validate() const;
  // Signed amplitude contraction of sqrt(sigma) on coherent labels: (1-alpha)/(1+alpha) for a
  // collision (negative when the gas is heavier), else sqrt(nbar/(nbar+1)).
  double contraction() const;
};

struct Uncertainties {
  double dx = 0.0;
  double dp = 0.0;
};
Uncertainties measurement_uncertainties(const PovmSpec& spec);

// <x,p|pi(x~,p~)|x,p>, a density in (x~, p~).
double effect_probability(const PovmSpec& spec, double xt, double pt, const GaussianLabel& state);

struct LabelAmplitude {
  GaussianLabel label;
  cplx amplitude;
};

// sqrt(pi(x~,p~)) |x,p> = amplitude |x',p'>.
LabelAmplitude sqrt_sigma_apply(const PovmSpec& spec, double xt, double pt, const GaussianLabel& state);

// Collision Kraus operator without free evolution, up to a state-independent phase:
// D(((1-a)x~ + 2a x_g)/(1+a), ((1-a)p~ + 2p_g)/(1+a)) sqrt(sigma) D^+(x~,p~) / sqrt(2 pi hbar).
LabelAmplitude kraus_B_apply(double alpha, double x_g, double p_g, double xt, double pt, const GaussianLabel& state);

// int B rho B^+ dx~ dp~ over all outcomes for a cat (or single packet, c = 0); Gaussian integrals in
// closed form.
CatState non_readout_transform(const CatState& cat, const GaussianLabel& gas);
// int int A_a A_b^* dx~ dp~ for the Kraus amplitudes of two labels.
cplx kraus_overlap_integral(double alpha, double x_g, double p_g, const GaussianLabel& a, const GaussianLabel& b);

// Brownian outcome inferred from a gas outcome.
struct InferredOutcome {
  double x = 0.0;
  double p = 0.0;
};
InferredOutcome inferred_outcome(double alpha, double x_g, double p_g, double xt_g, double pt_g);
// Gas-side probability density (1/2 pi hbar)|<x~_g,p~_g|xbar_g,pbar_g>|^2 in gas outcome variables.
double gas_outcome_probability(const GaussianLabel& brownian, const GaussianLabel& gas, double xt_g, double pt_g);

struct ThermalDecomposition {
  double T_tilde = 0.0;
  double m_g = 0.0;
  bool close_to_T = false;  // T - T~ below 1% of T

  double weight(double p_g) const;  // Maxwell-Boltzmann at T~
};
ThermalDecomposition thermal_decomposition(double T, double W_g, double m_g);

// Rate density in p_g, total rate (erf form), slow quadratic form.
double rate_density(const GasModel& gas, double m, double p, double p_g);
double rate_total(const GasModel& gas, double m, double p);
double rate_total_slow(const GasModel& gas, double m, double p);

struct Inequality {
  std::string name;
  std::string statement;
  double lhs = 0.0;
  double rhs = 0.0;
  bool satisfied = false;  // lhs >= 10 rhs for ">>" rows after normalisation
};

struct ValidityCheck {
  std::vector<Inequality> rows;
  double headline = 0.0;  // n_g hbar / sqrt(m_g T)

  bool all_ok() const;
  std::vector<std::string> violated() const;
};
ValidityCheck validity_check(const GasModel& gas, double m);

// Largest residual of the six displacement-average identities
//   int dx dp/(2 pi hbar) f(x,p) D O D^+ = ...,  f in {1, x, p, x^2, p^2, 2xp}
// tested through expectation values on the given probe labels. O lives on the truncated basis.
double displacement_identity_residual(const Oscillator& osc, const CMat& O, const std::vector<cplx>& probes);

}  // namespace qmeas
