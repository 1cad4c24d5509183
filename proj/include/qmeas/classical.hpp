#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "qmeas/rng.hpp"

namespace qmeas {

// Ideal 1D gas, k_B = 1. W_g and delta only matter for the quantum modules.
struct GasModel {
  double n_g = 1.0;
  double T = 1.0;
  double m_g = 0.01;
  double W_g = 1.0;
  double delta = 1.0;

  void validate() const;
  double alpha(double m) const { return m_g / m; }
  double thermal_velocity() const;  // sqrt(T/m_g)
};

struct ClassicalParticle {
  double x = 0.0;
  double p = 0.0;
  double m = 1.0;
};

struct CollisionOutcome {
  double p = 0.0;
  double p_g = 0.0;
};

// Elastic hard-core collision.
CollisionOutcome collide(double p, double p_g, double m, double m_g);
// q = pbar - p = 2(m p_g - m_g p)/(m + m_g).
double momentum_transfer(double p, double p_g, double m, double m_g);

// Rate density of collisions with gas momentum p_g: n_g mu_T(p_g) |p_g/m_g - p/m|.
double collision_density(const GasModel& gas, double m, double p, double p_g);
// The same statistics expressed in the momentum transfer q.
double kick_density(const GasModel& gas, double m, double p, double q);

double total_rate(const GasModel& gas, double m, double p);
// Slow-particle quadratic form n_g sqrt(2T/(pi m_g)) (1 + m_g p^2/(2 T m^2)).
double total_rate_slow(const GasModel& gas, double m, double p);

// int q P_p(q) dq and int q^2 P_p(q) dq in closed form.
double mean_kick(const GasModel& gas, double m, double p);
double kick_second_moment(const GasModel& gas, double m, double p);

struct Kramers {
  double gamma = 0.0;
  double diffusion = 0.0;  // D_pp = m T gamma
};
Kramers kramers(const GasModel& gas, double m);

enum class CollisionStatistics {
  flux_weighted,  // p_g drawn from n_g mu_T |v_g - v|
  maxwell_only,   // p_g drawn from mu_T at the constant rate R(0); wrong, kept for comparison
};

struct JumpTrajectory {
  std::vector<double> times;
  std::vector<double> x;
  std::vector<double> p;
  long collisions = 0;
  long rejections = 0;
};

// Event-driven simulation of the classical master equation, sampled at sorted record times.
JumpTrajectory simulate_jumps(const GasModel& gas, const ClassicalParticle& start, std::span<const double> record_times,
                              Rng& rng, CollisionStatistics stats = CollisionStatistics::flux_weighted);

// <x>, <p>, <x^2>, <p^2> and the symmetrised product <(xp + px)/2>.
struct MomentVector {
  double x = 0.0;
  double p = 0.0;
  double xx = 0.0;
  double pp = 0.0;
  double xp = 0.0;

  double position_variance() const { return xx - x * x; }
  double momentum_variance() const { return pp - p * p; }
};

struct EnsembleMoments {
  std::vector<double> times;
  std::vector<MomentVector> mean;
  std::vector<MomentVector> std_error;
  long trajectories = 0;
  long collisions = 0;
  std::vector<double> final_momenta;  // only when requested
};

struct EnsembleOptions {
  long trajectories = 100000;
  std::uint64_t seed = 1;
  long chunk = 1000;  // trajectories per random stream
  CollisionStatistics stats = CollisionStatistics::flux_weighted;
  bool keep_final_momenta = false;
};

EnsembleMoments ensemble_moments(const GasModel& gas, const ClassicalParticle& start, std::span<const double> times,
                                 const EnsembleOptions& opt);

enum class Closure {
  linear,       // Kramers: mean kick -gamma p, constant diffusion
  slow_series,  // slow-particle power series of the partial Gaussian integrals
  exact,        // closed forms, averaged over a Gaussian closure
};

// Collision terms of the moment equations as functions of p.
struct CollisionTerms {
  std::function<double(double)> kick;            // int q P_p(q) dq
  std::function<double(double)> momentum_square; // int (q^2 + 2pq) P_p(q) dq
  std::function<double(double)> position_square; // extra d<x^2>/dt source (zero classically)
};

CollisionTerms classical_terms(const GasModel& gas, double m, Closure closure);

// d/dt of the moment vector with the p-dependence averaged over a Gaussian with the current first
// and second moments (Gauss-Hermite, `nodes` points).
MomentVector moment_rhs(const CollisionTerms& terms, double m, const MomentVector& state, int nodes = 40);

struct MomentSeries {
  std::vector<double> times;
  std::vector<MomentVector> moments;
};

// Fixed-step RK4 on the moment equations, sampled at sorted output times.
MomentSeries integrate_moments(const CollisionTerms& terms, double m, const MomentVector& start,
                               std::span<const double> times, double dt);

// Power series of the partial Gaussian integrals (argument alpha p); used by slow_series.
struct PartialGaussians {
  double pg0 = 0.0;  // int_0^{alpha p} exp(-pg^2/2m_gT)
  double pg1 = 0.0;  // int_{-inf}^{alpha p} (pg/m_g) exp(...)
  double pg2 = 0.0;  // int_0^{alpha p} (pg/m_g)^2 exp(...)
  double pg3 = 0.0;  // int_{-inf}^{alpha p} (pg/m_g)^3 exp(...)
};
PartialGaussians partial_gaussian_series(const GasModel& gas, double m, double p);
PartialGaussians partial_gaussian_quadrature(const GasModel& gas, double m, double p);

}  // namespace qmeas
