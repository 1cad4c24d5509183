#pragma once

#include <functional>
#include <vector>

#include "qmeas/linalg.hpp"

namespace qmeas {

using HamiltonianFn = std::function<CMat(double)>;

struct TimeSpan {
  double start = 0.0;
  double end = 0.0;
};

struct StepOptions {
  double dt = 0.01;
  int record_every = 1;  // store every k-th step (first and last always kept)
};

struct IntegratorStats {
  long steps = 0;
  double step = 0.0;                // actual step after fitting the span
  double max_norm_drift = 0.0;      // before per-step renormalisation
  double max_trace_drift = 0.0;
  double max_hermiticity_error = 0.0;
};

template <class State>
struct Trajectory {
  std::vector<double> times;
  std::vector<State> states;
  IntegratorStats stats;

  const State& final_state() const { return states.back(); }
};

// Fixed-step RK4 for i dpsi/dt = H(t) psi with hbar = 1.
Trajectory<StateVector> evolve_schrodinger(const HamiltonianFn& h, const StateVector& psi0, TimeSpan span,
                                           StepOptions opt);

// Fixed-step RK4 for the Lindblad master equation with time-independent jump operators.
Trajectory<DensityOperator> evolve_lindblad(const HamiltonianFn& h, const std::vector<CMat>& jumps,
                                            const DensityOperator& rho0, TimeSpan span, StepOptions opt);

// Max-norm difference of the final states at dt and dt/2.
double schrodinger_step_halving(const HamiltonianFn& h, const StateVector& psi0, TimeSpan span, double dt);
double lindblad_step_halving(const HamiltonianFn& h, const std::vector<CMat>& jumps, const DensityOperator& rho0,
                             TimeSpan span, double dt);

}  // namespace qmeas
