#pragma once

#include <optional>
#include <span>
#include <vector>

#include "qmeas/integrate.hpp"
#include "qmeas/linalg.hpp"

namespace qmeas {

// Sites are 0-based; transport runs from site `from` to site `to` (to - from even).
struct ChainSpec {
  int dots = 5;
  double omega_max = 1.0;
  int from = 0;
  int to = 4;

  void validate() const;
  int window() const { return to - from + 1; }
};

// Gaussian pump and Stokes pulses of common width on [start, end].
struct PulseSchedule {
  double omega_max = 1.0;
  double pump_center = 0.0;
  double stokes_center = 0.0;
  double width = 1.0;
  double start = 0.0;
  double end = 0.0;

  double pump(double t) const;
  double stokes(double t) const;
  void validate() const;

  // Pump at 0.9T, Stokes at 0.5T, width T/4 on [-T/2, 2T].
  static PulseSchedule delayed(double T, double omega_max = 1.0);
  // Pump at 3T/4, Stokes at T/4, width T/4 on [-T/3, 4T/3].
  static PulseSchedule symmetric(double T, double omega_max = 1.0);
  // Zero-amplitude pulses over an empty window.
  static PulseSchedule none();

  // First time the pump exceeds, and last time the Stokes pulse exceeds, `fraction` of omega_max.
  double step_two_start(double fraction = 0.05) const;
  double step_two_end(double fraction = 0.05) const;
};

CMat chain_hamiltonian(const ChainSpec& chain, double pump, double stokes, std::span<const double> diagonal = {});
CMat chain_hamiltonian(const ChainSpec& chain, const PulseSchedule& schedule, double t,
                       std::span<const double> diagonal = {});

// Zero-energy eigenvector of the span (length `span_length`, odd) for zero diagonal.
StateVector dark_state(double pump, double stokes, double omega_max, int span_length);
// Dark state embedded on the chain window.
StateVector chain_dark_state(const ChainSpec& chain, double pump, double stokes);

struct AdiabaticityReport {
  std::vector<double> ratios;  // per non-dark window eigenstate
  double max_ratio = 0.0;
  bool anticrossing = false;  // gap collapse; max_ratio is +inf
};

// hbar |<psi_m|d psi_0/dt>| / |E_m - E_0| on the transport window, central difference with h = T/2000.
AdiabaticityReport adiabaticity_metric(const ChainSpec& chain, const PulseSchedule& schedule, double t,
                                       std::span<const double> diagonal = {});

struct TransportResult {
  Trajectory<StateVector> trajectory;
  double fidelity = 0.0;                         // final population on `to`
  std::optional<double> coherent_fidelity;       // |<target|psi>|^2 when a target is given
  double dynamical_phase = 0.0;                  // integral of E_0 along the tracked zero branch
  std::vector<double> zero_branch;               // E_0 at trajectory times
};

struct TransportOptions {
  double dt = 0.01;
  int record_every = 1;
  std::vector<double> diagonal;                  // per-site energies, empty for none
  std::optional<StateVector> target;
};

TransportResult run_transport(const ChainSpec& chain, const PulseSchedule& schedule, const StateVector& initial,
                              const TransportOptions& opt);
TransportResult run_transport(const ChainSpec& chain, const PulseSchedule& schedule, int initial_site,
                              const TransportOptions& opt);

// Largest population outside the instantaneous zero branch along a trajectory.
double max_nonadiabatic_population(const ChainSpec& chain, const PulseSchedule& schedule,
                                   const Trajectory<StateVector>& traj);

}  // namespace qmeas
