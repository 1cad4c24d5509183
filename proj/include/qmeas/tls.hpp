#pragma once

#include <optional>
#include <span>
#include <vector>

#include "qmeas/ctap.hpp"
#include "qmeas/qpc.hpp"

namespace qmeas {

// One fluctuator per transport-window site.
struct TlsBath {
  std::vector<double> couplings;   // chi_n
  std::vector<double> inversions;  // omega_n = Tr[rho_n sigma_z]

  void validate(int window) const;
  static TlsBath uniform(int window, double chi, double inversion = 0.0);
};

// Sign pattern s_n = +-1 of one block; diagonal entry s_n chi_n, weight prod (1 + s_n omega_n)/2.
struct SignBlock {
  std::vector<int> signs;
  double weight = 0.0;
};

// Blocks with non-zero weight, in binary order (bit n set means s_n = +1).
std::vector<SignBlock> sign_blocks(const TlsBath& bath);
std::vector<double> block_diagonal(const ChainSpec& chain, const TlsBath& bath, const SignBlock& block);

// rho_kl(t)/rho_kl(0) for window sites k != l under storage (no tunnelling).
cplx reduced_coherence(const QpcArray* array, const TlsBath& bath, double t, int k, int l);

struct GammaDelta {
  double gamma = 0.0;
  double delta = 0.0;
  bool pole = false;
};
GammaDelta gamma_delta(double t, double chi, double inversion);

struct TlsTransportOptions {
  double dt = 0.01;
  int record_every = 10;
  double memory_budget_bytes = 2.0e9;
  std::optional<StateVector> target;
};

struct TlsTransportResult {
  std::vector<double> times;
  std::vector<CMat> reduced;          // rho^A at each time
  std::vector<double> purity;
  std::vector<SignBlock> blocks;
  std::vector<double> block_fidelity;
  std::vector<double> block_phase;
  double fidelity = 0.0;
  std::optional<double> coherent_fidelity;
};

TlsTransportResult transport_with_tls(const ChainSpec& chain, const PulseSchedule& schedule, const TlsBath& bath,
                                      const StateVector& initial, const TlsTransportOptions& opt);

// Largest deviation of a site population from its running mean over `window` time units.
double fast_oscillation_amplitude(const std::vector<double>& times, const std::vector<CMat>& reduced, double window);

struct PulsePair {
  double pump = 0.0;
  double stokes = 0.0;
};

std::vector<PulsePair> step_two_samples(const PulseSchedule& schedule, int count, double threshold = 0.05);

struct CrossingReport {
  bool satisfied = true;
  double margin = 0.0;    // worst signed distance of E_0 from its neighbours (negative: not central)
  int worst_block = -1;
  int worst_sample = -1;
};

// E_0 is identified by overlap with the dark state at the first sample and followed by overlap.
CrossingReport crossing_condition(const ChainSpec& chain, const TlsBath& bath, std::span<const PulsePair> samples);

}  // namespace qmeas
