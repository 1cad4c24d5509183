#pragma once

#include <string>
#include <vector>

#include "qmeas/ctap.hpp"
#include "qmeas/linalg.hpp"

namespace qmeas {

enum class Locality { nonlocal, local };

// Rail of charge sensors at distance `a` from a dot rail of spacing `d`; one sensor per dot.
// `rate` is the total measurement rate R, the per-sensor rate is R/n_qpc.
struct QpcArray {
  double a = 1.0;
  double d = 1.0;
  double alpha = 0.04;
  double rate = 1.0;
  long n_qpc = 1;
  int site_cutoff = 10000;
  Locality locality = Locality::nonlocal;

  void validate() const;
  double per_sensor_rate() const { return rate / static_cast<double>(n_qpc); }
  // Relative detection weight of sensor j for an electron on dot i (1 - alpha/r_ij).
  double weight(long i, long j) const;
  double distance(long i, long j) const;
};

// kappa = N / sum_j (1 - alpha/r_ij) for a rail of n_qpc sensors centred on the dot.
double kappa(const QpcArray& array);
double kappa_with_cutoff(const QpcArray& array, long cutoff);

// Effect operators on a periodic ring of n sites (minimum-image distances).
std::vector<RMat> ring_effect_operators(const QpcArray& array, int n_sites);

double dephasing_rate(const QpcArray& array, long k, long l);

// sqrt(R/N) times the square-root effect weights for sensors within the cutoff of the chain.
std::vector<CMat> qpc_jump_operators(const QpcArray& array, int dots);

struct LossOptions {
  int points = 2000;
  double threshold = 0.05;  // step-two boundary as a fraction of omega_max
};

struct LossResult {
  double value = 0.0;
  double doubled_grid_difference = 0.0;  // |value(2n) - value(n)| / value
  double max_adiabaticity = 0.0;
  std::vector<std::string> warnings;
};

LossResult transfer_loss(const QpcArray& array, const ChainSpec& chain, const PulseSchedule& schedule,
                         const LossOptions& opt = {});
LossResult coherence_loss(const QpcArray& array, const ChainSpec& chain, const PulseSchedule& schedule, int bystander,
                          const LossOptions& opt = {});

struct LindbladCheck {
  double fidelity_full = 0.0;
  double fidelity_closed = 0.0;
  double fidelity_adiabatic = 0.0;  // closed-system fidelity minus the adiabatic loss
  double loss_full = 0.0;
  double loss_adiabatic = 0.0;
  double relative_difference = 0.0;
};

LindbladCheck lindblad_cross_check(const QpcArray& array, const ChainSpec& chain, const PulseSchedule& schedule,
                                   double dt, const LossOptions& opt = {});

}  // namespace qmeas
