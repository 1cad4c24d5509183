#pragma once

#include <span>
#include <string>
#include <vector>

#include "qmeas/integrate.hpp"
#include "qmeas/linalg.hpp"

namespace qmeas {

struct AntiCrossing {
  std::size_t sample = 0;  // index into the input sequence
  int branch_a = 0;
  int branch_b = 0;
  double gap = 0.0;
};

// Branch k at sample i: energies[i](k), vectors[i].col(k).
struct TrackedSpectrum {
  std::vector<RVec> energies;
  std::vector<CMat> vectors;
  std::vector<AntiCrossing> anticrossings;
  std::vector<std::string> warnings;

  int branches() const { return energies.empty() ? 0 : static_cast<int>(energies.front().size()); }
  std::vector<double> curve(int branch) const;
};

// Sorted eigenpairs; eigenvector phase chosen so the largest-magnitude component is real positive.
void sorted_eigensystem(const CMat& h, RVec& values, CMat& vectors);

// Branches ordered by energy at the first sample, then followed by maximal overlap with
// <n(t_i)|n(t_{i+1})> made real positive.
TrackedSpectrum eig_tracked(std::span<const CMat> sequence, double gap_threshold = 1e-2);

// Interior local minima of adjacent sorted-eigenvalue gaps on a sample grid, refined by Brent's method.
struct GapMinimum {
  double time = 0.0;
  int lower_level = 0;
  double gap = 0.0;
};
std::vector<GapMinimum> gap_minima(const HamiltonianFn& h, std::span<const double> times);

}  // namespace qmeas
