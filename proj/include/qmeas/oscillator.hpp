#pragma once

#include "qmeas/linalg.hpp"

namespace qmeas {

// Truncated Fock-basis oscillator whose ground state is the width-W packet |0,0>_W.
class Oscillator {
 public:
  Oscillator(int dim, double width);

  int dim() const { return dim_; }
  double width() const { return width_; }
  const CMat& lowering() const { return a_; }
  const CMat& position() const { return x_; }
  const CMat& momentum() const { return p_; }

  // Exact Fock amplitudes of |beta> restricted to the basis (norm < 1 once |beta|^2 approaches dim).
  CVec coherent(cplx beta) const;
  // Thermal operator with mean occupation nbar.
  CMat thermal(double nbar) const;
  // exp(beta a^+ - beta* a), exponentiated in a padded basis and cropped.
  CMat displacement(cplx beta) const;

 private:
  int dim_;
  double width_;
  CMat a_, x_, p_;
};

}  // namespace qmeas
