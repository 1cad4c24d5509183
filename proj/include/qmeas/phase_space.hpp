#pragma once

#include "qmeas/gaussian.hpp"
#include "qmeas/linalg.hpp"

namespace qmeas {

struct UniformAxis {
  double lo = 0.0;
  double hi = 1.0;
  int n = 2;

  double step() const { return (hi - lo) / static_cast<double>(n - 1); }
  double at(int i) const { return lo + step() * static_cast<double>(i); }
  void validate(const char* what) const;
};

// values(i, j) at (x.at(i), p.at(j)).
struct PhaseSpaceGrid {
  UniformAxis x;
  UniformAxis p;
  RMat values;
  double quadrature_error = 0.0;  // |full-grid integral - stride-2 integral|

  double integral() const;
  RVec position_marginal() const;  // integrate over p
  RVec momentum_marginal() const;  // integrate over x
};

// Position-representation kernel rho(x_i, x_j) sampled on a uniform axis (trace = sum rho_ii dx).
CMat cat_position_kernel(const CatState& cat, const UniformAxis& grid, bool normalized = true);
CMat label_position_kernel(const GaussianLabel& label, const UniformAxis& grid);

// W(x,p) = (1/pi hbar) sum_y exp(-2ipy/hbar) rho(x+y, x-y) dy with y on the position grid.
// Output x points are every x_stride-th grid point. Throws ConfigError past the Nyquist limit.
PhaseSpaceGrid wigner(const CMat& kernel, const UniformAxis& position_grid, const UniformAxis& p_axis,
                      int x_stride = 1);

// Q(x,p) = <x,p|rho|x,p>/(2 pi hbar) with packets of the given width.
PhaseSpaceGrid husimi(const CMat& kernel, const UniformAxis& position_grid, const UniformAxis& x_axis,
                      const UniformAxis& p_axis, double width);

double wigner_cat_at(const CatState& cat, double x, double p, bool normalized = true);
// Three-term closed form; requires >= 8 points per interference wavelength.
PhaseSpaceGrid wigner_cat(const CatState& cat, const UniformAxis& x_axis, const UniformAxis& p_axis,
                          bool normalized = true);
double wigner_interference_at(const CatState& cat, double x, double p);

double husimi_cat_at(const CatState& cat, double x, double p, bool normalized = true);
PhaseSpaceGrid husimi_cat(const CatState& cat, const UniformAxis& x_axis, const UniformAxis& p_axis,
                          bool normalized = true);

// Tr(rho1 rho2) = 2 pi hbar int W1 W2.
double wigner_overlap(const PhaseSpaceGrid& w1, const PhaseSpaceGrid& w2);

}  // namespace qmeas
