#include "qmeas/oscillator.hpp"

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

#include "qmeas/gaussian.hpp"

namespace qmeas {

namespace {

CMat lowering_matrix(int dim) {
  CMat a = CMat::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

}  // namespace

Oscillator::Oscillator(int dim, double width) : dim_(dim), width_(width) {
  if (dim < 2) throw ConfigError("oscillator dimension must be at least 2");
  if (!(width > 0.0)) throw ConfigError("oscillator width must be positive");
  a_ = lowering_matrix(dim);
  x_ = (width / std::sqrt(2.0)) * (a_ + a_.adjoint());
  p_ = (-I * hbar / (std::sqrt(2.0) * width)) * (a_ - a_.adjoint());
}

CVec Oscillator::coherent(cplx beta) const {
  CVec v(dim_);
  cplx term = std::exp(-0.5 * std::norm(beta));
  for (int n = 0; n < dim_; ++n) {
    v(n) = term;
    term *= beta / std::sqrt(static_cast<double>(n + 1));
  }
  return v;
}

CMat Oscillator::thermal(double nbar) const {
  if (!(nbar >= 0.0)) throw ConfigError("thermal occupation must be non-negative");
  CMat s = CMat::Zero(dim_, dim_);
  const double q = nbar / (nbar + 1.0);
  double w = 1.0 / (nbar + 1.0);
  for (int n = 0; n < dim_; ++n) {
    s(n, n) = w;
    w *= q;
  }
  return s;
}

CMat Oscillator::displacement(cplx beta) const {
  const int big = 2 * dim_ + 40;
  const CMat a = lowering_matrix(big);
  const CMat gen = beta * a.adjoint() - std::conj(beta) * a;
  const CMat d = gen.exp();
  return d.topLeftCorner(dim_, dim_);
}

}  // namespace qmeas
