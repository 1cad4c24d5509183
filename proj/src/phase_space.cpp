#include "qmeas/phase_space.hpp"

#include <cmath>
#include <string>

namespace qmeas {

void UniformAxis::validate(const char* what) const {
  if (n < 2 || !(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi))
    throw ConfigError(std::string(what) + " axis needs n >= 2 and hi > lo");
}

namespace {

double trapezoid_2d(const RMat& v, double dx, double dp, int stride) {
  double s = 0.0;
  const int nx = static_cast<int>(v.rows());
  const int np = static_cast<int>(v.cols());
  const int lastx = ((nx - 1) / stride) * stride;
  const int lastp = ((np - 1) / stride) * stride;
  for (int i = 0; i <= lastx; i += stride) {
    const double wx = (i == 0 || i == lastx) ? 0.5 : 1.0;
    for (int j = 0; j <= lastp; j += stride) {
      const double wp = (j == 0 || j == lastp) ? 0.5 : 1.0;
      s += wx * wp * v(i, j);
    }
  }
  return s * dx * dp * stride * stride;
}

void finish(PhaseSpaceGrid& g) {
  const double full = trapezoid_2d(g.values, g.x.step(), g.p.step(), 1);
  const double half = trapezoid_2d(g.values, g.x.step(), g.p.step(), 2);
  g.quadrature_error = std::abs(full - half);
}

void check_cat_resolution(const CatState& cat, const UniformAxis& x, const UniformAxis& p) {
  const double xd = std::abs(cat.x_separation());
  const double pd = std::abs(cat.p_separation());
  if (cat.c == 0.0) return;
  if (xd > 0.0 && p.step() > 2.0 * pi * hbar / xd / 8.0)
    throw ConfigError("momentum grid too coarse for interference wavelength 2 pi hbar/x_D");
  if (pd > 0.0 && x.step() > 2.0 * pi * hbar / pd / 8.0)
    throw ConfigError("position grid too coarse for interference wavelength 2 pi hbar/p_D");
}

}  // namespace

double PhaseSpaceGrid::integral() const { return trapezoid_2d(values, x.step(), p.step(), 1); }

RVec PhaseSpaceGrid::position_marginal() const {
  RVec m(values.rows());
  for (int i = 0; i < values.rows(); ++i) {
    double s = 0.0;
    for (int j = 0; j < values.cols(); ++j) s += ((j == 0 || j == values.cols() - 1) ? 0.5 : 1.0) * values(i, j);
    m(i) = s * p.step();
  }
  return m;
}

RVec PhaseSpaceGrid::momentum_marginal() const {
  RVec m(values.cols());
  for (int j = 0; j < values.cols(); ++j) {
    double s = 0.0;
    for (int i = 0; i < values.rows(); ++i) s += ((i == 0 || i == values.rows() - 1) ? 0.5 : 1.0) * values(i, j);
    m(j) = s * x.step();
  }
  return m;
}

CMat label_position_kernel(const GaussianLabel& label, const UniformAxis& grid) {
  CVec psi(grid.n);
  for (int i = 0; i < grid.n; ++i) psi(i) = label.wavefunction(grid.at(i));
  return psi * psi.adjoint();
}

CMat cat_position_kernel(const CatState& cat, const UniformAxis& grid, bool normalized) {
  cat.validate();
  grid.validate("position");
  CVec a(grid.n), b(grid.n);
  for (int i = 0; i < grid.n; ++i) {
    a(i) = cat.a.wavefunction(grid.at(i));
    b(i) = cat.b.wavefunction(grid.at(i));
  }
  const cplx w = cat.c * std::exp(I * cat.phi);
  CMat k = a * a.adjoint() + b * b.adjoint() + w * (a * b.adjoint()) + std::conj(w) * (b * a.adjoint());
  if (normalized) k /= cat.trace();
  return k;
}

PhaseSpaceGrid wigner(const CMat& kernel, const UniformAxis& position_grid, const UniformAxis& p_axis,
                      int x_stride) {
  position_grid.validate("position");
  p_axis.validate("momentum");
  if (kernel.rows() != position_grid.n || kernel.cols() != position_grid.n)
    throw ConfigError("wigner: kernel size does not match the position grid");
  if (x_stride < 1) throw ConfigError("wigner: x_stride must be positive");
  const double dx = position_grid.step();
  const double nyquist = pi * hbar / (2.0 * dx);
  if (std::max(std::abs(p_axis.lo), std::abs(p_axis.hi)) >= nyquist)
    throw ConfigError("wigner: momentum range exceeds the Nyquist limit pi hbar/(2 dx) = " +
                      std::to_string(nyquist));

  const int nx = (position_grid.n - 1) / x_stride + 1;
  PhaseSpaceGrid g;
  g.x = {position_grid.lo, position_grid.at((nx - 1) * x_stride), nx};
  g.p = p_axis;
  g.values = RMat::Zero(nx, p_axis.n);
  for (int ix = 0; ix < nx; ++ix) {
    const int i = ix * x_stride;
    const int kmax = std::min(i, position_grid.n - 1 - i);
    for (int jp = 0; jp < p_axis.n; ++jp) {
      const double p = p_axis.at(jp);
      cplx s = kernel(i, i);
      for (int k = 1; k <= kmax; ++k) {
        const double y = k * dx;
        const cplx e = std::exp(-2.0 * I * p * y / hbar);
        s += e * kernel(i + k, i - k) + std::conj(e) * kernel(i - k, i + k);
      }
      g.values(ix, jp) = (s * dx).real() / (pi * hbar);
    }
  }
  finish(g);
  return g;
}

PhaseSpaceGrid husimi(const CMat& kernel, const UniformAxis& position_grid, const UniformAxis& x_axis,
                      const UniformAxis& p_axis, double width) {
  position_grid.validate("position");
  x_axis.validate("x");
  p_axis.validate("momentum");
  if (kernel.rows() != position_grid.n || kernel.cols() != position_grid.n)
    throw ConfigError("husimi: kernel size does not match the position grid");
  const double dx = position_grid.step();
  PhaseSpaceGrid g;
  g.x = x_axis;
  g.p = p_axis;
  g.values = RMat::Zero(x_axis.n, p_axis.n);
  CVec phi(position_grid.n);
  for (int i = 0; i < x_axis.n; ++i)
    for (int j = 0; j < p_axis.n; ++j) {
      const GaussianLabel probe{x_axis.at(i), p_axis.at(j), width, 1.0};
      for (int k = 0; k < position_grid.n; ++k) phi(k) = probe.wavefunction(position_grid.at(k));
      const cplx q = phi.dot(kernel * phi) * dx * dx;
      g.values(i, j) = q.real() / (2.0 * pi * hbar);
    }
  finish(g);
  return g;
}

double wigner_interference_at(const CatState& cat, double x, double p) {
  const double xa = cat.x_center(), pa = cat.p_center();
  const double xd = cat.x_separation(), pd = cat.p_separation();
  const double arg = cat.phi + (xa * pd - pa * xd) / (2.0 * hbar) + xd * (pa - p) / hbar - pd * (xa - x) / hbar;
  return 2.0 * cat.c / (pi * hbar) * phase_gaussian(x, p, xa, pa, cat.a.width) * std::cos(arg);
}

double wigner_cat_at(const CatState& cat, double x, double p, bool normalized) {
  const double w = cat.a.width;
  const double v = (phase_gaussian(x, p, cat.a.x, cat.a.p, w) + phase_gaussian(x, p, cat.b.x, cat.b.p, w)) /
                       (pi * hbar) +
                   wigner_interference_at(cat, x, p);
  return normalized ? v / cat.trace() : v;
}

PhaseSpaceGrid wigner_cat(const CatState& cat, const UniformAxis& x_axis, const UniformAxis& p_axis,
                          bool normalized) {
  cat.validate();
  x_axis.validate("x");
  p_axis.validate("momentum");
  check_cat_resolution(cat, x_axis, p_axis);
  PhaseSpaceGrid g;
  g.x = x_axis;
  g.p = p_axis;
  g.values.resize(x_axis.n, p_axis.n);
  for (int i = 0; i < x_axis.n; ++i)
    for (int j = 0; j < p_axis.n; ++j) g.values(i, j) = wigner_cat_at(cat, x_axis.at(i), p_axis.at(j), normalized);
  finish(g);
  return g;
}

double husimi_cat_at(const CatState& cat, double x, double p, bool normalized) {
  const GaussianLabel probe{x, p, cat.a.width, cat.a.mass};
  const cplx oa = overlap(probe, cat.a);
  const cplx ob = overlap(probe, cat.b);
  const double v =
      (std::norm(oa) + std::norm(ob) + 2.0 * cat.c * std::real(std::exp(I * cat.phi) * oa * std::conj(ob))) /
      (2.0 * pi * hbar);
  return normalized ? v / cat.trace() : v;
}

PhaseSpaceGrid husimi_cat(const CatState& cat, const UniformAxis& x_axis, const UniformAxis& p_axis,
                          bool normalized) {
  cat.validate();
  x_axis.validate("x");
  p_axis.validate("momentum");
  PhaseSpaceGrid g;
  g.x = x_axis;
  g.p = p_axis;
  g.values.resize(x_axis.n, p_axis.n);
  for (int i = 0; i < x_axis.n; ++i)
    for (int j = 0; j < p_axis.n; ++j) g.values(i, j) = husimi_cat_at(cat, x_axis.at(i), p_axis.at(j), normalized);
  finish(g);
  return g;
}

double wigner_overlap(const PhaseSpaceGrid& w1, const PhaseSpaceGrid& w2) {
  if (w1.values.rows() != w2.values.rows() || w1.values.cols() != w2.values.cols())
    throw ConfigError("wigner_overlap: grids differ");
  PhaseSpaceGrid prod = w1;
  prod.values = w1.values.cwiseProduct(w2.values);
  return 2.0 * pi * hbar * prod.integral();
}

}  // namespace qmeas
