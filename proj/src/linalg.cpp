#include "qmeas/linalg.hpp"

#include <cmath>
#include <sstream>

namespace qmeas {

StateVector::StateVector(CVec amplitudes, bool normalize) : amp_(std::move(amplitudes)) {
  if (amp_.size() == 0) throw ConfigError("state vector must have positive dimension");
  if (!amp_.allFinite()) throw NumericError("state vector has non-finite amplitudes");
  if (normalize) {
    const double n = amp_.norm();
    if (n == 0.0) throw ConfigError("cannot normalize the zero vector");
    amp_ /= n;
  }
}

StateVector StateVector::basis(int dim, int k) {
  if (k < 0 || k >= dim) throw ConfigError("basis index out of range");
  CVec v = CVec::Zero(dim);
  v(k) = 1.0;
  return StateVector(std::move(v), false);
}

DensityOperator::DensityOperator(CMat m, const DensityTolerances& tol) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() == 0) throw ConfigError("density matrix must be square");
  if (!m_.allFinite()) throw NumericError("density matrix has non-finite entries");
  std::ostringstream why;
  if (hermiticity_error() > tol.hermitian) why << "not Hermitian (" << hermiticity_error() << ") ";
  if (std::abs(trace() - 1.0) > tol.trace) why << "trace " << trace() << " ";
  if (min_eigenvalue() < tol.min_eigenvalue) why << "negative eigenvalue " << min_eigenvalue() << " ";
  if (purity() > 1.0 + tol.purity) why << "purity " << purity() << " ";
  if (!why.str().empty()) throw NumericError("invalid density operator: " + why.str());
}

DensityOperator DensityOperator::pure(const StateVector& psi) {
  return unchecked(psi.amplitudes() * psi.amplitudes().adjoint());
}

DensityOperator DensityOperator::unchecked(CMat m) {
  DensityOperator d;
  d.m_ = std::move(m);
  return d;
}

double DensityOperator::purity() const {
  // Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho.
  return m_.cwiseAbs2().sum();
}

double DensityOperator::min_eigenvalue() const {
  const CMat h = 0.5 * (m_ + m_.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double DensityOperator::hermiticity_error() const { return (m_ - m_.adjoint()).cwiseAbs().maxCoeff(); }

DensityOperator partial_trace(const DensityOperator& rho, int dim_a, int dim_b, int keep) {
  if (dim_a <= 0 || dim_b <= 0 || dim_a * dim_b != rho.dim())
    throw ConfigError("partial trace: dimension " + std::to_string(rho.dim()) + " does not factor as " +
                      std::to_string(dim_a) + "x" + std::to_string(dim_b));
  if (keep != 0 && keep != 1) throw ConfigError("partial trace: keep must be 0 or 1");
  const CMat& m = rho.matrix();
  if (keep == 0) {
    CMat r = CMat::Zero(dim_a, dim_a);
    for (int i = 0; i < dim_a; ++i)
      for (int j = 0; j < dim_a; ++j)
        for (int k = 0; k < dim_b; ++k) r(i, j) += m(i * dim_b + k, j * dim_b + k);
    return DensityOperator::unchecked(std::move(r));
  }
  CMat r = CMat::Zero(dim_b, dim_b);
  for (int i = 0; i < dim_b; ++i)
    for (int j = 0; j < dim_b; ++j)
      for (int k = 0; k < dim_a; ++k) r(i, j) += m(k * dim_b + i, k * dim_b + j);
  return DensityOperator::unchecked(std::move(r));
}

CMat commutator(const CMat& a, const CMat& b) { return a * b - b * a; }

bool is_hermitian(const CMat& m, double tol) {
  return m.rows() == m.cols() && (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace qmeas
