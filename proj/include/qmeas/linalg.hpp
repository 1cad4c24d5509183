#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qmeas {

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr cplx I{0.0, 1.0};

// Bad input: maps to exit code 2 at the CLI.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Integrator blow-up, invariant violation, NaN: exit code 1.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class StateVector {
 public:
  StateVector() = default;
  explicit StateVector(CVec amplitudes, bool normalize = true);

  static StateVector basis(int dim, int k);

  const CVec& amplitudes() const { return amp_; }
  int dim() const { return static_cast<int>(amp_.size()); }
  double norm() const { return amp_.norm(); }
  double population(int k) const { return std::norm(amp_(k)); }
  cplx operator()(int k) const { return amp_(k); }

 private:
  CVec amp_;
};

struct DensityTolerances {
  double hermitian = 1e-10;
  double trace = 1e-9;
  double min_eigenvalue = -1e-8;
  double purity = 1e-9;
};

class DensityOperator {
 public:
  DensityOperator() = default;
  // Throws NumericError when the matrix is not a valid state to the given tolerances.
  explicit DensityOperator(CMat m, const DensityTolerances& tol = {});

  static DensityOperator pure(const StateVector& psi);
  // No validation; for integrator internals that validate separately.
  static DensityOperator unchecked(CMat m);

  const CMat& matrix() const { return m_; }
  int dim() const { return static_cast<int>(m_.rows()); }
  cplx operator()(int i, int j) const { return m_(i, j); }
  double trace() const { return m_.trace().real(); }
  double purity() const;
  double min_eigenvalue() const;
  double hermiticity_error() const;

 private:
  CMat m_;
};

// Keeps subsystem 0 (first factor, dimension dim_a) or 1 (second factor).
DensityOperator partial_trace(const DensityOperator& rho, int dim_a, int dim_b, int keep);

CMat commutator(const CMat& a, const CMat& b);

bool is_hermitian(const CMat& m, double tol);

}  // namespace qmeas
