#pragma once

#include <Eigen/Dense>
#include <complex>

#include "embedlab/errors.hpp"

namespace embedlab {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

// Matrix exponential by scaling and squaring with a degree-13 Pade kernel.
// The input is scaled so its 1-norm is at most 0.5 before the kernel runs,
// which keeps the kernel error far below 1e-12 relative. Exact for M = 0.
CMatrix expm(const CMatrix& m);
RMatrix expm_real(const RMatrix& m);

struct HermitianEigen {
  RVector values;   // ascending
  CMatrix vectors;  // columns, unitary
};

// Eigendecomposition of a Hermitian matrix. Rejects inputs whose
// anti-Hermitian part exceeds hermiticity_tol in max-abs norm.
HermitianEigen eig_hermitian(const CMatrix& m, double hermiticity_tol = 1e-10);

CMatrix kron(const CMatrix& a, const CMatrix& b);

// Row-wise vectorization: vec(X)(i*cols + j) = X(i,j), so that
// vec(A X B) = kron(A, B.transpose()) * vec(X). All superoperators in this
// library live in this convention.
CVector vec(const CMatrix& x);
CMatrix unvec(const CVector& v, Eigen::Index rows, Eigen::Index cols);

enum class Subsystem { First, Second };

// Partial trace of an operator on a bipartite space of shape
// dim_first x dim_second, tracing out the named subsystem. Composite index
// is (a * dim_second + b).
CMatrix partial_trace(const CMatrix& m, Eigen::Index dim_first,
                      Eigen::Index dim_second, Subsystem traced_out);

class DensityMatrix {
 public:
  // Enforces Hermiticity within 1e-12, unit trace within 1e-12, and
  // spectrum >= -1e-10. Throws ValidationError otherwise.
  static DensityMatrix validated(CMatrix m);
  static DensityMatrix pure(const CVector& amplitudes);  // normalizes
  static DensityMatrix basis_state(int dim, int index);
  static DensityMatrix maximally_mixed(int dim);

  int dim() const { return static_cast<int>(mat_.rows()); }
  const CMatrix& matrix() const { return mat_; }

 private:
  explicit DensityMatrix(CMatrix m) : mat_(std::move(m)) {}
  CMatrix mat_;
};

// Half the trace norm of rho - sigma. Lies in [0,1] for valid states.
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

// Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2, in [0,1].
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

// sqrt(1 - Tr rho^2): zero exactly for pure states.
double mixedness(const DensityMatrix& rho);

// Concurrence of a pure state of a qubit paired with an N-level system,
// given as a unit-norm 2 x N coefficient matrix f:
//   2 * sqrt(sum_{j<k} |f(0,j) f(1,k) - f(1,j) f(0,k)|^2)
// which equals 2*sqrt(lambda(1-lambda)) for a qubit marginal eigenvalue
// lambda. Requires ||f||_2 = 1 within 1e-12.
double concurrence_2xn(const CMatrix& coeffs);

}  // namespace embedlab
