#include "embedlab/matcore.hpp"

#include <algorithm>
#include <cmath>

namespace embedlab {

namespace {

// Degree-13 Pade numerator coefficients (denominator uses alternating signs).
constexpr double kPade13[] = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
    1187353796428800.0,  129060195264000.0,   10559470521600.0,
    670442572800.0,      33522128640.0,       1323241920.0,
    40840800.0,          960960.0,            16380.0,
    182.0,               1.0};

CMatrix pade13(const CMatrix& a) {
  const Eigen::Index n = a.rows();
  const CMatrix id = CMatrix::Identity(n, n);
  const CMatrix a2 = a * a;
  const CMatrix a4 = a2 * a2;
  const CMatrix a6 = a2 * a4;
  const CMatrix u =
      a * (a6 * (kPade13[13] * a6 + kPade13[11] * a4 + kPade13[9] * a2) +
           kPade13[7] * a6 + kPade13[5] * a4 + kPade13[3] * a2 +
           kPade13[1] * id);
  const CMatrix v =
      a6 * (kPade13[12] * a6 + kPade13[10] * a4 + kPade13[8] * a2) +
      kPade13[6] * a6 + kPade13[4] * a4 + kPade13[2] * a2 + kPade13[0] * id;
  return (v - u).partialPivLu().solve(v + u);
}

}  // namespace

CMatrix expm(const CMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("expm: matrix must be square");
  if (m.rows() == 0) return m;
  const double norm1 = m.cwiseAbs().colwise().sum().maxCoeff();
  if (!std::isfinite(norm1)) throw DomainError("expm: non-finite entries");
  int squarings = 0;
  if (norm1 > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm1 / 0.5)));
  CMatrix r = pade13(m / std::pow(2.0, squarings));
  for (int i = 0; i < squarings; ++i) r = r * r;
  return r;
}

RMatrix expm_real(const RMatrix& m) {
  return expm(m.cast<Complex>()).real();
}

HermitianEigen eig_hermitian(const CMatrix& m, double hermiticity_tol) {
  if (m.rows() != m.cols())
    throw DimensionError("eig_hermitian: matrix must be square");
  const double dev = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (dev > hermiticity_tol)
    throw ContractViolation("eig_hermitian: input deviates from Hermitian by " +
                            std::to_string(dev));
  Eigen::SelfAdjointEigenSolver<CMatrix> solver((m + m.adjoint()) / 2.0);
  if (solver.info() != Eigen::Success)
    throw ContractViolation("eig_hermitian: eigensolver failed to converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CVector vec(const CMatrix& x) {
  CVector v(x.rows() * x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j) v(i * x.cols() + j) = x(i, j);
  return v;
}

CMatrix unvec(const CVector& v, Eigen::Index rows, Eigen::Index cols) {
  if (v.size() != rows * cols)
    throw DimensionError("unvec: vector length does not match target shape");
  CMatrix x(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) x(i, j) = v(i * cols + j);
  return x;
}

CMatrix partial_trace(const CMatrix& m, Eigen::Index dim_first,
                      Eigen::Index dim_second, Subsystem traced_out) {
  if (m.rows() != m.cols() || m.rows() != dim_first * dim_second)
    throw DimensionError("partial_trace: shape does not factor as requested");
  if (traced_out == Subsystem::Second) {
    CMatrix r = CMatrix::Zero(dim_first, dim_first);
    for (Eigen::Index a = 0; a < dim_first; ++a)
      for (Eigen::Index c = 0; c < dim_first; ++c)
        for (Eigen::Index b = 0; b < dim_second; ++b)
          r(a, c) += m(a * dim_second + b, c * dim_second + b);
    return r;
  }
  CMatrix r = CMatrix::Zero(dim_second, dim_second);
  for (Eigen::Index b = 0; b < dim_second; ++b)
    for (Eigen::Index d = 0; d < dim_second; ++d)
      for (Eigen::Index a = 0; a < dim_first; ++a)
        r(b, d) += m(a * dim_second + b, a * dim_second + d);
  return r;
}

DensityMatrix DensityMatrix::validated(CMatrix m) {
  if (m.rows() != m.cols())
    throw ValidationError("density matrix must be square");
  if (m.rows() == 0) throw ValidationError("density matrix must be nonempty");
  const double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (herm > 1e-12)
    throw ValidationError("density matrix not Hermitian, deviation " +
                          std::to_string(herm));
  const double tr_dev = std::abs(m.trace() - Complex(1.0, 0.0));
  if (tr_dev > 1e-12)
    throw ValidationError("density matrix trace differs from 1 by " +
                          std::to_string(tr_dev));
  Eigen::SelfAdjointEigenSolver<CMatrix> solver((m + m.adjoint()) / 2.0);
  if (solver.eigenvalues().minCoeff() < -1e-10)
    throw ValidationError("density matrix has eigenvalue " +
                          std::to_string(solver.eigenvalues().minCoeff()));
  return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::pure(const CVector& amplitudes) {
  const double n = amplitudes.norm();
  if (n == 0.0) throw ValidationError("pure state amplitudes are all zero");
  const CVector psi = amplitudes / n;
  return DensityMatrix(psi * psi.adjoint());
}

DensityMatrix DensityMatrix::basis_state(int dim, int index) {
  if (dim < 1 || index < 0 || index >= dim)
    throw DimensionError("basis_state: index out of range");
  CVector e = CVector::Zero(dim);
  e(index) = 1.0;
  return DensityMatrix(e * e.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
  if (dim < 1) throw DimensionError("maximally_mixed: dim must be positive");
  return DensityMatrix(CMatrix::Identity(dim, dim) / static_cast<double>(dim));
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim())
    throw DimensionError("trace_distance: dimension mismatch");
  const HermitianEigen e = eig_hermitian(rho.matrix() - sigma.matrix(), 1e-10);
  return 0.5 * e.values.cwiseAbs().sum();
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim())
    throw DimensionError("fidelity: dimension mismatch");
  const HermitianEigen er = eig_hermitian(rho.matrix(), 1e-10);
  // Clamp small negative eigenvalues so the square root stays real.
  const RVector sq = er.values.cwiseMax(0.0).cwiseSqrt();
  const CMatrix sqrt_rho =
      er.vectors * sq.asDiagonal() * er.vectors.adjoint();
  const CMatrix inner = sqrt_rho * sigma.matrix() * sqrt_rho;
  const HermitianEigen ei = eig_hermitian((inner + inner.adjoint()) / 2.0, 1e-8);
  const double root_sum = ei.values.cwiseMax(0.0).cwiseSqrt().sum();
  return root_sum * root_sum;
}

double mixedness(const DensityMatrix& rho) {
  const double purity = (rho.matrix() * rho.matrix()).trace().real();
  return std::sqrt(std::max(0.0, 1.0 - purity));
}

double concurrence_2xn(const CMatrix& coeffs) {
  if (coeffs.rows() != 2 || coeffs.cols() < 1)
    throw DimensionError("concurrence_2xn: expected a 2 x N coefficient matrix");
  const double norm_dev = std::abs(coeffs.norm() - 1.0);
  if (norm_dev > 1e-12)
    throw ContractViolation("concurrence_2xn: coefficients not unit norm, off by " +
                            std::to_string(norm_dev));
  double s = 0.0;
  for (Eigen::Index j = 0; j < coeffs.cols(); ++j)
    for (Eigen::Index k = j + 1; k < coeffs.cols(); ++k)
      s += std::norm(coeffs(0, j) * coeffs(1, k) - coeffs(1, j) * coeffs(0, k));
  return 2.0 * std::sqrt(s);
}

}  // namespace embedlab
