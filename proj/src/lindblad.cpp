#include "embedlab/lindblad.hpp"

#include <cmath>

namespace embedlab {

Lindbladian::Lindbladian(CMatrix hamiltonian, std::vector<CMatrix> kraus_ops)
    : h_(std::move(hamiltonian)), kraus_(std::move(kraus_ops)) {
  if (h_.rows() != h_.cols())
    throw DimensionError("Lindbladian: H must be square");
  if (h_.rows() < 1) throw DimensionError("Lindbladian: H must be nonempty");
  const double dev = (h_ - h_.adjoint()).cwiseAbs().maxCoeff();
  if (dev > 1e-10)
    throw ContractViolation("Lindbladian: H deviates from Hermitian by " +
                            std::to_string(dev));
  for (const CMatrix& a : kraus_)
    if (a.rows() != h_.rows() || a.cols() != h_.cols())
      throw DimensionError("Lindbladian: Kraus operator shape mismatch");
}

Superoperator build_generator(const Lindbladian& l) {
  const int d = l.dim();
  const CMatrix id = CMatrix::Identity(d, d);
  const Complex i_unit(0.0, 1.0);
  CMatrix m = -i_unit * (kron(l.hamiltonian(), id) -
                         kron(id, l.hamiltonian().transpose()));
  for (const CMatrix& a : l.kraus_ops()) {
    const CMatrix ada = a.adjoint() * a;
    m += kron(a, a.conjugate());
    m -= 0.5 * (kron(ada, id) + kron(id, ada.transpose()));
  }
  return {d, std::move(m)};
}

Superoperator channel_at(const Lindbladian& l, double t) {
  if (t < 0.0) throw DomainError("channel_at: negative time");
  const Superoperator g = build_generator(l);
  return {g.dim, expm(g.matrix * t)};
}

CMatrix choi_matrix(const Superoperator& s) {
  const int d = s.dim;
  if (s.matrix.rows() != d * d || s.matrix.cols() != d * d)
    throw DimensionError("choi_matrix: superoperator shape mismatch");
  CMatrix j(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k)
      for (int jj = 0; jj < d; ++jj)
        for (int ll = 0; ll < d; ++ll)
          j(i * d + k, jj * d + ll) = s.matrix(i * d + jj, k * d + ll);
  return j;
}

CMatrix apply_superop(const Superoperator& s, const CMatrix& x) {
  if (x.rows() != s.dim || x.cols() != s.dim)
    throw DimensionError("apply_superop: operand shape mismatch");
  return unvec(s.matrix * vec(x), s.dim, s.dim);
}

Superoperator superop_of_unitary(const CMatrix& u) {
  if (u.rows() != u.cols())
    throw DimensionError("superop_of_unitary: matrix must be square");
  return {static_cast<int>(u.rows()), kron(u, u.conjugate())};
}

GklsReport validate_gkls(const Superoperator& s, GklsMode mode) {
  const int d = s.dim;
  if (s.matrix.rows() != d * d || s.matrix.cols() != d * d)
    throw DimensionError("validate_gkls: superoperator shape mismatch");
  GklsReport r{true, 0.0, 0.0, ""};
  const CVector vec_id = vec(CMatrix::Identity(d, d));

  if (mode == GklsMode::Generator) {
    r.trace_residual = (vec_id.adjoint() * s.matrix).cwiseAbs().maxCoeff();
    if (r.trace_residual > 1e-10) {
      r.pass = false;
      r.detail = "generator does not annihilate vec(I) from the left";
    }
    // Conditional complete positivity via a short-time step.
    const Superoperator step{d, expm(s.matrix * 1e-6)};
    const CMatrix j = choi_matrix(step);
    r.min_choi_eigenvalue = eig_hermitian((j + j.adjoint()) / 2.0, 1e-6).values.minCoeff();
    if (r.min_choi_eigenvalue < -1e-9) {
      r.pass = false;
      if (!r.detail.empty()) r.detail += "; ";
      r.detail += "short-time Choi matrix has a negative eigenvalue";
    }
    return r;
  }

  const CMatrix j = choi_matrix(s);
  r.min_choi_eigenvalue = eig_hermitian((j + j.adjoint()) / 2.0, 1e-6).values.minCoeff();
  if (r.min_choi_eigenvalue < -1e-9) {
    r.pass = false;
    r.detail = "Choi matrix has a negative eigenvalue";
  }
  r.trace_residual =
      ((vec_id.adjoint() * s.matrix).transpose() - vec_id.conjugate())
          .cwiseAbs()
          .maxCoeff();
  if (r.trace_residual > 1e-9) {
    r.pass = false;
    if (!r.detail.empty()) r.detail += "; ";
    r.detail += "channel is not trace preserving";
  }
  return r;
}

RMatrix classical_action_unchecked(const Superoperator& channel) {
  const int d = channel.dim;
  RMatrix t(d, d);
  for (int j = 0; j < d; ++j) {
    // Column j of T is the diagonal of E(|j><j|).
    CVector in = CVector::Zero(d * d);
    in(j * d + j) = 1.0;
    const CVector out = channel.matrix * in;
    for (int i = 0; i < d; ++i) t(i, j) = out(i * d + i).real();
  }
  return t;
}

StochasticMatrix classical_action(const Superoperator& channel) {
  const GklsReport r = validate_gkls(channel, GklsMode::Channel);
  if (!r.pass)
    throw ContractViolation("classical_action: invalid channel: " + r.detail);
  return StochasticMatrix::validate(classical_action_unchecked(channel), 1e-9);
}

Lindbladian lift_classical(const RMatrix& rate_matrix) {
  if (rate_matrix.rows() != rate_matrix.cols())
    throw DimensionError("lift_classical: rate matrix must be square");
  const int d = static_cast<int>(rate_matrix.rows());
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < d; ++i)
      if (i != j && rate_matrix(i, j) < -1e-10)
        throw ValidationError("lift_classical: negative rate at (" +
                              std::to_string(i) + "," + std::to_string(j) + ")");
    const double sum = rate_matrix.col(j).sum();
    if (std::abs(sum) > 1e-10)
      throw ValidationError("lift_classical: column " + std::to_string(j) +
                            " sums to " + std::to_string(sum));
  }
  std::vector<CMatrix> kraus;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      if (i == j) continue;
      const double rate = std::max(0.0, rate_matrix(i, j));
      if (rate == 0.0) continue;
      CMatrix a = CMatrix::Zero(d, d);
      a(i, j) = std::sqrt(rate);
      kraus.push_back(std::move(a));
    }
  return Lindbladian(CMatrix::Zero(d, d), std::move(kraus));
}

Lindbladian hamiltonian_from_unitary(const CMatrix& u) {
  if (u.rows() != u.cols())
    throw DimensionError("hamiltonian_from_unitary: matrix must be square");
  const int d = static_cast<int>(u.rows());
  const double unit_dev =
      (u.adjoint() * u - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
  if (unit_dev > 1e-10)
    throw ContractViolation("hamiltonian_from_unitary: U^dag U deviates from I by " +
                            std::to_string(unit_dev));
  // U is normal, so its Schur form is diagonal up to rounding and the Schur
  // basis is an orthonormal eigenbasis. This stays stable under degeneracies.
  Eigen::ComplexSchur<CMatrix> schur(u);
  if (schur.info() != Eigen::Success)
    throw ContractViolation("hamiltonian_from_unitary: Schur decomposition failed");
  const CMatrix& q = schur.matrixU();
  CMatrix h = CMatrix::Zero(d, d);
  for (int k = 0; k < d; ++k) {
    double theta = std::arg(schur.matrixT()(k, k));
    if (theta <= -M_PI + 1e-12) theta = M_PI;  // principal branch, -pi -> +pi
    h -= theta * (q.col(k) * q.col(k).adjoint());
  }
  return Lindbladian((h + h.adjoint()) / 2.0, {});
}

Lindbladian embed_in_dimension(const Lindbladian& l, int dim) {
  const int d0 = l.dim();
  if (dim < d0)
    throw DimensionError("embed_in_dimension: target smaller than source");
  CMatrix h = CMatrix::Zero(dim, dim);
  h.topLeftCorner(d0, d0) = l.hamiltonian();
  std::vector<CMatrix> kraus;
  for (const CMatrix& a : l.kraus_ops()) {
    CMatrix b = CMatrix::Zero(dim, dim);
    b.topLeftCorner(d0, d0) = a;
    kraus.push_back(std::move(b));
  }
  return Lindbladian(std::move(h), std::move(kraus));
}

Lindbladian column_copy_generator(const Lindbladian& l_r,
                                  const std::map<int, int>& column_map,
                                  double gamma) {
  const int d = l_r.dim();
  if (!(gamma > 0.0))
    throw ValidationError("column_copy_generator: gamma must be positive");
  if (column_map.empty()) return l_r;
  const int d_prime = d - static_cast<int>(column_map.size());
  if (d_prime < 1)
    throw ValidationError("column_copy_generator: column map covers everything");
  int expected = d_prime;
  for (const auto& [j, i] : column_map) {
    if (j != expected)
      throw ValidationError("column_copy_generator: mapped columns must be exactly the top range");
    if (i < 0 || i >= d_prime)
      throw ValidationError("column_copy_generator: image " + std::to_string(i) +
                            " outside the retained block");
    ++expected;
  }
  // l_r must act trivially outside the retained block.
  const auto block_supported = [&](const CMatrix& m) {
    double outside = 0.0;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        if (i >= d_prime || j >= d_prime) outside = std::max(outside, std::abs(m(i, j)));
    return outside <= 1e-12;
  };
  if (!block_supported(l_r.hamiltonian()))
    throw ValidationError("column_copy_generator: H acts outside the retained block");
  for (const CMatrix& a : l_r.kraus_ops())
    if (!block_supported(a))
      throw ValidationError("column_copy_generator: Kraus operator acts outside the retained block");

  std::vector<CMatrix> kraus = l_r.kraus_ops();
  const double root = std::sqrt(gamma);
  for (const auto& [j, i] : column_map) {
    CMatrix a = CMatrix::Zero(d, d);
    a(i, j) = root;
    kraus.push_back(std::move(a));
  }
  return Lindbladian(l_r.hamiltonian(), std::move(kraus));
}

}  // namespace embedlab
