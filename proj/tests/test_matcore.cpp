#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "embedlab/errors.hpp"
#include "embedlab/matcore.hpp"
#include "oracles.hpp"

using namespace embedlab;

namespace {
const Complex kI(0.0, 1.0);

CMatrix sigma_x() {
  CMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
}  // namespace

TEST_CASE("expm of zero is the identity to machine precision") {
  const CMatrix e = expm(CMatrix::Zero(3, 3));
  CHECK((e - CMatrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("expm of a diagonal matrix exponentiates the diagonal") {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = std::log(2.0);
  m(1, 1) = std::log(3.0);
  const CMatrix e = expm(m);
  CHECK(std::abs(e(0, 0) - 2.0) < 1e-14);
  CHECK(std::abs(e(1, 1) - 3.0) < 1e-14);
  CHECK(std::abs(e(0, 1)) < 1e-15);
  CHECK(std::abs(e(1, 0)) < 1e-15);
}

TEST_CASE("expm of i(pi/2) sigma_x gives i sigma_x") {
  const CMatrix e = expm(kI * (M_PI / 2.0) * sigma_x());
  CHECK((e - kI * sigma_x()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("expm matches the power series on random matrices") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const int d = 2 + static_cast<int>(rng() % 4);
    CMatrix m = oracles::random_complex(d, d, rng);
    m *= 4.0 / std::max(1.0, m.cwiseAbs().maxCoeff() * d);  // keep ||m|| <= ~5
    const CMatrix e = expm(m);
    const CMatrix ref = oracles::expm_series(m);
    const double rel =
        (e - ref).cwiseAbs().maxCoeff() / std::max(1.0, ref.cwiseAbs().maxCoeff());
    CHECK(rel < 1e-12);
  }
}

TEST_CASE("expm inverse and semigroup properties") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 25; ++trial) {
    const int d = 2 + static_cast<int>(rng() % 3);
    CMatrix m = oracles::random_complex(d, d, rng);
    m *= 3.0 / std::max(1.0, m.cwiseAbs().maxCoeff() * d);
    CHECK((expm(m) * expm(-m) - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff() <
          1e-10);
    std::uniform_real_distribution<double> u(0.1, 2.0);
    const double s = u(rng), t = u(rng);
    CHECK((expm((s + t) * m) - expm(s * m) * expm(t * m)).cwiseAbs().maxCoeff() <
          1e-10);
  }
}

TEST_CASE("expm rejects non-square input") {
  CHECK_THROWS_AS(expm(CMatrix::Zero(2, 3)), DimensionError);
}

TEST_CASE("expm_real agrees with the complex kernel") {
  std::mt19937_64 rng(13);
  std::normal_distribution<double> n(0.0, 1.0);
  RMatrix m(3, 3);
  for (int i = 0; i < 9; ++i) m(i / 3, i % 3) = n(rng);
  const RMatrix e = expm_real(m);
  const CMatrix ec = expm(m.cast<Complex>());
  CHECK((e.cast<Complex>() - ec).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("eig_hermitian identity and Pauli spectra") {
  const HermitianEigen id = eig_hermitian(CMatrix::Identity(2, 2));
  CHECK(id.values(0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(id.values(1) == doctest::Approx(1.0).epsilon(1e-14));

  const HermitianEigen sx = eig_hermitian(sigma_x());
  CHECK(sx.values(0) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(sx.values(1) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("eig_hermitian reconstructs and is unitary on random input") {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 30; ++trial) {
    const int d = 2 + static_cast<int>(rng() % 5);
    const CMatrix h = oracles::random_hermitian(d, rng);
    const HermitianEigen e = eig_hermitian(h);
    const CMatrix recon =
        e.vectors * e.values.asDiagonal().toDenseMatrix().cast<Complex>() *
        e.vectors.adjoint();
    CHECK((recon - h).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((e.vectors.adjoint() * e.vectors - CMatrix::Identity(d, d))
              .cwiseAbs()
              .maxCoeff() < 1e-10);
    for (int i = 0; i + 1 < d; ++i) CHECK(e.values(i) <= e.values(i + 1));
  }
}

TEST_CASE("eig_hermitian rejects a non-Hermitian matrix") {
  CMatrix m(2, 2);
  m << 0, 1, 0, 0;
  CHECK_THROWS_AS(eig_hermitian(m), ContractViolation);
}

TEST_CASE("vec uses the row-wise convention") {
  const CVector v = vec(CMatrix::Identity(2, 2));
  CHECK(v(0) == Complex(1, 0));
  CHECK(v(1) == Complex(0, 0));
  CHECK(v(2) == Complex(0, 0));
  CHECK(v(3) == Complex(1, 0));
}

TEST_CASE("vec(AXB) equals kron(A, B^T) vec(X) and unvec inverts vec") {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 20; ++trial) {
    const CMatrix a = oracles::random_complex(3, 3, rng);
    const CMatrix x = oracles::random_complex(3, 3, rng);
    const CMatrix b = oracles::random_complex(3, 3, rng);
    const CVector lhs = vec(a * x * b);
    const CVector rhs = kron(a, b.transpose()) * vec(x);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((unvec(vec(x), 3, 3) - x).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("partial_trace recovers factors of a product state") {
  const CMatrix rho0 = DensityMatrix::basis_state(2, 0).matrix();
  const CMatrix joint = kron(rho0, rho0);
  CHECK((partial_trace(joint, 2, 2, Subsystem::Second) - rho0)
            .cwiseAbs()
            .maxCoeff() < 1e-15);

  std::mt19937_64 rng(16);
  const CMatrix r1 = oracles::random_density(2, rng);
  const CMatrix r2 = oracles::random_density(3, rng);
  const CMatrix prod = kron(r1, r2);
  CHECK((partial_trace(prod, 2, 3, Subsystem::Second) - r1)
            .cwiseAbs()
            .maxCoeff() < 1e-12);
  CHECK((partial_trace(prod, 2, 3, Subsystem::First) - r2)
            .cwiseAbs()
            .maxCoeff() < 1e-12);
  CHECK_THROWS_AS(partial_trace(prod, 4, 2, Subsystem::First), DimensionError);
}

TEST_CASE("DensityMatrix validation rejects bad inputs and accepts states") {
  CMatrix nonherm(2, 2);
  nonherm << 0.5, 0.1, 0.3, 0.5;
  CHECK_THROWS_AS(DensityMatrix::validated(nonherm), ValidationError);

  CHECK_THROWS_AS(DensityMatrix::validated(2.0 * CMatrix::Identity(2, 2)),
                  ValidationError);

  CMatrix negative(2, 2);
  negative << 1.5, 0, 0, -0.5;
  CHECK_THROWS_AS(DensityMatrix::validated(negative), ValidationError);

  std::mt19937_64 rng(17);
  const DensityMatrix ok = DensityMatrix::validated(oracles::random_density(3, rng));
  CHECK(ok.dim() == 3);

  CVector raw(2);
  raw << 3.0, 4.0;  // pure() normalizes
  const DensityMatrix p = DensityMatrix::pure(raw);
  CHECK(std::abs(p.matrix().trace().real() - 1.0) < 1e-14);
  CHECK(std::abs(p.matrix()(0, 0).real() - 9.0 / 25.0) < 1e-14);
}

TEST_CASE("trace_distance on reference pairs") {
  const DensityMatrix e0 = DensityMatrix::basis_state(2, 0);
  const DensityMatrix e1 = DensityMatrix::basis_state(2, 1);
  const DensityMatrix mixed = DensityMatrix::maximally_mixed(2);
  CHECK(trace_distance(e0, e0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(trace_distance(e0, e1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(trace_distance(e0, mixed) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK_THROWS_AS(
      trace_distance(e0, DensityMatrix::maximally_mixed(3)), DimensionError);
}

TEST_CASE("trace_distance obeys the triangle inequality") {
  std::mt19937_64 rng(18);
  for (int trial = 0; trial < 40; ++trial) {
    const DensityMatrix a = DensityMatrix::validated(oracles::random_density(3, rng));
    const DensityMatrix b = DensityMatrix::validated(oracles::random_density(3, rng));
    const DensityMatrix c = DensityMatrix::validated(oracles::random_density(3, rng));
    CHECK(trace_distance(a, c) <=
          trace_distance(a, b) + trace_distance(b, c) + 1e-12);
  }
}

TEST_CASE("fidelity and mixedness on reference pairs") {
  const DensityMatrix e0 = DensityMatrix::basis_state(2, 0);
  const DensityMatrix e1 = DensityMatrix::basis_state(2, 1);
  const DensityMatrix mixed = DensityMatrix::maximally_mixed(2);
  CHECK(fidelity(e0, e0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fidelity(e0, e1) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(fidelity(e0, mixed) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(mixedness(e0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(mixedness(mixed) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
}

TEST_CASE("concurrence: product states, Bell state, marginal oracle") {
  std::mt19937_64 rng(19);

  // product state: rank-1 coefficient matrix
  CVector a(2), b(4);
  a << Complex(0.6, 0.2), Complex(0.5, -0.4);
  b << Complex(0.3, 0.1), Complex(-0.2, 0.7), Complex(0.4, 0), Complex(0.1, 0.2);
  CMatrix f = a * b.transpose();
  f /= std::sqrt(f.cwiseAbs2().sum());
  CHECK(concurrence_2xn(f) == doctest::Approx(0.0).epsilon(1e-12));

  CMatrix bell = CMatrix::Zero(2, 2);
  bell(0, 0) = bell(1, 1) = 1.0 / std::sqrt(2.0);
  CHECK(concurrence_2xn(bell) == doctest::Approx(1.0).epsilon(1e-12));

  for (int trial = 0; trial < 30; ++trial) {
    CMatrix g = oracles::random_complex(2, 4, rng);
    g /= std::sqrt(g.cwiseAbs2().sum());
    CHECK(std::abs(concurrence_2xn(g) - oracles::concurrence_from_marginal(g)) <
          1e-10);
  }

  CHECK_THROWS_AS(concurrence_2xn(CMatrix::Identity(2, 2)), ContractViolation);
}
