#include "embedlab/certify.hpp"

#include <algorithm>
#include <cmath>

namespace embedlab {

QubitRegionBounds qubit_region_bounds(double a) {
  if (!(a >= 0.0) || a > 1.0)
    throw DomainError("qubit_region_bounds: a must lie in [0,1]");
  const double root = std::sqrt(a);
  const double denom = 1.0 - (8.0 * root + std::pow(a, 0.45));
  if (denom <= 0.0)
    throw DomainError("qubit_region_bounds: 1 - (8 sqrt(a) + a^0.45) is not positive");
  QubitRegionBounds b;
  b.f = 2.0 * std::sqrt(2.0) * std::pow(a, 0.25) + std::sqrt(a * (2.0 - a)) +
        std::pow(a, 0.9) +
        0.01 * (4.0 * root + std::pow(a, 0.45)) / denom +
        2.0 * std::sqrt(8.0 * root + std::pow(a, 0.45));
  b.g = (2.0 - a) * (2.0 * a + std::pow(a, 0.1));
  return b;
}

QubitRegionVerdict qubit_region_test(const StochasticMatrix& t) {
  if (t.dim() != 2)
    throw DimensionError("qubit_region_test: only dimension 2 is supported");
  QubitRegionVerdict v{false, t(0, 0), t(1, 1), false, std::nullopt, std::nullopt};

  const auto branch = [](double a, double b, QubitRegionVerdict* out,
                         bool swapped) {
    if (a > 1e-6) return false;
    const QubitRegionBounds fb = qubit_region_bounds(a);
    out->f_value = fb.f;
    out->g_value = fb.g;
    out->swapped = swapped;
    return fb.f * (2.0 - fb.f) < b && b < 1.0 - fb.g;
  };

  if (branch(v.a, v.b, &v, false)) {
    v.excluded = true;
    return v;
  }
  if (branch(v.b, v.a, &v, true)) {
    v.excluded = true;
    return v;
  }
  return v;
}

namespace {

void require_decay_dim(int d) {
  if (d < 1) throw DimensionError("decay constant: d must be positive");
}

}  // namespace

mpz_class decay_constant_exact(int d) {
  require_decay_dim(d);
  if (d > 3)
    throw ResourceGuardError(
        "decay_constant_exact: materialized only for d <= 3; use the factored "
        "display or the log form");
  const unsigned long d4 = static_cast<unsigned long>(d) * d * d * d;
  mpz_class fact;
  mpz_fac_ui(fact.get_mpz_t(), d4 + 1);
  mpz_class pw;
  mpz_ui_pow_ui(pw.get_mpz_t(), d, d4 + 4);
  return fact / 2 * pw;
}

std::string decay_constant_display(int d) {
  require_decay_dim(d);
  if (d <= 3) return decay_constant_exact(d).get_str();
  const long d4 = static_cast<long>(d) * d * d * d;
  return "(" + std::to_string(d4 + 1) + ")!/2 * " + std::to_string(d) + "^" +
         std::to_string(d4 + 4);
}

long double decay_constant_log(int d) {
  require_decay_dim(d);
  const long double d4 = static_cast<long double>(d) * d * d * d;
  return lgammal(d4 + 2.0L) - logl(2.0L) + (d4 + 4.0L) * logl(static_cast<long double>(d));
}

DecayReport inner_product_decay_check(const Lindbladian& l,
                                      const DensityMatrix& rho1,
                                      const DensityMatrix& rho2, double t_f,
                                      double eps,
                                      const std::vector<double>& t_offsets) {
  if (!(t_f > 0.0)) throw DomainError("inner_product_decay_check: t_f must be positive");
  if (eps < 0.0 || eps > 1.0)
    throw DomainError("inner_product_decay_check: eps must lie in [0,1]");
  const int d = l.dim();
  if (rho1.dim() != d || rho2.dim() != d)
    throw DimensionError("inner_product_decay_check: state dimension mismatch");

  const Superoperator gen = build_generator(l);
  const auto evolve = [&](const DensityMatrix& rho, double t) {
    return unvec(expm(gen.matrix * t) * vec(rho.matrix()), d, d);
  };

  DecayReport report;
  const CMatrix s1 = evolve(rho1, t_f);
  const CMatrix s2 = evolve(rho2, t_f);
  const CMatrix delta = (s1 + s1.adjoint() - s2 - s2.adjoint()) / 2.0;
  report.measured_distance =
      0.5 * eig_hermitian(delta, 1e-8).values.cwiseAbs().sum();
  report.hypothesis_met = report.measured_distance >= 1.0 - eps - 1e-12;
  report.pass = report.hypothesis_met;
  if (!report.hypothesis_met) return report;

  const long double log_c = decay_constant_log(d);
  const long double d4m1 = static_cast<long double>(d) * d * d * d - 1.0L;
  for (const double t : t_offsets) {
    if (t < 0.0) throw DomainError("inner_product_decay_check: negative grid offset");
    DecayGridPoint p;
    p.t = t;
    const CMatrix a = evolve(rho1, t_f + t);
    const CMatrix b = evolve(rho2, t_f + t);
    p.lhs = (a * b).trace().real();
    const long double k = ceill(d4m1 * static_cast<long double>(t) / t_f);
    const long double log_eps_term =
        (eps > 0.0) ? logl(static_cast<long double>(eps) * (2.0L - eps))
                    : -INFINITY;
    const long double log_rhs = k * log_c + log_eps_term;
    p.log_rhs = static_cast<double>(log_rhs);
    if (p.lhs <= 1e-12) {
      p.holds = true;  // right side is never negative
    } else if (std::isinf(static_cast<double>(log_rhs)) && log_rhs < 0) {
      p.holds = false;  // eps = 0 but a visibly positive inner product
    } else {
      p.holds = logl(static_cast<long double>(p.lhs)) <= log_rhs + 1e-9L;
    }
    if (!p.holds) report.pass = false;
    report.points.push_back(p);
  }
  return report;
}

PurityReport purity_preservation_check(const Lindbladian& l,
                                       const CVector& psi, double t_f,
                                       double eps, int steps) {
  if (steps < 2) throw DomainError("purity_preservation_check: need at least 2 grid points");
  if (!(t_f > 0.0)) throw DomainError("purity_preservation_check: t_f must be positive");
  if (eps < 0.0 || eps > 1.0)
    throw DomainError("purity_preservation_check: eps must lie in [0,1]");
  const int d = l.dim();
  if (psi.size() != d)
    throw DimensionError("purity_preservation_check: state dimension mismatch");

  const Superoperator gen = build_generator(l);
  std::vector<CMatrix> channels(steps);
  for (int k = 0; k < steps; ++k)
    channels[k] = expm(gen.matrix * (t_f * k / (steps - 1)));

  const CVector psi0 = psi / psi.norm();
  const CMatrix rho0 = psi0 * psi0.adjoint();

  PurityReport report{true, 1.0, std::nullopt, true, 1.0};
  std::vector<CVector> top_vecs(steps);
  for (int k = 0; k < steps; ++k) {
    const CMatrix rho_t = unvec(channels[k] * vec(rho0), d, d);
    const HermitianEigen e = eig_hermitian((rho_t + rho_t.adjoint()) / 2.0, 1e-8);
    const double lam = e.values(d - 1);
    top_vecs[k] = e.vectors.col(d - 1);
    report.min_top_eigenvalue = std::min(report.min_top_eigenvalue, lam);
    if (lam < 1.0 - eps - 1e-12 && !report.violated_at) {
      report.holds = false;
      report.violated_at = t_f * k / (steps - 1);
    }
  }
  if (!report.holds) {
    report.composition_ok = false;
    report.composition_min = 0.0;
    return report;
  }

  // Two-step floor: the nearest pure state at t1, evolved for t2, stays
  // (2 eps)-pure whenever t1 + t2 <= t_f.
  for (int k1 = 0; k1 < steps; ++k1) {
    for (int k2 = 0; k1 + k2 < steps; ++k2) {
      const CMatrix seed = top_vecs[k1] * top_vecs[k1].adjoint();
      const CMatrix rho = unvec(channels[k2] * vec(seed), d, d);
      const HermitianEigen e = eig_hermitian((rho + rho.adjoint()) / 2.0, 1e-8);
      const double lam = e.values(d - 1);
      report.composition_min = std::min(report.composition_min, lam);
      if (lam < 1.0 - 2.0 * eps - 1e-9) report.composition_ok = false;
    }
  }
  return report;
}

DistanceBounds distance_bounds_check(const DensityMatrix& rho,
                                     const DensityMatrix& sigma) {
  DistanceBounds b;
  const double overlap = (rho.matrix() * sigma.matrix()).trace().real();
  b.lower = 1.0 - overlap - mixedness(rho) * mixedness(sigma);
  b.distance = trace_distance(rho, sigma);
  b.upper = std::sqrt(std::max(0.0, 1.0 - fidelity(rho, sigma)));
  b.holds = b.lower <= b.distance + 1e-10 && b.distance <= b.upper + 1e-10;
  return b;
}

KrylovDependence krylov_dependence(const CMatrix& a, const CVector& v,
                                   double rank_tol) {
  if (a.rows() != a.cols()) throw DimensionError("krylov_dependence: matrix must be square");
  const int d = static_cast<int>(a.rows());
  if (v.size() != d) throw DimensionError("krylov_dependence: vector length mismatch");
  if (v.norm() == 0.0) throw ValidationError("krylov_dependence: zero vector");

  std::vector<CVector> powers{v};       // w_i = A^i v
  std::vector<CVector> ortho;           // orthonormal basis of the span
  CMatrix r_factor = CMatrix::Zero(d, d);  // powers[j] = ortho * r_factor.col(j)
  double gram_norm = v.norm();

  int n = -1;
  CVector last_coeffs;  // coefficients of the dependent power in the ortho basis
  for (int i = 0;; ++i) {
    CVector w = powers.back();
    gram_norm = std::max(gram_norm, w.norm());
    CVector c = CVector::Zero(static_cast<Eigen::Index>(ortho.size()));
    CVector r = w;
    for (int pass = 0; pass < 2; ++pass) {
      for (size_t q = 0; q < ortho.size(); ++q) {
        const Complex proj = ortho[q].dot(r);
        c(q) += proj;
        r -= proj * ortho[q];
      }
    }
    const bool dependent = r.norm() <= rank_tol * gram_norm;
    if (dependent || i == d) {
      n = i;
      last_coeffs = c;
      break;
    }
    r_factor.col(i).head(ortho.size()) = c;
    r_factor(static_cast<Eigen::Index>(ortho.size()), i) = r.norm();
    ortho.push_back(r / r.norm());
    powers.push_back(a * w);
  }

  KrylovDependence out;
  out.n = n;
  out.lambdas = CVector::Zero(n);
  if (n > 0) {
    // Back-substitution on the upper-triangular factor, then one refinement
    // sweep against the stored powers.
    const auto solve_upper = [&](const CVector& rhs) {
      CVector x = CVector::Zero(n);
      for (int i = n - 1; i >= 0; --i) {
        Complex s = rhs(i);
        for (int j = i + 1; j < n; ++j) s -= r_factor(i, j) * x(j);
        x(i) = s / r_factor(i, i);
      }
      return x;
    };
    out.lambdas = solve_upper(last_coeffs.head(n));
    for (int sweep = 0; sweep < 2; ++sweep) {
      CVector resid = powers[n];
      for (int j = 0; j < n; ++j) resid -= out.lambdas(j) * powers[j];
      CVector proj = CVector::Zero(n);
      for (int q = 0; q < n; ++q) proj(q) = ortho[q].dot(resid);
      out.lambdas += solve_upper(proj);
    }
  }

  CVector resid = powers[n];
  for (int j = 0; j < n; ++j) resid -= out.lambdas(j) * powers[j];
  const double target_norm = powers[n].norm();
  out.residual = (target_norm > 0.0) ? resid.norm() / target_norm : resid.norm();
  out.borderline = out.residual > 1e-8;
  out.l1_norm = out.lambdas.cwiseAbs().sum();

  const double opnorm =
      Eigen::JacobiSVD<CMatrix>(a).singularValues().maxCoeff();
  mpz_class fact;
  mpz_fac_ui(fact.get_mpz_t(), static_cast<unsigned long>(n) + 1);
  const double half_fact = mpz_get_d(fact.get_mpz_t()) / 2.0;
  out.bound = n * half_fact * std::max(opnorm, std::pow(opnorm, n));
  out.bound_ok = out.l1_norm <= out.bound * (1.0 + 1e-9) + 1e-12;
  return out;
}

}  // namespace embedlab
