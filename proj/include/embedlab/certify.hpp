#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "embedlab/lindblad.hpp"
#include "embedlab/matcore.hpp"
#include "embedlab/stochastic.hpp"

namespace embedlab {

struct QubitRegionBounds {
  double f;
  double g;
};

// Boundary functions of the analytically excluded qubit region:
//   f(a) = 2*sqrt(2)*a^0.25 + sqrt(a(2-a)) + a^0.9
//        + 0.01*(4*sqrt(a)+a^0.45) / (1 - (8*sqrt(a)+a^0.45))
//        + 2*sqrt(8*sqrt(a)+a^0.45)
//   g(a) = (2-a)*(2a + a^0.1)
// Requires a in [0,1] with 1 - (8*sqrt(a)+a^0.45) > 0; both bounds are 0 at
// a = 0 (fractional powers of 0 resolve to 0 by continuity).
QubitRegionBounds qubit_region_bounds(double a);

struct QubitRegionVerdict {
  bool excluded;  // certified not quantum-embeddable
  double a, b;    // diagonal of the tested matrix
  bool swapped;   // true when the (b,a) branch fired
  // Bounds evaluated for the deciding branch (or the (a,b) branch when
  // neither fires and it is in domain).
  std::optional<double> f_value;
  std::optional<double> g_value;
};

// Analytic exclusion test for 2x2 matrices with diagonal (a,b): excluded
// when a <= 1e-6 and f(a)(2-f(a)) < b < 1-g(a), strictly, or the same with
// a and b swapped.
QubitRegionVerdict qubit_region_test(const StochasticMatrix& t);

// Combinatorial constant of the inner-product decay bound:
//   C(d) = (d^4+1)!/2 * d^(d^4+4).
mpz_class decay_constant_exact(int d);      // d <= 3, guarded
std::string decay_constant_display(int d);  // exact digits d <= 3, factored form beyond
long double decay_constant_log(int d);      // ln C(d), any d >= 1

struct DecayGridPoint {
  double t;
  double lhs;            // Tr[E_{t_f+t}(rho1) E_{t_f+t}(rho2)]
  double log_rhs;        // ln( C(d)^ceil((d^4-1)t/t_f) * eps(2-eps) )
  bool holds;
};

struct DecayReport {
  bool hypothesis_met;       // D(E_{t_f}(rho1), E_{t_f}(rho2)) >= 1 - eps
  double measured_distance;
  std::vector<DecayGridPoint> points;
  bool pass;                 // hypothesis met and every grid point holds
};

// Checks Tr[E_{t_f+t}(rho1) E_{t_f+t}(rho2)] <= C(d)^ceil((d^4-1)t/t_f) * eps(2-eps)
// over the given nonnegative offsets t. Comparison runs in log space; the
// right side overflows doubles already for small exponents.
DecayReport inner_product_decay_check(const Lindbladian& l,
                                      const DensityMatrix& rho1,
                                      const DensityMatrix& rho2, double t_f,
                                      double eps,
                                      const std::vector<double>& t_offsets);

struct PurityReport {
  bool holds;                    // lambda_max(rho(t)) >= 1 - eps on the grid
  double min_top_eigenvalue;
  std::optional<double> violated_at;  // first grid time that fails
  // Two-step floor: re-evolving the closest pure state from any grid time
  // t1 by any t2 with t1 + t2 <= t_f keeps lambda_max >= 1 - 2*eps.
  bool composition_ok;
  double composition_min;
};

// Tracks the top eigenvalue of the evolved pure state on a uniform grid of
// `steps` points over [0, t_f] (steps >= 2, default 64), and when the
// eps-floor holds, asserts the derived two-step floor.
PurityReport purity_preservation_check(const Lindbladian& l,
                                       const CVector& psi, double t_f,
                                       double eps, int steps = 64);

struct DistanceBounds {
  double lower;     // 1 - Tr(rho sigma) - M(rho) M(sigma)
  double distance;  // D(rho, sigma)
  double upper;     // sqrt(1 - F(rho, sigma))
  bool holds;       // lower <= distance <= upper within 1e-10
};

DistanceBounds distance_bounds_check(const DensityMatrix& rho,
                                     const DensityMatrix& sigma);

struct KrylovDependence {
  int n;             // minimal order: A^n v in span{v, ..., A^(n-1) v}
  CVector lambdas;   // coefficients, A^n v = sum lambda_i A^i v
  double l1_norm;
  double bound;      // n*(n+1)!/2 * max(opnorm, opnorm^n)
  bool bound_ok;
  double residual;   // ||A^n v - sum lambda_i A^i v|| / ||A^n v||
  bool borderline;   // residual above 1e-8; reported, never silently accepted
};

// Finds the minimal Krylov dependence by Gram-Schmidt with
// reorthogonalization; a new power is dependent when its orthogonal
// remainder drops below rank_tol times the running Gram norm. n <= d always.
KrylovDependence krylov_dependence(const CMatrix& a, const CVector& v,
                                   double rank_tol = 1e-10);

}  // namespace embedlab
