#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "embedlab/matcore.hpp"

namespace embedlab {

// Column-stochastic matrix: entries in [0,1], every column sums to 1.
// Entry (i,j) is the transition probability j -> i.
class StochasticMatrix {
 public:
  // Checks entries lie in [-tolerance, 1+tolerance] and column sums are
  // within tolerance of 1, then clamps entries to [0,1]. Error messages
  // name the offending entry or column.
  static StochasticMatrix validate(const RMatrix& entries,
                                   double tolerance = 1e-9);

  int dim() const { return static_cast<int>(entries_.rows()); }
  const RMatrix& entries() const { return entries_; }
  double tolerance() const { return tolerance_; }
  double operator()(int i, int j) const { return entries_(i, j); }

 private:
  StochasticMatrix(RMatrix entries, double tolerance)
      : entries_(std::move(entries)), tolerance_(tolerance) {}
  RMatrix entries_;
  double tolerance_;
};

struct NecessaryConditionReport {
  bool pass;
  double diagonal_product;
  double determinant;
  std::string failure;  // empty when pass
};

// Necessary condition for classical embeddability:
//   prod_i T_ii >= det T >= 0.
// Failure rules out a classical generator but says nothing about quantum
// embeddability.
NecessaryConditionReport necessary_classical_condition(
    const StochasticMatrix& t);

struct ClassicalEmbedding2x2 {
  bool embeddable;
  RMatrix generator;   // rate matrix L with expm(L*time) reproducing t
  double time;
  // Set when a+b = 1: t is reproduced only as a large-rate limit, and the
  // returned generator approximates it to well below entry tolerance.
  bool closure_point;
};

// Decides classical embeddability of a 2x2 column-stochastic matrix with
// diagonal (a, b): embeddable iff a + b >= 1 (within 1e-12), with the
// closed-form generator log(s)/(s-1) * (T - I), s = a+b-1.
ClassicalEmbedding2x2 classical_embeddable_2x2(const StochasticMatrix& t);

// Lazily enumerates all d^d extreme (0/1) column-stochastic matrices in
// base-d counter order over column images, column 0 most significant.
class ExtremeEnumerator {
 public:
  explicit ExtremeEnumerator(int dim);  // dim in [1,8], guarded
  std::optional<StochasticMatrix> next();
  std::optional<std::vector<int>> next_map();
  static std::uint64_t total(int dim);  // d^d

 private:
  int dim_;
  std::uint64_t index_ = 0;
  std::uint64_t count_;
};

StochasticMatrix extreme_from_map(const std::vector<int>& column_to_row);

// Column images of an extreme matrix. Throws ContractViolation when some
// column is not a basis vector within the matrix tolerance.
std::vector<int> extreme_map_of(const StochasticMatrix& t);

struct ExtremeObstruction {
  int start;              // column whose image is not in the core
  std::vector<int> path;  // start, phi(start), ... , first core node
};

struct ExtremeClassification {
  bool is_extreme;
  std::vector<int> core;   // nodes on cycles of the column-image map, sorted
  std::map<int, int> tails;  // non-core node -> its image
  bool embeddable;         // true iff every non-core node maps into the core
  std::optional<ExtremeObstruction> obstruction;
};

// Non-extreme input reports is_extreme = false instead of throwing; the
// remaining fields are then empty.
ExtremeClassification classify_extreme(const StochasticMatrix& t);

// Number of quantum-embeddable extreme matrices in dimension d:
//   sum_{m=1}^{d} C(d,m) * m! * m^(d-m).
mpz_class count_quantum_embeddable_extreme(int dim);

// Certificate of non-embeddability built from deterministic structure:
// an invariantly permuted set I0, columns I1 collapsing onto a single fixed
// row i0 of I0, and a witness column supported entirely on I1. Any channel
// reproducing this pattern would have to clone distinguishable states.
struct StructuralCertificate {
  std::vector<int> invariant_set;        // I0, sorted
  std::map<int, int> permutation_on_i0;  // column image restricted to I0
  int target_row;                        // i0, element of I0
  std::vector<int> collapsing_set;       // I1, sorted, disjoint from I0
  int witness_column;                    // outside I0 and I1
};

// Searches all unions of deterministic cycles as I0 candidates, builds I1
// greedily per fixed i0, and scans witness columns over the complement.
// Deterministic: smallest certificate in enumeration order wins.
// Guarded to dim <= 12.
std::optional<StructuralCertificate> structural_certificate(
    const StochasticMatrix& t);

// Re-checks every clause of the certificate against t. Reasons for failure
// land in *why when provided.
bool verify_structural_certificate(const StructuralCertificate& c,
                                   const StochasticMatrix& t,
                                   std::string* why = nullptr);

}  // namespace embedlab
