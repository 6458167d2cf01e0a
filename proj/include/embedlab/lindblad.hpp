#pragma once

#include <map>
#include <string>
#include <vector>

#include "embedlab/matcore.hpp"
#include "embedlab/stochastic.hpp"

namespace embedlab {

// Generator data (H, {A_k}) for dynamics
//   rho' = -i[H, rho] + sum_k A_k rho A_k^dag - 1/2 {A_k^dag A_k, rho}.
class Lindbladian {
 public:
  // H must be square and Hermitian within 1e-10; every Kraus operator must
  // match its dimension.
  Lindbladian(CMatrix hamiltonian, std::vector<CMatrix> kraus_ops);

  int dim() const { return static_cast<int>(h_.rows()); }
  const CMatrix& hamiltonian() const { return h_; }
  const std::vector<CMatrix>& kraus_ops() const { return kraus_; }

 private:
  CMatrix h_;
  std::vector<CMatrix> kraus_;
};

// A d^2 x d^2 matrix acting on row-vectorized operators.
struct Superoperator {
  int dim;
  CMatrix matrix;
};

// Row-vectorized generator matrix:
//   -i (H (x) I - I (x) H^T)
//   + sum_k A_k (x) conj(A_k)
//   - 1/2 sum_k (A_k^dag A_k (x) I + I (x) (A_k^dag A_k)^T).
// Annihilates vec(I) from the left (trace preservation).
Superoperator build_generator(const Lindbladian& l);

// expm(generator * t). Rejects t < 0.
Superoperator channel_at(const Lindbladian& l, double t);

// Choi matrix of a superoperator in this vectorization:
//   J((i,k),(j,l)) = S((i,j),(k,l)).
CMatrix choi_matrix(const Superoperator& s);

CMatrix apply_superop(const Superoperator& s, const CMatrix& x);

Superoperator superop_of_unitary(const CMatrix& u);

enum class GklsMode { Generator, Channel };

struct GklsReport {
  bool pass;
  double trace_residual;       // |vec(I)^dag S - expected| in max norm
  double min_choi_eigenvalue;  // of S itself (Channel) or of expm(S*1e-6)
  std::string detail;
};

// Generator mode: checks vec(I)^dag S = 0 within 1e-10 and complete
// positivity of the short-time channel expm(S * 1e-6) within -1e-9.
// Channel mode: checks the Choi matrix is PSD within -1e-9 and trace
// preservation within 1e-9.
GklsReport validate_gkls(const Superoperator& s, GklsMode mode);

// Classical action of a channel: T(i,j) = <i| E(|j><j|) |i>. Validates the
// channel first; the result carries tolerance 1e-9.
StochasticMatrix classical_action(const Superoperator& channel);

// Same readout without the channel validation or stochastic construction.
// For hot loops where the channel is valid by construction.
RMatrix classical_action_unchecked(const Superoperator& channel);

// Dissipative lift of a classical rate matrix (off-diagonals >= 0, columns
// summing to 0 within 1e-10): H = 0, Kraus {sqrt(L_ij) |i><j|, i != j}.
// Its classical action at time t equals expm(rate * t) exactly.
Lindbladian lift_classical(const RMatrix& rate_matrix);

// H = i log(U) on the principal branch: eigenphases taken in (-pi, pi],
// a phase at -pi mapped to +pi. Satisfies expm(-i H) = U.
Lindbladian hamiltonian_from_unitary(const CMatrix& u);

// Pads H and Kraus operators with zero rows/columns up to dim.
Lindbladian embed_in_dimension(const Lindbladian& l, int dim);

// Generator whose action copies columns: l_r acts on the top-left block
// of size d' = d - |column_map|, and each mapped column j >= d' is driven
// onto column column_map[j] < d' by the Kraus operator sqrt(gamma)|i_j><j|.
// column_map keys must be exactly {d', ..., d-1}. At large gamma*t the
// classical action approaches the block matrix [R | copies].
Lindbladian column_copy_generator(const Lindbladian& l_r,
                                  const std::map<int, int>& column_map,
                                  double gamma);

}  // namespace embedlab
