#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "json.hpp"

#include "embedlab/io.hpp"
#include "embedlab/lindblad.hpp"
#include "embedlab/optimizer.hpp"
#include "embedlab/stochastic.hpp"

namespace embedlab {

enum class CheckVerdict {
  ClassicallyEmbeddable,  // exact classical generator exists
  QuantumEmbeddable,      // certified or found at the requested delta
  NotQuantumEmbeddable,   // analytic exclusion certificate attached
  Inconclusive,           // no certificate either way
};

std::string to_string(CheckVerdict v);

// Shell contract: 0 embeddable (classical or quantum), 1 certified not,
// 2 inconclusive.
int exit_code(CheckVerdict v);

struct CheckOptions {
  bool run_search = true;  // false: analytic layers only
  int restarts = 64;
  double delta = 1e-4;
  std::uint64_t seed = 0;
  Parameterization qubit_param = Parameterization::general_qubit();
};

struct CheckReport {
  CheckVerdict verdict;
  nlohmann::json report;  // stages in pipeline order plus the deciding certificate
};

// Layered decision pipeline, first decisive layer wins:
//   1. classical necessary condition (diagnostic only; never decisive)
//   2. exact classical test (closed form for d = 2, identity for d > 2)
//   3. qubit exclusion region (d = 2)
//   4. structural certificate, re-verified before it is reported
//   5. extreme classification, with a constructive witness when embeddable
//   6. numeric search (skipped when run_search is false)
// A negative verdict always carries a machine-verifiable certificate.
CheckReport run_check(const StochasticMatrix& t, const CheckOptions& opts = {});

// Constructive embedding witness: a generator, an evolution time, and the
// achieved objective max_ij |T_ij - <i|E(|j><j|)|i>| against the target.
struct ConstructionWitness {
  Lindbladian lindbladian;
  double time;
  std::optional<double> gamma;  // set when a column-copy coupling is used
  double objective;
  std::string method;
};

nlohmann::json construction_to_json(const ConstructionWitness& w);

// Exact witness for permutation targets (objective 0); for symmetric 2x2
// bistochastic targets uses the orthogonal square root. Throws
// ValidationError for anything else.
ConstructionWitness construct_unitary_embedding(const StochasticMatrix& t);

// Witness from a classical rate matrix. Accepts a 2x2 stochastic target
// (closed-form rate, tf ignored) or a rate-matrix file (convention
// "column-rate", evolved for tf with the target taken as expm(rate*tf)).
ConstructionWitness construct_classical_lift(const MatrixFile& f, double tf);

// Witness for block targets [R | copies]: finds the largest leading block R
// whose trailing columns duplicate leading columns, builds a generator
// reproducing R at tf (permutation or embeddable 2x2 block), and drives the
// duplicates with the column-copy coupling at strength gamma. Throws
// ValidationError when the structure or the R route is missing.
ConstructionWitness construct_copy_column(const StochasticMatrix& t,
                                          double gamma, double tf);

// Witness for embeddable extreme targets: relabels so the cyclic core
// leads, takes the core permutation as R, and copies each tail column from
// the core column with the same image. Throws ContractViolation when t is
// not extreme or not embeddable.
ConstructionWitness construct_extreme_embedding(const StochasticMatrix& t,
                                                double gamma = 1e3);

}  // namespace embedlab
