#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <string>

#include "embedlab/lindblad.hpp"
#include "embedlab/stochastic.hpp"

namespace embedlab {

enum class ParamKind { GeneralQubit, ReducedQubit, GeneralD };

// Real-vector coordinates for generator families. Positive quantities
// (gamma, t) enter through their logarithm so the search space is
// unconstrained.
//
// GeneralQubit, 34 reals: [h | 32 reals = 4x4 complex G row-major (re,im)
//   | ln t]. H = [[cos h, sin h],[sin h, cos h]]; the Choi matrix of the
//   dissipative part is G G^dag, so the Kraus operators are the row-wise
//   unfoldings of the columns of G.
// ReducedQubit, 4 reals: [alpha | beta | ln gamma | ln t]. H = sigma_x and a
//   single Kraus operator sqrt(gamma) |out><in| with
//   |out> = (cos alpha, i sin alpha), |in> = (cos beta, i sin beta).
// GeneralD, d^2 + 2d^4 + 1 reals: [d diagonal entries of H, then (re,im)
//   per upper off-diagonal pair | d^2 x d^2 complex G row-major | ln t].
struct Parameterization {
  ParamKind kind;
  int d;

  static Parameterization general_qubit() { return {ParamKind::GeneralQubit, 2}; }
  static Parameterization reduced_qubit() { return {ParamKind::ReducedQubit, 2}; }
  static Parameterization general_d(int d);

  int param_count() const;
};

struct DecodedGenerator {
  Lindbladian lindbladian;
  double time;
};

DecodedGenerator decode(const RVector& params, const Parameterization& p);

// Max-abs entrywise distance between t and the classical action of the
// decoded generator run for the decoded time.
double objective(const StochasticMatrix& t, const RVector& params,
                 const Parameterization& p);

struct NelderMeadOptions {
  int max_iterations = 20000;
  double diameter_tol = 1e-10;   // max-norm simplex diameter
  double fspread_tol = 1e-12;    // f(worst) - f(best)
  // Stop as soon as the best value reaches this; off by default.
  double target_f = -std::numeric_limits<double>::infinity();
  double reflect = 1.0;
  double expand = 2.0;
  double contract = 0.5;
  double shrink = 0.5;
};

struct NelderMeadResult {
  RVector x;
  double f;
  int iterations;
  int soft_failures;  // non-finite evaluations recovered by bisecting inward
};

// Deterministic downhill simplex. The initial simplex offsets each
// coordinate by 5% of its value (0.00025 when zero). A vertex where f is
// non-finite is pulled halfway toward the current best until finite.
NelderMeadResult nelder_mead(const std::function<double(const RVector&)>& f,
                             const RVector& x0,
                             const NelderMeadOptions& opts = {});

enum class SearchVerdict { EmbeddableAtDelta, Inconclusive };
std::string to_string(SearchVerdict v);

struct SearchResult {
  double best_objective;
  RVector best_params;
  SearchVerdict verdict;  // EmbeddableAtDelta iff best_objective <= delta
  int restarts_used;
  std::uint64_t seed;
};

// Seeded multistart search. Restart r draws its start point from an RNG
// stream derived from (seed, r) alone, so results are bit-identical for a
// fixed seed and monotone in the restart budget; restarts stop early once
// the best objective reaches delta.
SearchResult embed_search(const StochasticMatrix& t, const Parameterization& p,
                          int restarts = 64, double delta = 1e-4,
                          std::uint64_t seed = 0);

// splitmix64-based stream derivation used for restart and grid-cell seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace embedlab
