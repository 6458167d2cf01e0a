#pragma once

#include <string>

#include "json.hpp"

#include "embedlab/lindblad.hpp"
#include "embedlab/optimizer.hpp"
#include "embedlab/stochastic.hpp"

namespace embedlab {

// Matrix input file:
//   {"d": 2, "entries_row_major": [..d*d..],
//    "convention": "column-stochastic", "tolerance": 1e-9}
// "convention" is mandatory; "tolerance" is optional. A rate matrix for the
// classical-lift constructor uses convention "column-rate" (off-diagonals
// >= 0, columns summing to 0).
struct MatrixFile {
  int d;
  RMatrix entries;
  std::string convention;
  double tolerance;
};

// Throws ValidationError with a diagnostic naming the file and problem.
MatrixFile read_matrix_file(const std::string& path);
MatrixFile matrix_file_from_json(const nlohmann::json& j, const std::string& origin);

StochasticMatrix to_stochastic(const MatrixFile& f);  // requires column-stochastic

// Shortest round-trip decimal form; used everywhere output must be
// byte-stable across runs.
std::string format_double(double v);

nlohmann::json lindbladian_to_json(const Lindbladian& l);
Lindbladian lindbladian_from_json(const nlohmann::json& j);

nlohmann::json search_result_to_json(const SearchResult& r);

nlohmann::json stochastic_to_json(const StochasticMatrix& t);

}  // namespace embedlab
