#include "embedlab/io.hpp"

#include <charconv>
#include <fstream>

namespace embedlab {

using nlohmann::json;

MatrixFile matrix_file_from_json(const json& j, const std::string& origin) {
  const auto fail = [&](const std::string& what) -> MatrixFile {
    throw ValidationError(origin + ": " + what);
  };
  if (!j.is_object()) return fail("top level must be a JSON object");
  if (!j.contains("d") || !j["d"].is_number_integer())
    return fail("missing integer field \"d\"");
  if (!j.contains("convention") || !j["convention"].is_string())
    return fail("missing mandatory string field \"convention\"");
  if (!j.contains("entries_row_major") || !j["entries_row_major"].is_array())
    return fail("missing array field \"entries_row_major\"");

  MatrixFile f;
  f.d = j["d"].get<int>();
  if (f.d < 1) return fail("\"d\" must be positive");
  f.convention = j["convention"].get<std::string>();
  if (f.convention != "column-stochastic" && f.convention != "column-rate")
    return fail("unknown convention \"" + f.convention +
                "\" (expected \"column-stochastic\" or \"column-rate\")");
  const auto& entries = j["entries_row_major"];
  if (static_cast<int>(entries.size()) != f.d * f.d)
    return fail("expected " + std::to_string(f.d * f.d) +
                " entries, got " + std::to_string(entries.size()));
  f.entries.resize(f.d, f.d);
  for (int i = 0; i < f.d; ++i)
    for (int jj = 0; jj < f.d; ++jj) {
      const auto& e = entries[i * f.d + jj];
      if (!e.is_number())
        return fail("entry " + std::to_string(i * f.d + jj) + " is not a number");
      f.entries(i, jj) = e.get<double>();
    }
  f.tolerance = 1e-9;
  if (j.contains("tolerance")) {
    if (!j["tolerance"].is_number() || !(j["tolerance"].get<double>() > 0.0))
      return fail("\"tolerance\" must be a positive number");
    f.tolerance = j["tolerance"].get<double>();
  }
  return f;
}

MatrixFile read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(path + ": cannot open file");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ValidationError(path + ": JSON parse error: " + e.what());
  }
  return matrix_file_from_json(j, path);
}

StochasticMatrix to_stochastic(const MatrixFile& f) {
  if (f.convention != "column-stochastic")
    throw ValidationError("matrix file has convention \"" + f.convention +
                          "\" where column-stochastic is required");
  return StochasticMatrix::validate(f.entries, f.tolerance);
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

json complex_pairs_row_major(const CMatrix& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index jj = 0; jj < m.cols(); ++jj)
      out.push_back(json::array({m(i, jj).real(), m(i, jj).imag()}));
  return out;
}

CMatrix complex_pairs_to_matrix(const json& j, int d, const std::string& what) {
  if (!j.is_array() || static_cast<int>(j.size()) != d * d)
    throw ValidationError(what + ": expected " + std::to_string(d * d) +
                          " [re,im] pairs");
  CMatrix m(d, d);
  for (int i = 0; i < d; ++i)
    for (int jj = 0; jj < d; ++jj) {
      const auto& p = j[i * d + jj];
      if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
        throw ValidationError(what + ": entry " + std::to_string(i * d + jj) +
                              " is not a [re,im] pair");
      m(i, jj) = Complex(p[0].get<double>(), p[1].get<double>());
    }
  return m;
}

}  // namespace

json lindbladian_to_json(const Lindbladian& l) {
  json out;
  out["dim"] = l.dim();
  out["H"] = complex_pairs_row_major(l.hamiltonian());
  json kraus = json::array();
  for (const CMatrix& a : l.kraus_ops()) kraus.push_back(complex_pairs_row_major(a));
  out["kraus"] = std::move(kraus);
  return out;
}

Lindbladian lindbladian_from_json(const json& j) {
  if (!j.is_object() || !j.contains("dim") || !j["dim"].is_number_integer())
    throw ValidationError("lindbladian JSON: missing integer field \"dim\"");
  const int d = j["dim"].get<int>();
  if (d < 1) throw ValidationError("lindbladian JSON: \"dim\" must be positive");
  if (!j.contains("H")) throw ValidationError("lindbladian JSON: missing field \"H\"");
  const CMatrix h = complex_pairs_to_matrix(j["H"], d, "lindbladian JSON H");
  std::vector<CMatrix> kraus;
  if (j.contains("kraus")) {
    if (!j["kraus"].is_array())
      throw ValidationError("lindbladian JSON: \"kraus\" must be an array");
    for (size_t k = 0; k < j["kraus"].size(); ++k)
      kraus.push_back(complex_pairs_to_matrix(j["kraus"][k], d,
                                              "lindbladian JSON kraus[" +
                                                  std::to_string(k) + "]"));
  }
  return Lindbladian(h, std::move(kraus));
}

json search_result_to_json(const SearchResult& r) {
  json out;
  out["best_objective"] = r.best_objective;
  json params = json::array();
  for (Eigen::Index i = 0; i < r.best_params.size(); ++i)
    params.push_back(r.best_params(i));
  out["best_params"] = std::move(params);
  out["verdict"] = to_string(r.verdict);
  out["restarts_used"] = r.restarts_used;
  out["seed"] = r.seed;
  return out;
}

json stochastic_to_json(const StochasticMatrix& t) {
  json out;
  out["d"] = t.dim();
  json entries = json::array();
  for (int i = 0; i < t.dim(); ++i)
    for (int jj = 0; jj < t.dim(); ++jj) entries.push_back(t(i, jj));
  out["entries_row_major"] = std::move(entries);
  out["convention"] = "column-stochastic";
  return out;
}

}  // namespace embedlab
