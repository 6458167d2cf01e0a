#include "embedlab/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <string>

namespace embedlab {

StochasticMatrix StochasticMatrix::validate(const RMatrix& entries,
                                            double tolerance) {
  if (entries.rows() != entries.cols())
    throw DimensionError("stochastic matrix must be square");
  if (entries.rows() < 1)
    throw DimensionError("stochastic matrix must be nonempty");
  if (!(tolerance > 0.0))
    throw ValidationError("stochastic tolerance must be positive");
  const int d = static_cast<int>(entries.rows());
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < d; ++i) {
      const double v = entries(i, j);
      if (!std::isfinite(v) || v < -tolerance || v > 1.0 + tolerance)
        throw ValidationError("entry (" + std::to_string(i) + "," +
                              std::to_string(j) + ") = " + std::to_string(v) +
                              " outside [0,1]");
    }
    const double sum = entries.col(j).sum();
    if (std::abs(sum - 1.0) > tolerance)
      throw ValidationError("column " + std::to_string(j) + " sums to " +
                            std::to_string(sum) + ", expected 1");
  }
  RMatrix clamped = entries.cwiseMax(0.0).cwiseMin(1.0);
  return StochasticMatrix(std::move(clamped), tolerance);
}

NecessaryConditionReport necessary_classical_condition(
    const StochasticMatrix& t) {
  const double diag = t.entries().diagonal().prod();
  const double det = t.entries().determinant();
  NecessaryConditionReport r{true, diag, det, ""};
  if (det < -t.tolerance()) {
    r.pass = false;
    r.failure = "determinant is negative";
  } else if (diag < det - t.tolerance()) {
    r.pass = false;
    r.failure = "diagonal product falls below determinant";
  }
  return r;
}

ClassicalEmbedding2x2 classical_embeddable_2x2(const StochasticMatrix& t) {
  if (t.dim() != 2)
    throw DimensionError("classical_embeddable_2x2: only dimension 2 is supported");
  const double a = t(0, 0);
  const double b = t(1, 1);
  const double s = a + b - 1.0;
  ClassicalEmbedding2x2 out{false, RMatrix::Zero(2, 2), 1.0, false};
  if (s < -1e-12) return out;

  out.embeddable = true;
  const RMatrix tmi = t.entries() - RMatrix::Identity(2, 2);
  if (s <= 1e-12) {
    // Boundary a+b = 1: T is rank one and only reachable as a large-rate
    // limit. Rate 50 leaves an entrywise error of order e^-50.
    out.closure_point = true;
    out.generator = 50.0 * tmi;
    return out;
  }
  // T - I has eigenvalues {0, s-1}, so exp(c/(s-1) * (T-I)) = I + (e^c-1)/(s-1)*(T-I);
  // c = log s recovers T at time 1. log1p keeps the coefficient stable near s = 1.
  const double u = s - 1.0;
  const double coeff = (std::abs(u) < 1e-8) ? 1.0 - u / 2.0 : std::log1p(u) / u;
  out.generator = coeff * tmi;
  return out;
}

ExtremeEnumerator::ExtremeEnumerator(int dim) : dim_(dim) {
  if (dim < 1) throw DimensionError("ExtremeEnumerator: dim must be positive");
  if (dim > 8)
    throw ResourceGuardError("ExtremeEnumerator: d^d exceeds the 8^8 guard");
  count_ = total(dim);
}

std::uint64_t ExtremeEnumerator::total(int dim) {
  std::uint64_t n = 1;
  for (int i = 0; i < dim; ++i) n *= static_cast<std::uint64_t>(dim);
  return n;
}

std::optional<std::vector<int>> ExtremeEnumerator::next_map() {
  if (index_ >= count_) return std::nullopt;
  std::vector<int> images(dim_);
  std::uint64_t m = index_;
  for (int j = dim_ - 1; j >= 0; --j) {
    images[j] = static_cast<int>(m % dim_);
    m /= dim_;
  }
  ++index_;
  return images;
}

std::optional<StochasticMatrix> ExtremeEnumerator::next() {
  auto map = next_map();
  if (!map) return std::nullopt;
  return extreme_from_map(*map);
}

StochasticMatrix extreme_from_map(const std::vector<int>& column_to_row) {
  const int d = static_cast<int>(column_to_row.size());
  if (d < 1) throw DimensionError("extreme_from_map: empty image list");
  RMatrix m = RMatrix::Zero(d, d);
  for (int j = 0; j < d; ++j) {
    const int i = column_to_row[j];
    if (i < 0 || i >= d)
      throw ValidationError("extreme_from_map: image " + std::to_string(i) +
                            " of column " + std::to_string(j) + " out of range");
    m(i, j) = 1.0;
  }
  return StochasticMatrix::validate(m);
}

namespace {

// Column images when every column is a basis vector; nullopt (with a
// diagnostic) otherwise.
std::optional<std::vector<int>> extreme_images(const StochasticMatrix& t,
                                               std::string* why) {
  const int d = t.dim();
  const double tol = t.tolerance();
  std::vector<int> images(d, -1);
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < d; ++i) {
      const double v = t(i, j);
      if (std::abs(v - 1.0) <= tol) {
        images[j] = i;
      } else if (v > tol) {
        if (why)
          *why = "matrix is not extreme: entry (" + std::to_string(i) + "," +
                 std::to_string(j) + ") = " + std::to_string(v);
        return std::nullopt;
      }
    }
    if (images[j] < 0) {
      if (why)
        *why = "matrix is not extreme: column " + std::to_string(j) +
               " has no unit entry";
      return std::nullopt;
    }
  }
  return images;
}

}  // namespace

std::vector<int> extreme_map_of(const StochasticMatrix& t) {
  std::string why;
  auto images = extreme_images(t, &why);
  if (!images) throw ContractViolation(why);
  return *std::move(images);
}

namespace {

// Nodes lying on cycles of a total map on {0..d-1}.
std::vector<bool> cycle_nodes(const std::vector<int>& phi) {
  const int d = static_cast<int>(phi.size());
  std::vector<bool> on_cycle(d, false);
  for (int n = 0; n < d; ++n) {
    int x = n;
    for (int step = 0; step < d; ++step) {
      x = phi[x];
      if (x == n) {
        on_cycle[n] = true;
        break;
      }
    }
  }
  return on_cycle;
}

}  // namespace

ExtremeClassification classify_extreme(const StochasticMatrix& t) {
  const auto images = extreme_images(t, nullptr);
  if (!images) {
    ExtremeClassification out;
    out.is_extreme = false;
    out.embeddable = false;
    return out;
  }
  const std::vector<int>& phi = *images;
  const int d = t.dim();
  const std::vector<bool> on_cycle = cycle_nodes(phi);

  ExtremeClassification out;
  out.is_extreme = true;
  out.embeddable = true;
  for (int n = 0; n < d; ++n) {
    if (on_cycle[n]) {
      out.core.push_back(n);
    } else {
      out.tails[n] = phi[n];
    }
  }
  for (int n = 0; n < d; ++n) {
    if (on_cycle[n] || on_cycle[phi[n]]) continue;
    out.embeddable = false;
    if (!out.obstruction) {
      ExtremeObstruction ob;
      ob.start = n;
      int x = n;
      ob.path.push_back(x);
      while (!on_cycle[x]) {
        x = phi[x];
        ob.path.push_back(x);
      }
      out.obstruction = std::move(ob);
    }
  }
  return out;
}

mpz_class count_quantum_embeddable_extreme(int dim) {
  if (dim < 1)
    throw DimensionError("count_quantum_embeddable_extreme: dim must be positive");
  mpz_class total = 0;
  for (int m = 1; m <= dim; ++m) {
    mpz_class term;
    mpz_bin_uiui(term.get_mpz_t(), dim, m);
    mpz_class fact;
    mpz_fac_ui(fact.get_mpz_t(), m);
    mpz_class pw;
    mpz_ui_pow_ui(pw.get_mpz_t(), m, dim - m);
    total += term * fact * pw;
  }
  return total;
}

namespace {

struct DeterministicStructure {
  std::vector<int> det_image;       // -1 when the column is not deterministic
  std::vector<std::vector<int>> cycles;  // sorted members, sorted by min
};

DeterministicStructure deterministic_structure(const StochasticMatrix& t) {
  const int d = t.dim();
  const double tol = t.tolerance();
  DeterministicStructure s;
  s.det_image.assign(d, -1);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i)
      if (std::abs(t(i, j) - 1.0) <= tol) s.det_image[j] = i;

  std::set<std::vector<int>> seen;
  for (int n = 0; n < d; ++n) {
    if (s.det_image[n] < 0) continue;
    // Walk deterministic edges; a return to n closes a cycle.
    std::vector<int> path{n};
    int x = n;
    bool cycle = false;
    for (int step = 0; step < d; ++step) {
      x = s.det_image[x];
      if (x < 0) break;
      if (x == n) {
        cycle = true;
        break;
      }
      if (s.det_image[x] < 0) break;
      path.push_back(x);
    }
    if (!cycle) continue;
    std::sort(path.begin(), path.end());
    seen.insert(path);
  }
  s.cycles.assign(seen.begin(), seen.end());
  return s;
}

}  // namespace

std::optional<StructuralCertificate> structural_certificate(
    const StochasticMatrix& t) {
  const int d = t.dim();
  if (d > 12)
    throw ResourceGuardError(
        "structural_certificate: cycle-union search guarded to dim <= 12");
  const double tol = t.tolerance();
  const DeterministicStructure s = deterministic_structure(t);
  const int nc = static_cast<int>(s.cycles.size());
  if (nc == 0) return std::nullopt;

  for (std::uint32_t mask = 1; mask < (1u << nc); ++mask) {
    std::vector<bool> in_i0(d, false);
    for (int c = 0; c < nc; ++c)
      if (mask & (1u << c))
        for (int n : s.cycles[c]) in_i0[n] = true;

    for (int i0 = 0; i0 < d; ++i0) {
      if (!in_i0[i0]) continue;
      std::vector<int> i1;
      for (int j = 0; j < d; ++j)
        if (!in_i0[j] && std::abs(t(i0, j) - 1.0) <= tol) i1.push_back(j);
      if (i1.empty()) continue;

      std::vector<bool> excluded = in_i0;
      for (int j : i1) excluded[j] = true;
      for (int w = 0; w < d; ++w) {
        if (excluded[w]) continue;
        double sum = 0.0;
        for (int j : i1) sum += t(j, w);
        if (std::abs(sum - 1.0) > tol * static_cast<double>(i1.size() + 1))
          continue;

        StructuralCertificate cert;
        for (int n = 0; n < d; ++n)
          if (in_i0[n]) {
            cert.invariant_set.push_back(n);
            cert.permutation_on_i0[n] = s.det_image[n];
          }
        cert.target_row = i0;
        cert.collapsing_set = i1;
        cert.witness_column = w;
        return cert;
      }
    }
  }
  return std::nullopt;
}

bool verify_structural_certificate(const StructuralCertificate& c,
                                   const StochasticMatrix& t,
                                   std::string* why) {
  const auto fail = [&](const std::string& reason) {
    if (why) *why = reason;
    return false;
  };
  const int d = t.dim();
  const double tol = t.tolerance();
  if (c.invariant_set.empty()) return fail("invariant set is empty");
  std::vector<bool> in_i0(d, false);
  for (int n : c.invariant_set) {
    if (n < 0 || n >= d) return fail("invariant set index out of range");
    in_i0[n] = true;
  }
  // The invariant set must be permuted by deterministic columns.
  std::vector<bool> hit(d, false);
  for (int n : c.invariant_set) {
    auto it = c.permutation_on_i0.find(n);
    if (it == c.permutation_on_i0.end())
      return fail("permutation missing on index " + std::to_string(n));
    const int img = it->second;
    if (img < 0 || img >= d || !in_i0[img])
      return fail("image of " + std::to_string(n) + " leaves the invariant set");
    if (std::abs(t(img, n) - 1.0) > tol)
      return fail("column " + std::to_string(n) + " is not deterministic onto " +
                  std::to_string(img));
    if (hit[img]) return fail("permutation image repeated");
    hit[img] = true;
  }
  if (!in_i0[c.target_row] ||
      std::find(c.invariant_set.begin(), c.invariant_set.end(), c.target_row) ==
          c.invariant_set.end())
    return fail("target row is not in the invariant set");
  if (c.collapsing_set.empty()) return fail("collapsing set is empty");
  for (int j : c.collapsing_set) {
    if (j < 0 || j >= d || in_i0[j])
      return fail("collapsing set overlaps the invariant set");
    if (std::abs(t(c.target_row, j) - 1.0) > tol)
      return fail("column " + std::to_string(j) +
                  " does not collapse onto the target row");
  }
  const int w = c.witness_column;
  if (w < 0 || w >= d || in_i0[w]) return fail("witness column inside invariant set");
  if (std::find(c.collapsing_set.begin(), c.collapsing_set.end(), w) !=
      c.collapsing_set.end())
    return fail("witness column inside collapsing set");
  double sum = 0.0;
  for (int j : c.collapsing_set) sum += t(j, w);
  if (std::abs(sum - 1.0) > tol * static_cast<double>(c.collapsing_set.size() + 1))
    return fail("witness column mass on the collapsing set is " +
                std::to_string(sum));
  if (why) why->clear();
  return true;
}

}  // namespace embedlab
