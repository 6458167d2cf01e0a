#include "embedlab/check.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "embedlab/certify.hpp"
#include "embedlab/errors.hpp"

namespace embedlab {

namespace {

nlohmann::json rmatrix_to_json(const RMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

nlohmann::json structural_to_json(const StructuralCertificate& c) {
  nlohmann::json perm = nlohmann::json::object();
  for (const auto& [col, row] : c.permutation_on_i0)
    perm[std::to_string(col)] = row;
  return {{"invariant_set", c.invariant_set},
          {"permutation_on_invariant_set", std::move(perm)},
          {"target_row", c.target_row},
          {"collapsing_set", c.collapsing_set},
          {"witness_column", c.witness_column}};
}

double witness_objective(const Lindbladian& l, double time,
                         const RMatrix& target) {
  const RMatrix action = classical_action_unchecked(channel_at(l, time));
  return (action - target).cwiseAbs().maxCoeff();
}

bool is_binary(const RMatrix& m, double tol) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const double x = m(i, j);
      if (std::min(std::abs(x), std::abs(x - 1.0)) > tol) return false;
    }
  return true;
}

}  // namespace

std::string to_string(CheckVerdict v) {
  switch (v) {
    case CheckVerdict::ClassicallyEmbeddable:
      return "classically_embeddable";
    case CheckVerdict::QuantumEmbeddable:
      return "quantum_embeddable";
    case CheckVerdict::NotQuantumEmbeddable:
      return "not_quantum_embeddable";
    case CheckVerdict::Inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

int exit_code(CheckVerdict v) {
  switch (v) {
    case CheckVerdict::ClassicallyEmbeddable:
    case CheckVerdict::QuantumEmbeddable:
      return 0;
    case CheckVerdict::NotQuantumEmbeddable:
      return 1;
    case CheckVerdict::Inconclusive:
      return 2;
  }
  return 2;
}

nlohmann::json construction_to_json(const ConstructionWitness& w) {
  nlohmann::json j{{"method", w.method},
                   {"time", w.time},
                   {"objective", w.objective},
                   {"lindbladian", lindbladian_to_json(w.lindbladian)}};
  if (w.gamma) j["gamma"] = *w.gamma;
  return j;
}

ConstructionWitness construct_unitary_embedding(const StochasticMatrix& t) {
  const int d = t.dim();
  const RMatrix& m = t.entries();
  const double tol = t.tolerance();

  if (is_binary(m, tol)) {
    const std::vector<int> phi = extreme_map_of(t);
    std::vector<bool> hit(d, false);
    bool bijective = true;
    for (int row : phi) {
      if (hit[row]) bijective = false;
      hit[row] = true;
    }
    if (!bijective)
      throw ValidationError(
          "unitary construction: 0/1 target repeats a column image, so it is "
          "not a permutation");
    CMatrix u = CMatrix::Zero(d, d);
    for (int j = 0; j < d; ++j) u(phi[j], j) = 1.0;
    Lindbladian l = hamiltonian_from_unitary(u);
    const double obj = witness_objective(l, 1.0, m);
    return {std::move(l), 1.0, std::nullopt, obj, "unitary"};
  }

  if (d == 2 && std::abs(m(0, 0) - m(1, 1)) <= tol) {
    const double a = std::clamp((m(0, 0) + m(1, 1)) / 2.0, 0.0, 1.0);
    const double r = std::sqrt(a), s = std::sqrt(1.0 - a);
    CMatrix u(2, 2);
    u << r, s, s, -r;
    Lindbladian l = hamiltonian_from_unitary(u);
    const double obj = witness_objective(l, 1.0, m);
    return {std::move(l), 1.0, std::nullopt, obj, "unitary"};
  }

  throw ValidationError(
      "unitary construction needs a permutation target, or a symmetric 2x2 "
      "target (equal diagonal entries)");
}

ConstructionWitness construct_classical_lift(const MatrixFile& f, double tf) {
  if (tf <= 0.0) throw DomainError("tf must be positive");

  if (f.convention == "column-rate") {
    Lindbladian l = lift_classical(f.entries);
    const RMatrix target = expm_real(f.entries * tf);
    const double obj = witness_objective(l, tf, target);
    return {std::move(l), tf, std::nullopt, obj, "classical-lift"};
  }

  const StochasticMatrix t = to_stochastic(f);
  if (t.dim() != 2)
    throw ValidationError(
        "classical-lift construction needs a 2x2 stochastic target or a rate "
        "matrix (convention \"column-rate\")");
  const ClassicalEmbedding2x2 cls = classical_embeddable_2x2(t);
  if (!cls.embeddable)
    throw ValidationError(
        "target is not classically embeddable: diagonal sum falls below 1");
  Lindbladian l = lift_classical(cls.generator);
  const double obj = witness_objective(l, cls.time, t.entries());
  return {std::move(l), cls.time, std::nullopt, obj, "classical-lift"};
}

ConstructionWitness construct_copy_column(const StochasticMatrix& t,
                                          double gamma, double tf) {
  if (gamma <= 0.0) throw DomainError("gamma must be positive");
  if (tf <= 0.0) throw DomainError("tf must be positive");
  const int d = t.dim();
  const RMatrix& m = t.entries();
  const double tol = t.tolerance();

  for (int dp = d - 1; dp >= 1; --dp) {
    bool ok = true;
    // leading columns must stay inside the leading block
    for (int j = 0; j < dp && ok; ++j)
      for (int i = dp; i < d; ++i)
        if (m(i, j) > tol) {
          ok = false;
          break;
        }
    // every trailing column must duplicate a leading column
    std::map<int, int> cmap;
    for (int j = dp; j < d && ok; ++j) {
      int source = -1;
      for (int i = 0; i < dp; ++i)
        if ((m.col(j) - m.col(i)).cwiseAbs().maxCoeff() <= 10.0 * tol) {
          source = i;
          break;
        }
      if (source < 0)
        ok = false;
      else
        cmap[j] = source;
    }
    if (!ok) continue;

    const RMatrix r = m.topLeftCorner(dp, dp);
    std::optional<Lindbladian> base;
    if (is_binary(r, tol)) {
      // column sums are 1 and rows below vanish, so r is a permutation iff
      // its images are distinct
      std::vector<bool> hit(dp, false);
      bool perm = true;
      std::vector<int> phi(dp, 0);
      for (int j = 0; j < dp && perm; ++j) {
        for (int i = 0; i < dp; ++i)
          if (r(i, j) > 0.5) phi[j] = i;
        if (hit[phi[j]]) perm = false;
        hit[phi[j]] = true;
      }
      if (perm) {
        CMatrix u = CMatrix::Zero(dp, dp);
        for (int j = 0; j < dp; ++j) u(phi[j], j) = 1.0;
        const Lindbladian unit = hamiltonian_from_unitary(u);
        base.emplace(CMatrix(unit.hamiltonian() / tf),
                     std::vector<CMatrix>{});
      }
    }
    if (!base && dp == 2) {
      const StochasticMatrix rs = StochasticMatrix::validate(r, tol);
      const ClassicalEmbedding2x2 cls = classical_embeddable_2x2(rs);
      if (cls.embeddable)
        base.emplace(lift_classical(cls.generator * (cls.time / tf)));
    }
    if (!base)
      throw ValidationError(
          "column-copy construction: leading block of size " +
          std::to_string(dp) +
          " is neither a permutation nor an embeddable 2x2 stochastic "
          "matrix");

    const Lindbladian embedded = embed_in_dimension(*base, d);
    Lindbladian full = column_copy_generator(embedded, cmap, gamma);
    const double obj = witness_objective(full, tf, m);
    return {std::move(full), tf, gamma, obj, "theorem3"};
  }

  throw ValidationError(
      "column-copy construction: target has no leading block whose trailing "
      "columns duplicate leading columns");
}

ConstructionWitness construct_extreme_embedding(const StochasticMatrix& t,
                                                double gamma) {
  if (gamma <= 0.0) throw DomainError("gamma must be positive");
  const ExtremeClassification cls = classify_extreme(t);
  if (!cls.is_extreme)
    throw ContractViolation("extreme construction requires a 0/1 matrix");
  if (!cls.embeddable)
    throw ContractViolation(
        "extreme construction: some column image needs two or more steps to "
        "reach the core");

  const int d = t.dim();
  const std::vector<int> phi = extreme_map_of(t);
  std::vector<bool> in_core(d, false);
  for (int c : cls.core) in_core[c] = true;

  // relabel core-first, ascending within each group
  std::vector<int> order(cls.core);
  for (int i = 0; i < d; ++i)
    if (!in_core[i]) order.push_back(i);
  std::vector<int> newidx(d, 0);
  for (int k = 0; k < d; ++k) newidx[order[k]] = k;
  const int m = static_cast<int>(cls.core.size());

  CMatrix r = CMatrix::Zero(m, m);
  for (int l = 0; l < m; ++l) r(newidx[phi[order[l]]], l) = 1.0;
  const Lindbladian base = hamiltonian_from_unitary(r);
  const Lindbladian embedded = embed_in_dimension(base, d);

  // tail column l copies the core column with the same image
  std::map<int, int> cmap;
  for (int l = m; l < d; ++l) {
    const int target_old = phi[order[l]];
    for (int c = 0; c < m; ++c)
      if (phi[order[c]] == target_old) {
        cmap[l] = c;
        break;
      }
  }
  const Lindbladian built = column_copy_generator(embedded, cmap, gamma);

  // conjugate back to the original labels
  CMatrix q = CMatrix::Zero(d, d);
  for (int k = 0; k < d; ++k) q(order[k], k) = 1.0;
  CMatrix h = q * built.hamiltonian() * q.transpose();
  std::vector<CMatrix> kraus;
  kraus.reserve(built.kraus_ops().size());
  for (const CMatrix& a : built.kraus_ops())
    kraus.push_back(q * a * q.transpose());
  Lindbladian full(std::move(h), std::move(kraus));

  const double obj = witness_objective(full, 1.0, t.entries());
  std::optional<double> used_gamma;
  if (!cmap.empty()) used_gamma = gamma;
  return {std::move(full), 1.0, used_gamma, obj, "extreme-core-copy"};
}

CheckReport run_check(const StochasticMatrix& t, const CheckOptions& opts) {
  const int d = t.dim();
  nlohmann::json stages = nlohmann::json::array();
  nlohmann::json certificate;
  CheckVerdict verdict = CheckVerdict::Inconclusive;
  bool decided = false;

  stages.push_back({{"stage", "validation"}, {"outcome", "pass"}, {"dim", d}});

  const NecessaryConditionReport nec = necessary_classical_condition(t);
  {
    nlohmann::json s{{"stage", "classical_necessary_condition"},
                     {"outcome", nec.pass ? "pass" : "fail"},
                     {"determinant", nec.determinant},
                     {"diagonal_product", nec.diagonal_product}};
    if (!nec.pass) s["detail"] = nec.failure + "; rules out a classical generator only";
    stages.push_back(std::move(s));
  }

  if (d == 2) {
    const ClassicalEmbedding2x2 cls = classical_embeddable_2x2(t);
    nlohmann::json s{
        {"stage", "classical_exact"},
        {"outcome", cls.embeddable ? "embeddable" : "not_embeddable"}};
    if (cls.embeddable) {
      s["generator"] = rmatrix_to_json(cls.generator);
      s["time"] = cls.time;
      s["closure_point"] = cls.closure_point;
      certificate = {{"type", "classical_generator"},
                     {"generator", rmatrix_to_json(cls.generator)},
                     {"time", cls.time},
                     {"closure_point", cls.closure_point}};
      verdict = CheckVerdict::ClassicallyEmbeddable;
      decided = true;
    }
    stages.push_back(std::move(s));
  } else if ((t.entries() - RMatrix::Identity(d, d)).cwiseAbs().maxCoeff() <=
             t.tolerance()) {
    stages.push_back({{"stage", "classical_exact"},
                      {"outcome", "embeddable"},
                      {"generator", rmatrix_to_json(RMatrix::Zero(d, d))},
                      {"time", 1.0}});
    certificate = {{"type", "classical_generator"},
                   {"generator", rmatrix_to_json(RMatrix::Zero(d, d))},
                   {"time", 1.0},
                   {"closure_point", false}};
    verdict = CheckVerdict::ClassicallyEmbeddable;
    decided = true;
  }

  if (!decided && d == 2) {
    const QubitRegionVerdict region = qubit_region_test(t);
    nlohmann::json s{{"stage", "qubit_exclusion_region"},
                     {"outcome", region.excluded ? "excluded" : "not_excluded"},
                     {"a", region.a},
                     {"b", region.b},
                     {"swapped", region.swapped}};
    if (region.f_value) s["f"] = *region.f_value;
    if (region.g_value) s["g"] = *region.g_value;
    if (region.excluded) {
      certificate = s;
      certificate.erase("stage");
      certificate.erase("outcome");
      certificate["type"] = "qubit_exclusion_region";
      verdict = CheckVerdict::NotQuantumEmbeddable;
      decided = true;
    }
    stages.push_back(std::move(s));
  }

  if (!decided) {
    const std::optional<StructuralCertificate> cert = structural_certificate(t);
    if (cert) {
      std::string why;
      if (!verify_structural_certificate(*cert, t, &why))
        throw ContractViolation(
            "structural certificate failed re-verification: " + why);
      nlohmann::json cj = structural_to_json(*cert);
      stages.push_back({{"stage", "structural_certificate"},
                        {"outcome", "found"},
                        {"verified", true},
                        {"certificate", cj}});
      cj["type"] = "structural";
      certificate = std::move(cj);
      verdict = CheckVerdict::NotQuantumEmbeddable;
      decided = true;
    } else {
      stages.push_back(
          {{"stage", "structural_certificate"}, {"outcome", "none"}});
    }
  }

  if (!decided) {
    const ExtremeClassification cls = classify_extreme(t);
    if (cls.is_extreme) {
      // the certificate search is complete on extreme matrices, so reaching
      // this point with a non-embeddable classification is a contradiction
      if (!cls.embeddable)
        throw ContractViolation(
            "extreme matrix classified non-embeddable, yet no structural "
            "certificate was found");
      const ConstructionWitness w = construct_extreme_embedding(t);
      nlohmann::json cj = construction_to_json(w);
      stages.push_back({{"stage", "extreme_classification"},
                        {"outcome", "embeddable"},
                        {"core", cls.core},
                        {"construction", cj}});
      certificate = {{"type", "constructive"}, {"construction", std::move(cj)}};
      verdict = CheckVerdict::QuantumEmbeddable;
      decided = true;
    } else {
      stages.push_back(
          {{"stage", "extreme_classification"}, {"outcome", "not_extreme"}});
    }
  }

  if (!decided && opts.run_search) {
    const Parameterization p =
        d == 2 ? opts.qubit_param : Parameterization::general_d(d);
    const SearchResult r =
        embed_search(t, p, opts.restarts, opts.delta, opts.seed);
    nlohmann::json s{{"stage", "numeric_search"},
                     {"outcome", to_string(r.verdict)},
                     {"best_objective", r.best_objective},
                     {"restarts_used", r.restarts_used},
                     {"delta", opts.delta},
                     {"seed", r.seed}};
    if (r.verdict == SearchVerdict::EmbeddableAtDelta) {
      const DecodedGenerator g = decode(r.best_params, p);
      certificate = {{"type", "numeric_witness"},
                     {"best_objective", r.best_objective},
                     {"delta", opts.delta},
                     {"time", g.time},
                     {"lindbladian", lindbladian_to_json(g.lindbladian)}};
      verdict = CheckVerdict::QuantumEmbeddable;
    } else {
      verdict = CheckVerdict::Inconclusive;
    }
    stages.push_back(std::move(s));
    decided = true;
  }

  nlohmann::json report{{"dim", d},
                        {"verdict", to_string(verdict)},
                        {"exit_code", exit_code(verdict)},
                        {"stages", std::move(stages)}};
  if (!certificate.is_null()) report["certificate"] = std::move(certificate);
  return {verdict, std::move(report)};
}

}  // namespace embedlab
