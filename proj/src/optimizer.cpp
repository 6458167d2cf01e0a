#include "embedlab/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

namespace embedlab {

Parameterization Parameterization::general_d(int d) {
  if (d < 2) throw DimensionError("Parameterization: d must be at least 2");
  return {ParamKind::GeneralD, d};
}

int Parameterization::param_count() const {
  switch (kind) {
    case ParamKind::GeneralQubit:
      return 34;
    case ParamKind::ReducedQubit:
      return 4;
    case ParamKind::GeneralD: {
      const int d2 = d * d;
      return d2 + 2 * d2 * d2 + 1;
    }
  }
  throw DomainError("Parameterization: unknown kind");
}

namespace {

std::vector<CMatrix> kraus_from_g(const CMatrix& g, int d) {
  // Choi = G G^dag = sum_m |g_m><g_m|, so each column is a vectorized
  // Kraus operator.
  std::vector<CMatrix> kraus;
  kraus.reserve(g.cols());
  for (Eigen::Index m = 0; m < g.cols(); ++m)
    kraus.push_back(unvec(g.col(m), d, d));
  return kraus;
}

}  // namespace

DecodedGenerator decode(const RVector& params, const Parameterization& p) {
  if (params.size() != p.param_count())
    throw DimensionError("decode: expected " + std::to_string(p.param_count()) +
                         " parameters, got " + std::to_string(params.size()));
  switch (p.kind) {
    case ParamKind::GeneralQubit: {
      const double h = params(0);
      CMatrix ham(2, 2);
      ham << std::cos(h), std::sin(h), std::sin(h), std::cos(h);
      CMatrix g(4, 4);
      for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
          g(r, c) = Complex(params(1 + 2 * (4 * r + c)), params(2 + 2 * (4 * r + c)));
      return {Lindbladian(ham, kraus_from_g(g, 2)), std::exp(params(33))};
    }
    case ParamKind::ReducedQubit: {
      const double alpha = params(0);
      const double beta = params(1);
      const double gamma = std::exp(params(2));
      CMatrix ham(2, 2);
      ham << 0.0, 1.0, 1.0, 0.0;
      CVector out(2), in(2);
      out << Complex(std::cos(alpha), 0.0), Complex(0.0, std::sin(alpha));
      in << Complex(std::cos(beta), 0.0), Complex(0.0, std::sin(beta));
      const CMatrix a = std::sqrt(gamma) * (out * in.adjoint());
      return {Lindbladian(ham, {a}), std::exp(params(3))};
    }
    case ParamKind::GeneralD: {
      const int d = p.d;
      CMatrix ham = CMatrix::Zero(d, d);
      int idx = 0;
      for (int i = 0; i < d; ++i) ham(i, i) = params(idx++);
      for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
          const Complex v(params(idx), params(idx + 1));
          idx += 2;
          ham(i, j) = v;
          ham(j, i) = std::conj(v);
        }
      const int d2 = d * d;
      CMatrix g(d2, d2);
      for (int r = 0; r < d2; ++r)
        for (int c = 0; c < d2; ++c) {
          g(r, c) = Complex(params(idx), params(idx + 1));
          idx += 2;
        }
      return {Lindbladian(ham, kraus_from_g(g, d)), std::exp(params(idx))};
    }
  }
  throw DomainError("decode: unknown parameterization kind");
}

double objective(const StochasticMatrix& t, const RVector& params,
                 const Parameterization& p) {
  if (t.dim() != p.d)
    throw DimensionError("objective: matrix dimension does not match parameterization");
  const DecodedGenerator dec = decode(params, p);
  const Superoperator gen = build_generator(dec.lindbladian);
  const Superoperator channel{gen.dim, expm(gen.matrix * dec.time)};
  const RMatrix action = classical_action_unchecked(channel);
  return (t.entries() - action).cwiseAbs().maxCoeff();
}

NelderMeadResult nelder_mead(const std::function<double(const RVector&)>& f,
                             const RVector& x0, const NelderMeadOptions& opts) {
  const int n = static_cast<int>(x0.size());
  if (n < 1) throw DimensionError("nelder_mead: empty start point");

  int soft_failures = 0;
  int evaluations = 0;

  std::vector<RVector> xs;
  std::vector<double> fs;
  xs.reserve(n + 1);
  fs.reserve(n + 1);

  const double f0 = f(x0);
  ++evaluations;
  if (!std::isfinite(f0))
    throw DomainError("nelder_mead: objective is not finite at the start point");
  xs.push_back(x0);
  fs.push_back(f0);

  // Evaluate with recovery: a non-finite value pulls the point halfway
  // toward an anchor where f is known finite.
  const auto eval = [&](RVector x, const RVector& anchor) {
    double v = f(x);
    ++evaluations;
    for (int tries = 0; !std::isfinite(v) && tries < 50; ++tries) {
      ++soft_failures;
      x = (x + anchor) / 2.0;
      v = f(x);
      ++evaluations;
    }
    if (!std::isfinite(v)) v = std::numeric_limits<double>::max();
    return std::pair<RVector, double>(std::move(x), v);
  };

  for (int i = 0; i < n; ++i) {
    RVector xi = x0;
    xi(i) += (x0(i) != 0.0) ? 0.05 * std::abs(x0(i)) : 0.00025;
    auto [px, pf] = eval(std::move(xi), x0);
    xs.push_back(std::move(px));
    fs.push_back(pf);
  }

  std::vector<int> order(n + 1);
  std::iota(order.begin(), order.end(), 0);
  const auto sort_order = [&] {
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return fs[a] < fs[b]; });
  };

  int iterations = 0;
  while (true) {
    sort_order();
    const int best = order[0];
    const int worst = order[n];
    const int second_worst = order[n - 1];

    if (fs[best] <= opts.target_f) break;
    if (fs[worst] - fs[best] < opts.fspread_tol) break;
    double diameter = 0.0;
    for (int i = 0; i <= n; ++i)
      diameter = std::max(diameter, (xs[i] - xs[best]).cwiseAbs().maxCoeff());
    if (diameter < opts.diameter_tol) break;
    if (iterations >= opts.max_iterations) break;
    ++iterations;

    RVector centroid = RVector::Zero(n);
    for (int i = 0; i <= n; ++i)
      if (i != worst) centroid += xs[i];
    centroid /= n;

    auto [xr, fr] = eval(centroid + opts.reflect * (centroid - xs[worst]), xs[best]);
    if (fr < fs[best]) {
      auto [xe, fe] = eval(centroid + opts.expand * (centroid - xs[worst]), xs[best]);
      if (fe < fr) {
        xs[worst] = std::move(xe);
        fs[worst] = fe;
      } else {
        xs[worst] = std::move(xr);
        fs[worst] = fr;
      }
      continue;
    }
    if (fr < fs[second_worst]) {
      xs[worst] = std::move(xr);
      fs[worst] = fr;
      continue;
    }
    if (fr < fs[worst]) {
      auto [xc, fc] = eval(centroid + opts.contract * (centroid - xs[worst]), xs[best]);
      if (fc <= fr) {
        xs[worst] = std::move(xc);
        fs[worst] = fc;
        continue;
      }
    } else {
      auto [xc, fc] = eval(centroid - opts.contract * (centroid - xs[worst]), xs[best]);
      if (fc < fs[worst]) {
        xs[worst] = std::move(xc);
        fs[worst] = fc;
        continue;
      }
    }
    for (int i = 0; i <= n; ++i) {
      if (i == best) continue;
      auto [px, pf] = eval(xs[best] + opts.shrink * (xs[i] - xs[best]), xs[best]);
      xs[i] = std::move(px);
      fs[i] = pf;
    }
  }

  sort_order();
  NelderMeadResult r;
  r.x = xs[order[0]];
  r.f = fs[order[0]];
  r.iterations = iterations;
  r.soft_failures = soft_failures;
  return r;
}

std::string to_string(SearchVerdict v) {
  return v == SearchVerdict::EmbeddableAtDelta ? "embeddable_at_delta"
                                               : "inconclusive";
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  auto splitmix = [](std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
  };
  return splitmix(splitmix(seed) + index);
}

namespace {

RVector draw_start(const Parameterization& p, std::mt19937_64& eng) {
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  std::uniform_real_distribution<double> log_gamma(std::log(1e-3), std::log(1e3));
  std::uniform_real_distribution<double> log_time(std::log(1e-3), std::log(1e2));
  std::normal_distribution<double> normal(0.0, 1.0);

  RVector x(p.param_count());
  switch (p.kind) {
    case ParamKind::GeneralQubit:
      x(0) = angle(eng);
      for (int i = 1; i <= 32; ++i) x(i) = normal(eng);
      x(33) = log_time(eng);
      return x;
    case ParamKind::ReducedQubit:
      x(0) = angle(eng);
      x(1) = angle(eng);
      x(2) = log_gamma(eng);
      x(3) = log_time(eng);
      return x;
    case ParamKind::GeneralD:
      for (int i = 0; i + 1 < x.size(); ++i) x(i) = normal(eng);
      x(x.size() - 1) = log_time(eng);
      return x;
  }
  throw DomainError("draw_start: unknown parameterization kind");
}

}  // namespace

SearchResult embed_search(const StochasticMatrix& t, const Parameterization& p,
                          int restarts, double delta, std::uint64_t seed) {
  if (restarts < 1) throw DomainError("embed_search: need at least one restart");
  if (!(delta > 0.0)) throw DomainError("embed_search: delta must be positive");
  if (t.dim() != p.d)
    throw DimensionError("embed_search: matrix dimension does not match parameterization");

  NelderMeadOptions opts;
  opts.target_f = delta / 10.0;

  SearchResult best;
  best.best_objective = std::numeric_limits<double>::infinity();
  best.seed = seed;
  best.restarts_used = 0;

  const auto f = [&](const RVector& x) { return objective(t, x, p); };
  for (int r = 0; r < restarts; ++r) {
    std::mt19937_64 eng(mix_seed(seed, static_cast<std::uint64_t>(r)));
    const RVector x0 = draw_start(p, eng);
    const NelderMeadResult run = nelder_mead(f, x0, opts);
    best.restarts_used = r + 1;
    if (run.f < best.best_objective) {
      best.best_objective = run.f;
      best.best_params = run.x;
    }
    if (best.best_objective <= delta) break;
  }
  best.verdict = best.best_objective <= delta ? SearchVerdict::EmbeddableAtDelta
                                              : SearchVerdict::Inconclusive;
  return best;
}

}  // namespace embedlab
