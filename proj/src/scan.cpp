#include "embedlab/scan.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>

#include "embedlab/io.hpp"

namespace embedlab {

int resolve_thread_budget(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("EMBEDLAB_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

std::vector<ScanRow> scan_qubit(const ScanOptions& opts) {
  if (opts.grid < 2) throw DomainError("scan_qubit: grid must be at least 2");
  if (opts.param.d != 2)
    throw DimensionError("scan_qubit: parameterization must act on qubits");
  const int g = opts.grid;
  const int cells = g * g;
  std::vector<ScanRow> rows(cells);

  const auto run_cell = [&](int k) {
    const int i = k / g;
    const int j = k % g;
    const double a = static_cast<double>(i) / (g - 1);
    const double b = static_cast<double>(j) / (g - 1);
    RMatrix m(2, 2);
    m << a, 1.0 - b, 1.0 - a, b;
    const StochasticMatrix t = StochasticMatrix::validate(m);
    ScanRow& row = rows[k];
    row.a = a;
    row.b = b;
    row.classical = a + b >= 1.0 - 1e-12;
    row.analytic_blocked = qubit_region_test(t).excluded;
    row.cell_seed = mix_seed(opts.seed, static_cast<std::uint64_t>(k));
    const SearchResult res =
        embed_search(t, opts.param, opts.restarts, opts.delta, row.cell_seed);
    row.best_objective = res.best_objective;
    row.verdict = res.verdict;
  };

  const int threads = std::min(resolve_thread_budget(opts.threads), cells);
  if (threads <= 1) {
    for (int k = 0; k < cells; ++k) run_cell(k);
    return rows;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int w = 0; w < threads; ++w)
    pool.emplace_back([&] {
      for (int k = next.fetch_add(1); k < cells; k = next.fetch_add(1))
        run_cell(k);
    });
  for (std::thread& th : pool) th.join();
  return rows;
}

std::string scan_csv(const std::vector<ScanRow>& rows) {
  std::string out = "a,b,best_objective,verdict,classical,theorem1_blocked,seed\n";
  for (const ScanRow& r : rows) {
    out += format_double(r.a);
    out += ',';
    out += format_double(r.b);
    out += ',';
    out += format_double(r.best_objective);
    out += ',';
    out += to_string(r.verdict);
    out += ',';
    out += r.classical ? '1' : '0';
    out += ',';
    out += r.analytic_blocked ? '1' : '0';
    out += ',';
    out += std::to_string(r.cell_seed);
    out += '\n';
  }
  return out;
}

}  // namespace embedlab
