#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "embedlab/certify.hpp"
#include "embedlab/optimizer.hpp"

namespace embedlab {

// One cell of the qubit (a,b) grid scan: T = [[a, 1-b], [1-a, b]].
struct ScanRow {
  double a;
  double b;
  double best_objective;
  SearchVerdict verdict;
  bool classical;          // a + b >= 1
  bool analytic_blocked;   // qubit_region_test fires
  std::uint64_t cell_seed;
};

struct ScanOptions {
  int grid = 21;  // grid x grid cells over [0,1]^2
  int restarts = 64;
  double delta = 1e-4;
  std::uint64_t seed = 0;
  Parameterization param = Parameterization::general_qubit();
  // 0 = auto: EMBEDLAB_THREADS when set, hardware concurrency otherwise.
  int threads = 0;
};

// Evaluates every cell; cells are independent and run concurrently, each on
// its own seed mix_seed(seed, cell index), so output is identical for any
// thread count. Row order: a-index major, b-index minor.
std::vector<ScanRow> scan_qubit(const ScanOptions& opts);

// Pinned CSV format, byte-stable across runs:
//   a,b,best_objective,verdict,classical,theorem1_blocked,seed
std::string scan_csv(const std::vector<ScanRow>& rows);

// Thread budget resolution used by the scan: explicit option, else the
// EMBEDLAB_THREADS environment variable, else hardware concurrency.
int resolve_thread_budget(int requested);

}  // namespace embedlab
