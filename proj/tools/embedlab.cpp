#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "embedlab/check.hpp"
#include "embedlab/errors.hpp"
#include "embedlab/io.hpp"
#include "embedlab/scan.hpp"
#include "embedlab/stochastic.hpp"

namespace {

// 0 embeddable, 1 certified not, 2 inconclusive, 64 malformed input file,
// 65 valid input the requested operation cannot handle, 70 internal error.
constexpr int kExitMalformed = 64;
constexpr int kExitUnsupported = 65;
constexpr int kExitInternal = 70;

struct CheckArgs {
  std::string path;
  double delta = 1e-4;
  int restarts = 64;
  std::uint64_t seed = 0;
  std::string param = "general";
  bool no_search = false;
  bool as_json = false;
};

struct ScanArgs {
  int grid = 21;
  double delta = 1e-4;
  int restarts = 64;
  std::uint64_t seed = 0;
  std::string out;
  std::string param = "general";
  int threads = 0;
};

struct ConstructArgs {
  std::string target;
  std::string method;
  double gamma = 1e3;
  double tf = 1.0;
};

embedlab::Parameterization qubit_param_named(const std::string& name) {
  return name == "reduced" ? embedlab::Parameterization::reduced_qubit()
                           : embedlab::Parameterization::general_qubit();
}

std::optional<embedlab::MatrixFile> load_file(const std::string& path) {
  try {
    return embedlab::read_matrix_file(path);
  } catch (const embedlab::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return std::nullopt;
  }
}

std::optional<embedlab::StochasticMatrix> load_stochastic(
    const std::string& path) {
  const auto file = load_file(path);
  if (!file) return std::nullopt;
  try {
    return embedlab::to_stochastic(*file);
  } catch (const embedlab::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return std::nullopt;
  }
}

void print_stage_lines(const nlohmann::json& report) {
  for (const auto& s : report.at("stages")) {
    std::cout << "  [" << s.at("stage").get<std::string>() << "] "
              << s.at("outcome").get<std::string>();
    if (s.contains("best_objective"))
      std::cout << "  best_objective="
                << embedlab::format_double(s["best_objective"].get<double>());
    if (s.contains("restarts_used"))
      std::cout << " restarts_used=" << s["restarts_used"].get<int>();
    std::cout << "\n";
  }
}

int cmd_check(const CheckArgs& a) {
  const auto t = load_stochastic(a.path);
  if (!t) return kExitMalformed;
  embedlab::CheckOptions opts;
  opts.run_search = !a.no_search;
  opts.restarts = a.restarts;
  opts.delta = a.delta;
  opts.seed = a.seed;
  opts.qubit_param = qubit_param_named(a.param);
  const embedlab::CheckReport rep = embedlab::run_check(*t, opts);
  if (a.as_json) {
    std::cout << rep.report.dump(2) << "\n";
  } else {
    std::cout << "check " << a.path << " (dim " << t->dim() << ")\n";
    print_stage_lines(rep.report);
    std::cout << "verdict: " << embedlab::to_string(rep.verdict) << "\n";
    if (rep.report.contains("certificate"))
      std::cout << "certificate: " << rep.report["certificate"].dump(2)
                << "\n";
  }
  return embedlab::exit_code(rep.verdict);
}

int cmd_certify(const std::string& path) {
  const auto t = load_stochastic(path);
  if (!t) return kExitMalformed;
  embedlab::CheckOptions opts;
  opts.run_search = false;
  const embedlab::CheckReport rep = embedlab::run_check(*t, opts);
  std::cout << rep.report.dump(2) << "\n";
  return embedlab::exit_code(rep.verdict);
}

int cmd_classify(int d, bool list) {
  if (d < 1 || d > 16)
    throw embedlab::ResourceGuardError(
        "classify-extreme supports 1 <= d <= 16 (listing needs d <= 6)");
  if (list && d > 6)
    throw embedlab::ResourceGuardError(
        "--list-non-embeddable supports d <= 6");

  const mpz_class n = embedlab::count_quantum_embeddable_extreme(d);
  mpz_class total;
  mpz_ui_pow_ui(total.get_mpz_t(), d, d);
  const mpz_class excluded = total - n;
  const double fraction = mpq_class(excluded, total).get_d();

  std::cout << "d = " << d << "\n";
  std::cout << "extreme matrices: " << total.get_str() << "\n";
  std::cout << "quantum embeddable: " << n.get_str() << "\n";
  std::cout << "not embeddable: " << excluded.get_str() << "\n";
  std::cout << "excluded fraction: " << fraction << "\n";

  if (list) {
    std::cout << "non-embeddable extreme matrices:\n";
    embedlab::ExtremeEnumerator en(d);
    std::uint64_t shown = 0;
    while (auto t = en.next()) {
      const auto cls = embedlab::classify_extreme(*t);
      if (cls.embeddable) continue;
      ++shown;
      std::cout << "#" << shown << "\n";
      for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
          if (j) std::cout << ' ';
          std::cout << static_cast<int>(std::lround((*t)(i, j)));
        }
        std::cout << "\n";
      }
    }
    std::cout << "listed: " << shown << "\n";
  }
  return 0;
}

int cmd_scan(const ScanArgs& a) {
  embedlab::ScanOptions opts;
  opts.grid = a.grid;
  opts.restarts = a.restarts;
  opts.delta = a.delta;
  opts.seed = a.seed;
  opts.param = qubit_param_named(a.param);
  opts.threads = a.threads;
  const auto rows = embedlab::scan_qubit(opts);
  const std::string csv = embedlab::scan_csv(rows);

  std::ofstream out(a.out, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot open " << a.out << " for writing\n";
    return kExitUnsupported;
  }
  out << csv;
  out.close();
  if (!out) {
    std::cerr << "error: write to " << a.out << " failed\n";
    return kExitUnsupported;
  }

  int embeddable = 0, blocked = 0, classical = 0;
  for (const auto& r : rows) {
    if (r.verdict == embedlab::SearchVerdict::EmbeddableAtDelta) ++embeddable;
    if (r.analytic_blocked) ++blocked;
    if (r.classical) ++classical;
  }
  std::cout << "scan " << a.grid << "x" << a.grid << " -> " << a.out << "\n"
            << "cells: " << rows.size() << "\n"
            << "embeddable_at_delta: " << embeddable << "\n"
            << "classical: " << classical << "\n"
            << "analytically blocked: " << blocked << "\n";
  return 0;
}

int cmd_construct(const ConstructArgs& a) {
  const auto file = load_file(a.target);
  if (!file) return kExitMalformed;

  // validate the file content under its own convention before dispatch, so
  // content problems report as malformed input rather than method mismatch
  if (file->convention == "column-rate") {
    try {
      embedlab::lift_classical(file->entries);
    } catch (const embedlab::ValidationError& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitMalformed;
    }
  }
  std::optional<embedlab::StochasticMatrix> t;
  if (file->convention == "column-stochastic") {
    t = load_stochastic(a.target);
    if (!t) return kExitMalformed;
  }

  embedlab::ConstructionWitness w = [&] {
    if (a.method == "classical-lift")
      return embedlab::construct_classical_lift(*file, a.tf);
    if (!t)
      throw embedlab::ValidationError(
          "method " + a.method + " needs a column-stochastic target");
    if (a.method == "unitary") return embedlab::construct_unitary_embedding(*t);
    return embedlab::construct_copy_column(*t, a.gamma, a.tf);
  }();

  std::cout << embedlab::construction_to_json(w).dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "embedlab: quantum embeddability of column-stochastic matrices "
      "(entry (i,j) is the transition probability j -> i; indices 0-based)"};
  app.require_subcommand(1);

  CheckArgs check_args;
  auto* check = app.add_subcommand(
      "check", "layered embeddability decision with certificates");
  check->add_option("matrix", check_args.path, "matrix JSON file")->required();
  check->add_option("--delta", check_args.delta,
                    "objective threshold for the numeric layer");
  check->add_option("--restarts", check_args.restarts, "search restarts");
  check->add_option("--seed", check_args.seed, "search seed");
  check
      ->add_option("--param", check_args.param,
                   "qubit generator family for the numeric layer")
      ->check(CLI::IsMember({"general", "reduced"}));
  check->add_flag("--no-search", check_args.no_search,
                  "skip the numeric layer");
  check->add_flag("--json", check_args.as_json, "print the full JSON report");

  std::string certify_path;
  auto* certify = app.add_subcommand(
      "certify", "analytic certificates only, as a JSON report");
  certify->add_option("matrix", certify_path, "matrix JSON file")->required();

  int classify_d = 3;
  bool classify_list = false;
  auto* classify = app.add_subcommand(
      "classify-extreme",
      "count extreme (0/1) matrices by quantum embeddability");
  classify->add_option("--d", classify_d, "dimension (<= 16; listing <= 6)")
      ->required();
  classify->add_flag("--list-non-embeddable", classify_list,
                     "print every non-embeddable extreme matrix");

  ScanArgs scan_args;
  auto* scan = app.add_subcommand(
      "scan-qubit",
      "scan 2x2 matrices with diagonal (a,b) over a grid; write a CSV");
  scan->add_option("--grid", scan_args.grid, "grid points per axis (>= 2)");
  scan->add_option("--delta", scan_args.delta, "objective threshold");
  scan->add_option("--restarts", scan_args.restarts, "restarts per cell");
  scan->add_option("--seed", scan_args.seed, "base seed");
  scan->add_option("--out", scan_args.out, "output CSV path")->required();
  scan->add_option("--param", scan_args.param, "qubit generator family")
      ->check(CLI::IsMember({"general", "reduced"}));
  scan->add_option(
      "--threads", scan_args.threads,
      "worker threads (0 = EMBEDLAB_THREADS, else hardware concurrency)");

  ConstructArgs construct_args;
  auto* construct = app.add_subcommand(
      "embed-construct", "build an explicit generator witness for a target");
  construct->add_option("--target", construct_args.target, "matrix JSON file")
      ->required();
  construct
      ->add_option("--method", construct_args.method,
                   "construction: classical-lift (2x2 stochastic or "
                   "column-rate file), unitary (permutation or symmetric "
                   "2x2), theorem3 (leading block plus copied columns)")
      ->required()
      ->check(CLI::IsMember({"classical-lift", "unitary", "theorem3"}));
  construct->add_option("--gamma", construct_args.gamma,
                        "column-copy coupling strength");
  construct->add_option("--tf", construct_args.tf, "evolution time");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*check) return cmd_check(check_args);
    if (*certify) return cmd_certify(certify_path);
    if (*classify) return cmd_classify(classify_d, classify_list);
    if (*scan) return cmd_scan(scan_args);
    if (*construct) return cmd_construct(construct_args);
  } catch (const embedlab::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUnsupported;
  } catch (const embedlab::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUnsupported;
  } catch (const embedlab::ResourceGuardError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUnsupported;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}
