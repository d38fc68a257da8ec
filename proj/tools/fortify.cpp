// Command-line frontend: solve instances, generate benchmark families, run
// the built-in benchmark table, and self-check against the brute-force
// oracle. Exit codes: 0 success, 2 parse/usage errors, 3 stopped on a
// time/node limit, 4 verification mismatch.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fortify/fortify.hpp"

namespace {

using namespace fortify;

constexpr int kExitParse = 2;
constexpr int kExitLimit = 3;
constexpr int kExitMismatch = 4;

std::string bits(const BitVec& v) {
  std::string s;
  for (const auto b : v) s += b ? '1' : '0';
  return s;
}

std::string default_settings(const Instance& inst) {
  return inst.is_knapsack() ? "BEG" : "IBEG";
}

Value canonical_value(const Instance& inst, Value authored) {
  return inst.authored_sense == Sense::Maximize ? -authored : authored;
}

struct SolveArgs {
  std::string input;
  std::string settings;  // empty = family default
  std::uint64_t seed = 0;
  double epsilon = 1e-4;
  double time_limit = 0.0;
  std::int64_t node_limit = 0;
  Value fort_budget = -1;   // -1 = keep the file's value
  Value inter_budget = -1;
  bool verbose = false;
};

int run_solve(const SolveArgs& args) {
  Instance inst = parse_instance_file(args.input);
  if (args.fort_budget >= 0) inst.fort_budget = args.fort_budget;
  if (args.inter_budget >= 0) inst.inter_budget = args.inter_budget;
  validate(inst);

  SolverConfig cfg = parse_settings(args.settings.empty() ? default_settings(inst) : args.settings);
  cfg.seed = env_seed_override().value_or(args.seed);
  cfg.epsilon = args.epsilon;
  cfg.time_limit_s = args.time_limit;
  cfg.node_limit = args.node_limit;
  if (args.verbose) {
    cfg.verbosity = 1;
    cfg.log = &std::cerr;
  }

  const auto res = solve_fortification(inst, cfg);
  std::cout << "instance " << inst.name << ": " << inst.asset_count() << " assets, "
            << (inst.is_knapsack() ? "knapsack" : "shortest-path") << "\n";
  std::cout << "settings " << format_settings(cfg) << " seed " << cfg.seed << "\n";
  std::cout << "status " << to_string(res.status) << "\n";
  if (res.has_solution) {
    std::cout << "z " << res.value << "\n";
    std::cout << "w " << bits(res.w) << "\n";
    std::cout << "x " << bits(res.x) << "\n";
  }
  std::cout << "bound " << res.best_bound << "\n";
  std::cout << "time_s " << res.stats.time_s << " nodes " << res.stats.nodes << " separations "
            << res.stats.separations << "\n";
  std::cout << "fort_cuts " << res.stats.fort_cuts << " int_cuts " << res.stats.int_cuts << "\n";
  if (!std::isnan(res.stats.root_bound)) {
    std::cout << "root_bound " << res.stats.root_bound;
    if (res.has_solution) {
      const double z = static_cast<double>(res.value);
      std::cout << " root_gap_pct "
                << 100.0 * std::abs(z - res.stats.root_bound) / std::max(1.0, std::abs(z));
    }
    std::cout << "\n";
  }
  return res.status == SolveResult::Status::Optimal ? 0 : kExitLimit;
}

struct GenerateArgs {
  std::string family = "grid";
  std::string out;
  int rows = 10, cols = 10;
  Value c_max = 10, d_max = 10;
  int items = 20;
  int id = 1;
  int max_n = 10;
  std::uint64_t seed = 1;
  Value fort_budget = 3, inter_budget = 3;
};

int run_generate(const GenerateArgs& args) {
  const std::uint64_t seed = env_seed_override().value_or(args.seed);
  Instance inst;
  if (args.family == "grid")
    inst = generate_grid(args.rows, args.cols, args.c_max, args.d_max, seed, args.fort_budget,
                         args.inter_budget);
  else if (args.family == "kfg")
    inst = generate_kfg(args.items, seed, args.fort_budget, args.id);
  else if (args.family == "tiny")
    inst = generate_tiny(seed, args.max_n);
  else
    throw std::invalid_argument("unknown family '" + args.family + "' (grid, kfg, tiny)");

  if (args.out.empty()) {
    write_instance(std::cout, inst);
  } else {
    std::ofstream out(args.out);
    if (!out) throw std::invalid_argument("cannot write '" + args.out + "'");
    write_instance(out, inst);
    std::cerr << "wrote " << inst.name << " to " << args.out << "\n";
  }
  return 0;
}

struct BenchArgs {
  std::string out;
  std::uint64_t seed = 1;
  double time_limit = 0.0;
  int rows = 10, cols = 10;
  std::string grid_settings = "IBEG";
  std::string kfg_settings = "BEG";
  bool quick = false;
};

int run_bench(const BenchArgs& args) {
  const std::uint64_t seed = env_seed_override().value_or(args.seed);
  std::ostream* sink = &std::cout;
  std::ofstream file;
  if (!args.out.empty()) {
    file.open(args.out);
    if (!file) throw std::invalid_argument("cannot write '" + args.out + "'");
    sink = &file;
  }
  *sink << csv_header() << "\n";

  const int rows = args.quick ? 5 : args.rows;
  const int cols = args.quick ? 5 : args.cols;
  const std::vector<std::pair<Value, Value>> budgets{{3, 3}, {4, 3}, {3, 4}, {5, 4}, {4, 5}, {7, 5}};
  for (const auto& [bf, bi] : budgets) {
    Instance inst = generate_grid(rows, cols, 10, 10, seed, bf, bi);
    SolverConfig cfg = parse_settings(args.grid_settings);
    cfg.seed = seed;
    cfg.time_limit_s = args.time_limit;
    const auto res = solve_fortification(inst, cfg);
    std::ostringstream name;
    name << inst.name << "-bf" << bf << "-bi" << bi;
    *sink << to_csv(make_bench_row(name.str(), format_settings(cfg), seed, res)) << "\n";
    sink->flush();
  }
  const int items = args.quick ? 10 : 20;
  for (const Value bf : {Value{3}, Value{5}}) {
    Instance inst = generate_kfg(items, seed, bf, /*id=*/4);
    SolverConfig cfg = parse_settings(args.kfg_settings);
    cfg.seed = seed;
    cfg.time_limit_s = args.time_limit;
    const auto res = solve_fortification(inst, cfg);
    *sink << to_csv(make_bench_row(inst.name + "-bf" + std::to_string(bf), format_settings(cfg),
                                   seed, res))
          << "\n";
    sink->flush();
  }
  return 0;
}

struct VerifyArgs {
  int count = 200;
  int max_n = 10;
  std::uint64_t seed = 1;
  bool quiet = false;
};

int run_verify(const VerifyArgs& args) {
  const std::uint64_t seed = env_seed_override().value_or(args.seed);
  const std::vector<std::string> common{"-", "B", "E", "G", "BE", "BG", "EG", "BEG"};
  const std::vector<std::string> path_only{"I", "IB", "IE", "IBEG"};
  int solves = 0;
  for (int i = 0; i < args.count; ++i) {
    const Instance inst = generate_tiny(seed + static_cast<std::uint64_t>(i), args.max_n);
    Oracle oracle(canonicalize(inst));
    const Value truth = oracle.solve().value;

    std::vector<std::string> settings{"-", default_settings(inst)};
    const auto& pool = inst.is_shortest_path() && i % 3 == 0 ? path_only : common;
    settings.push_back(pool[static_cast<std::size_t>(i) % pool.size()]);
    for (const auto& s : settings) {
      SolverConfig cfg = parse_settings(s);
      cfg.seed = seed + static_cast<std::uint64_t>(i);
      const auto res = solve_fortification(inst, cfg);
      ++solves;
      const bool ok = res.status == SolveResult::Status::Optimal &&
                      canonical_value(inst, res.value) == truth &&
                      oracle.phi_fortification(res.w) == truth;
      if (!ok) {
        std::cerr << "mismatch on instance " << i << " settings " << s << ": solver "
                  << (res.has_solution ? std::to_string(res.value) : std::string("none"))
                  << " oracle " << authored_value(canonicalize(inst), truth) << "\n";
        write_instance(std::cerr, inst);
        return kExitMismatch;
      }
    }
  }
  if (!args.quiet)
    std::cout << "verified " << args.count << " instances (" << solves << " solves), all matched\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Branch-and-cut solver for 0-1 fortification games"};
  app.require_subcommand(1);

  SolveArgs solve_args;
  auto* solve = app.add_subcommand("solve", "solve an instance file (.kfg, .spfg, .gr)");
  solve->add_option("input", solve_args.input, "instance file")->required();
  solve->add_option("--settings", solve_args.settings,
                    "letters from I,B,E,G or '-' (default: BEG for knapsack, IBEG for paths)");
  solve->add_option("--seed", solve_args.seed, "random seed");
  solve->add_option("--epsilon", solve_args.epsilon, "separation strictness margin");
  solve->add_option("--time-limit", solve_args.time_limit, "seconds, 0 = off");
  solve->add_option("--node-limit", solve_args.node_limit, "master nodes, 0 = off");
  solve->add_option("--fort-budget", solve_args.fort_budget, "override the file's defense budget");
  solve->add_option("--inter-budget", solve_args.inter_budget, "override the file's attack budget");
  solve->add_flag("-v,--verbose", solve_args.verbose, "trace every cut to stderr");

  GenerateArgs gen_args;
  auto* gen = app.add_subcommand("generate", "emit an instance of a benchmark family");
  gen->add_option("--family", gen_args.family, "grid, kfg, or tiny")->required();
  gen->add_option("--out", gen_args.out, "output file (default stdout)");
  gen->add_option("--rows", gen_args.rows, "grid rows");
  gen->add_option("--cols", gen_args.cols, "grid columns");
  gen->add_option("--cmax", gen_args.c_max, "max arc cost");
  gen->add_option("--dmax", gen_args.d_max, "max delay");
  gen->add_option("--items", gen_args.items, "knapsack items");
  gen->add_option("--id", gen_args.id, "knapsack instance id (scales the attack budget)");
  gen->add_option("--max-n", gen_args.max_n, "tiny-family asset cap");
  gen->add_option("--seed", gen_args.seed, "random seed");
  gen->add_option("--fort-budget", gen_args.fort_budget, "defense budget");
  gen->add_option("--inter-budget", gen_args.inter_budget, "attack budget (grid only)");

  BenchArgs bench_args;
  auto* bench = app.add_subcommand("bench", "run the built-in benchmark and emit CSV");
  bench->add_option("--out", bench_args.out, "CSV file (default stdout)");
  bench->add_option("--seed", bench_args.seed, "random seed");
  bench->add_option("--time-limit", bench_args.time_limit, "per-run limit in seconds, 0 = off");
  bench->add_option("--rows", bench_args.rows, "grid rows");
  bench->add_option("--cols", bench_args.cols, "grid columns");
  bench->add_option("--grid-settings", bench_args.grid_settings, "settings for grid runs");
  bench->add_option("--kfg-settings", bench_args.kfg_settings, "settings for knapsack runs");
  bench->add_flag("--quick", bench_args.quick, "small instances for smoke testing");

  VerifyArgs verify_args;
  auto* verify = app.add_subcommand("verify", "check the solver against brute force on tiny games");
  verify->add_option("--count", verify_args.count, "number of instances")
      ->check(CLI::Range(1, 100000));
  verify->add_option("--max-n", verify_args.max_n, "asset cap per instance")
      ->check(CLI::Range(4, 16));
  verify->add_option("--seed", verify_args.seed, "base seed");
  verify->add_flag("--quiet", verify_args.quiet, "suppress the success line");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return run_solve(solve_args);
    if (gen->parsed()) return run_generate(gen_args);
    if (bench->parsed()) return run_bench(bench_args);
    return run_verify(verify_args);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  }
}
