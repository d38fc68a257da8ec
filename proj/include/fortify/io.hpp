#pragma once

// Instance file formats, benchmark-family generators, and the CSV emitter.
//
// Both text formats are line-oriented with `#` comments and blank lines
// ignored. Knapsack games: a header `n B_F B_I b`, then n lines `d a f g`
// (depreciation, weight, fortification cost, interdiction cost). Path games:
// a header `V A B_F B_I s t` with 0-based terminals, then A lines
// `tail head c d`. Road files use the DIMACS shortest-path dialect; every
// arc line is treated as an undirected edge and doubled, with delay 10000.

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fortify/instance.hpp"
#include "fortify/master.hpp"

namespace fortify {

struct ParseError : std::runtime_error {
  ParseError(const std::string& where, int line, const std::string& what)
      : std::runtime_error(where + ":" + std::to_string(line) + ": " + what), line_no(line) {}
  int line_no;
};

namespace detail {

// Next non-blank, non-comment line, with its 1-based number.
inline std::optional<std::pair<std::string, int>> next_data_line(std::istream& in, int& line_no) {
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t at = 0;
    while (at < line.size() && std::isspace(static_cast<unsigned char>(line[at]))) ++at;
    if (at == line.size() || line[at] == '#') continue;
    return std::make_pair(line, line_no);
  }
  return std::nullopt;
}

inline std::vector<Value> parse_fields(const std::string& line, std::size_t expect,
                                       const std::string& where, int line_no) {
  std::istringstream ss(line);
  std::vector<Value> out;
  long long v;
  while (ss >> v) out.push_back(v);
  if (!ss.eof()) throw ParseError(where, line_no, "non-numeric field in '" + line + "'");
  if (out.size() != expect)
    throw ParseError(where, line_no, "expected " + std::to_string(expect) + " fields, got " +
                                         std::to_string(out.size()));
  return out;
}

inline std::vector<Value> expect_line(std::istream& in, int& line_no, std::size_t fields,
                                      const std::string& where, const std::string& what) {
  const auto line = next_data_line(in, line_no);
  if (!line) throw ParseError(where, line_no, "unexpected end of file, wanted " + what);
  return parse_fields(line->first, fields, where, line->second);
}

}  // namespace detail

inline Instance parse_kfg(std::istream& in, const std::string& where = "kfg") {
  int line_no = 0;
  const auto header = detail::expect_line(in, line_no, 4, where, "header `n B_F B_I b`");
  const auto n = static_cast<std::size_t>(header[0]);
  if (header[0] < 1) throw ParseError(where, line_no, "asset count must be positive");
  Instance inst;
  inst.name = where;
  inst.sense = inst.authored_sense = Sense::Maximize;
  inst.fort_budget = header[1];
  inst.inter_budget = header[2];
  KnapsackRecourse kp;
  kp.capacity = header[3];
  for (std::size_t i = 0; i < n; ++i) {
    const auto f = detail::expect_line(in, line_no, 4, where, "item line `d a f g`");
    inst.depreciation.push_back(f[0]);
    kp.weight.push_back(f[1]);
    inst.fort_cost.push_back(f[2]);
    inst.inter_cost.push_back(f[3]);
  }
  inst.recourse = std::move(kp);
  try {
    validate(inst);
  } catch (const std::invalid_argument& e) {
    throw ParseError(where, line_no, e.what());
  }
  return inst;
}

inline Instance parse_spfg(std::istream& in, const std::string& where = "spfg") {
  int line_no = 0;
  const auto header = detail::expect_line(in, line_no, 6, where, "header `V A B_F B_I s t`");
  Instance inst;
  inst.name = where;
  inst.sense = inst.authored_sense = Sense::Minimize;
  inst.fort_budget = header[2];
  inst.inter_budget = header[3];
  ShortestPathRecourse sp;
  sp.node_count = static_cast<int>(header[0]);
  sp.source = static_cast<int>(header[4]);
  sp.sink = static_cast<int>(header[5]);
  const auto arcs = static_cast<std::size_t>(header[1]);
  for (std::size_t a = 0; a < arcs; ++a) {
    const auto f = detail::expect_line(in, line_no, 4, where, "arc line `tail head c d`");
    sp.arcs.push_back({static_cast<int>(f[0]), static_cast<int>(f[1]), f[2]});
    inst.depreciation.push_back(f[3]);
  }
  inst.fort_cost.assign(inst.depreciation.size(), 1);
  inst.inter_cost.assign(inst.depreciation.size(), 1);
  inst.recourse = std::move(sp);
  try {
    validate(inst);
  } catch (const std::invalid_argument& e) {
    throw ParseError(where, line_no, e.what());
  }
  return inst;
}

// DIMACS-style road file: `c` comments, one `p sp V A` line, then `a u v w`
// lines with 1-based endpoints. Every arc line is read as an undirected edge
// and becomes an arc pair, each with delay 10000. Terminals default to the
// first and last node; budgets start at zero and come from the caller.
inline Instance parse_dimacs_road(std::istream& in, const std::string& where = "road") {
  Instance inst;
  inst.name = where;
  inst.sense = inst.authored_sense = Sense::Minimize;
  ShortestPathRecourse sp;
  bool have_problem = false;
  std::size_t announced_edges = 0;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == 'c') continue;
    std::istringstream ss(line);
    char tag;
    ss >> tag;
    if (tag == 'p') {
      std::string kind;
      long long v = 0, a = 0;
      if (!(ss >> kind >> v >> a) || kind != "sp" || v < 2 || a < 1)
        throw ParseError(where, line_no, "malformed problem line '" + line + "'");
      have_problem = true;
      sp.node_count = static_cast<int>(v);
      announced_edges = static_cast<std::size_t>(a);
    } else if (tag == 'a') {
      if (!have_problem) throw ParseError(where, line_no, "arc before problem line");
      long long u = 0, v = 0, w = 0;
      if (!(ss >> u >> v >> w) || u < 1 || v < 1 || u > sp.node_count || v > sp.node_count || w < 0)
        throw ParseError(where, line_no, "malformed arc line '" + line + "'");
      sp.arcs.push_back({static_cast<int>(u - 1), static_cast<int>(v - 1), w});
      sp.arcs.push_back({static_cast<int>(v - 1), static_cast<int>(u - 1), w});
      inst.depreciation.insert(inst.depreciation.end(), {10000, 10000});
    } else {
      throw ParseError(where, line_no, std::string("unknown record '") + tag + "'");
    }
  }
  if (!have_problem) throw ParseError(where, line_no, "missing problem line");
  if (sp.arcs.size() != 2 * announced_edges)
    throw ParseError(where, line_no,
                     "edge count mismatch: announced " + std::to_string(announced_edges) +
                         ", found " + std::to_string(sp.arcs.size() / 2));
  sp.source = 0;
  sp.sink = sp.node_count - 1;
  inst.fort_cost.assign(inst.depreciation.size(), 1);
  inst.inter_cost.assign(inst.depreciation.size(), 1);
  inst.recourse = std::move(sp);
  try {
    validate(inst);
  } catch (const std::invalid_argument& e) {
    throw ParseError(where, line_no, e.what());
  }
  return inst;
}

inline void write_kfg(std::ostream& out, const Instance& inst) {
  const auto& kp = inst.knapsack();
  out << "# knapsack fortification game: depreciation weight fort_cost inter_cost\n";
  out << inst.asset_count() << ' ' << inst.fort_budget << ' ' << inst.inter_budget << ' '
      << kp.capacity << '\n';
  for (int i = 0; i < inst.asset_count(); ++i)
    out << inst.depreciation[i] << ' ' << kp.weight[i] << ' ' << inst.fort_cost[i] << ' '
        << inst.inter_cost[i] << '\n';
}

inline void write_spfg(std::ostream& out, const Instance& inst) {
  const auto& sp = inst.shortest_path();
  out << "# shortest-path fortification game: tail head cost delay\n";
  out << sp.node_count << ' ' << sp.arcs.size() << ' ' << inst.fort_budget << ' '
      << inst.inter_budget << ' ' << sp.source << ' ' << sp.sink << '\n';
  for (std::size_t a = 0; a < sp.arcs.size(); ++a)
    out << sp.arcs[a].tail << ' ' << sp.arcs[a].head << ' ' << sp.arcs[a].cost << ' '
        << inst.depreciation[a] << '\n';
}

inline void write_instance(std::ostream& out, const Instance& inst) {
  if (inst.is_knapsack())
    write_kfg(out, inst);
  else
    write_spfg(out, inst);
}

// Equality on everything that affects solving; names may differ.
inline bool equivalent(const Instance& a, const Instance& b) {
  if (a.sense != b.sense || a.authored_sense != b.authored_sense) return false;
  if (a.fort_cost != b.fort_cost || a.inter_cost != b.inter_cost ||
      a.depreciation != b.depreciation)
    return false;
  if (a.fort_budget != b.fort_budget || a.inter_budget != b.inter_budget ||
      a.denominator != b.denominator)
    return false;
  if (a.is_knapsack() != b.is_knapsack()) return false;
  if (a.is_knapsack()) {
    const auto& ka = a.knapsack();
    const auto& kb = b.knapsack();
    return ka.weight == kb.weight && ka.capacity == kb.capacity;
  }
  const auto& sa = a.shortest_path();
  const auto& sb = b.shortest_path();
  if (sa.node_count != sb.node_count || sa.source != sb.source || sa.sink != sb.sink) return false;
  if (sa.arcs.size() != sb.arcs.size()) return false;
  for (std::size_t i = 0; i < sa.arcs.size(); ++i)
    if (sa.arcs[i].tail != sb.arcs[i].tail || sa.arcs[i].head != sb.arcs[i].head ||
        sa.arcs[i].cost != sb.arcs[i].cost)
      return false;
  return true;
}

inline Instance parse_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open file");
  const auto dot = path.rfind('.');
  const std::string ext = dot == std::string::npos ? "" : path.substr(dot);
  if (ext == ".kfg") return parse_kfg(in, path);
  if (ext == ".spfg") return parse_spfg(in, path);
  if (ext == ".gr") return parse_dimacs_road(in, path);
  throw ParseError(path, 0, "unknown extension '" + ext + "' (use .kfg, .spfg, or .gr)");
}

namespace detail {

inline Value uniform(std::mt19937_64& rng, Value lo, Value hi) {
  return lo + static_cast<Value>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

}  // namespace detail

// Grid network: rows x cols internal nodes, a source feeding the first
// column, a sink fed by the last column, rightward arcs between column
// neighbors and both vertical directions inside each column. Arc order:
// source arcs by row, rightward arcs row-major, downward then upward arcs
// row-major, sink arcs by row. Costs and delays are uniform on [1, c_max]
// and [1, d_max].
inline Instance generate_grid(int rows, int cols, Value c_max, Value d_max, std::uint64_t seed,
                              Value fort_budget = 0, Value inter_budget = 0) {
  if (rows < 2 || cols < 2) throw std::invalid_argument("grid needs at least 2x2");
  if (c_max < 1 || d_max < 1) throw std::invalid_argument("cost ranges start at 1");
  std::mt19937_64 rng(seed);
  Instance inst;
  std::ostringstream name;
  name << "grid-" << rows << "x" << cols << "-s" << seed;
  inst.name = name.str();
  inst.sense = inst.authored_sense = Sense::Minimize;
  inst.fort_budget = fort_budget;
  inst.inter_budget = inter_budget;
  ShortestPathRecourse sp;
  sp.node_count = rows * cols + 2;
  sp.source = 0;
  sp.sink = rows * cols + 1;
  const auto node = [&](int r, int c) { return 1 + r * cols + c; };
  const auto push = [&](int tail, int head) {
    sp.arcs.push_back({tail, head, detail::uniform(rng, 1, c_max)});
    inst.depreciation.push_back(detail::uniform(rng, 1, d_max));
  };
  for (int r = 0; r < rows; ++r) push(sp.source, node(r, 0));
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c + 1 < cols; ++c) push(node(r, c), node(r, c + 1));
  for (int r = 0; r + 1 < rows; ++r)
    for (int c = 0; c < cols; ++c) push(node(r, c), node(r + 1, c));
  for (int r = 1; r < rows; ++r)
    for (int c = 0; c < cols; ++c) push(node(r, c), node(r - 1, c));
  for (int r = 0; r < rows; ++r) push(node(r, cols - 1), sp.sink);
  inst.fort_cost.assign(inst.depreciation.size(), 1);
  inst.inter_cost.assign(inst.depreciation.size(), 1);
  inst.recourse = std::move(sp);
  validate(inst);
  return inst;
}

// Knapsack family: depreciations and weights uniform on [1,100], capacity
// half the total weight, unit fortification costs, interdiction costs
// uniform on [1,10]. The interdiction budget grows with the instance id:
// 5% of the total interdiction cost per id step.
inline Instance generate_kfg(int items, std::uint64_t seed, Value fort_budget, int id = 1) {
  if (items < 1) throw std::invalid_argument("need at least one item");
  if (id < 1) throw std::invalid_argument("instance ids start at 1");
  std::mt19937_64 rng(seed);
  Instance inst;
  std::ostringstream name;
  name << "kfg-" << items << "-id" << id << "-s" << seed;
  inst.name = name.str();
  inst.sense = inst.authored_sense = Sense::Maximize;
  inst.fort_budget = fort_budget;
  KnapsackRecourse kp;
  Value weight_sum = 0, g_sum = 0;
  for (int i = 0; i < items; ++i) {
    inst.depreciation.push_back(detail::uniform(rng, 1, 100));
    kp.weight.push_back(detail::uniform(rng, 1, 100));
    weight_sum += kp.weight.back();
    inst.fort_cost.push_back(1);
    inst.inter_cost.push_back(detail::uniform(rng, 1, 10));
    g_sum += inst.inter_cost.back();
  }
  kp.capacity = (weight_sum + 1) / 2;
  inst.inter_budget = std::max<Value>(1, (g_sum * 5 * id + 99) / 100);
  inst.recourse = std::move(kp);
  validate(inst);
  return inst;
}

// Small random instances for the self-check suite: games with at most
// max_assets assets and small budgets, alternating between both families.
inline Instance generate_tiny(std::uint64_t seed, int max_assets = 10) {
  std::mt19937_64 rng(seed);
  if (max_assets < 4) max_assets = 4;
  if (rng() & 1) {
    const int n = static_cast<int>(detail::uniform(rng, 4, std::min(max_assets, 10)));
    Instance inst;
    inst.name = "tiny-kfg-" + std::to_string(seed);
    inst.sense = inst.authored_sense = Sense::Maximize;
    KnapsackRecourse kp;
    Value weight_sum = 0;
    for (int i = 0; i < n; ++i) {
      inst.depreciation.push_back(detail::uniform(rng, 1, 20));
      kp.weight.push_back(detail::uniform(rng, 1, 12));
      weight_sum += kp.weight.back();
      inst.fort_cost.push_back(detail::uniform(rng, 1, 2));
      inst.inter_cost.push_back(detail::uniform(rng, 1, 3));
    }
    kp.capacity = std::max<Value>(1, weight_sum * detail::uniform(rng, 35, 65) / 100);
    inst.fort_budget = detail::uniform(rng, 0, 3);
    inst.inter_budget = detail::uniform(rng, 0, 3);
    inst.recourse = std::move(kp);
    validate(inst);
    return inst;
  }
  const int nodes = static_cast<int>(detail::uniform(rng, 4, 6));
  const int source = 0, sink = nodes - 1;
  ShortestPathRecourse sp;
  sp.node_count = nodes;
  sp.source = source;
  sp.sink = sink;
  int prev = source;
  for (int v = 1; v < sink; ++v)
    if (rng() & 1) {
      sp.arcs.push_back({prev, v, detail::uniform(rng, 1, 10)});
      prev = v;
    }
  sp.arcs.push_back({prev, sink, detail::uniform(rng, 1, 10)});
  const int max_arcs = std::min(max_assets, 10);
  const auto extra = detail::uniform(rng, 2, std::max<Value>(2, max_arcs - static_cast<Value>(sp.arcs.size())));
  for (Value k = 0; k < extra; ++k) {
    const int u = static_cast<int>(detail::uniform(rng, 0, nodes - 2));
    int v = static_cast<int>(detail::uniform(rng, 1, nodes - 1));
    if (v == u) v = sink;
    sp.arcs.push_back({u, v, detail::uniform(rng, 1, 10)});
  }
  Instance inst;
  inst.name = "tiny-spfg-" + std::to_string(seed);
  inst.sense = inst.authored_sense = Sense::Minimize;
  for (std::size_t a = 0; a < sp.arcs.size(); ++a)
    inst.depreciation.push_back(detail::uniform(rng, 1, 10));
  inst.fort_cost.assign(sp.arcs.size(), 1);
  inst.inter_cost.assign(sp.arcs.size(), 1);
  inst.fort_budget = detail::uniform(rng, 0, 3);
  inst.inter_budget = detail::uniform(rng, 0, 3);
  inst.recourse = std::move(sp);
  validate(inst);
  return inst;
}

// One benchmark result line; optional fields stay empty when a run stops on
// a limit without a solution.
struct BenchRow {
  std::string instance;
  std::string settings;
  std::uint64_t seed = 0;
  double time_s = 0.0;
  std::string status;
  std::optional<Value> z;
  std::optional<double> root_bound;
  std::optional<double> root_gap_pct;
  std::int64_t nodes = 0;
  int fort_cuts = 0;
  int int_cuts = 0;
};

inline const char* csv_header() {
  return "instance,settings,seed,time_s,status,z,root_bound,root_gap_pct,nodes,fort_cuts,int_cuts";
}

inline BenchRow make_bench_row(const std::string& instance, const std::string& settings,
                               std::uint64_t seed, const SolveResult& res) {
  BenchRow row;
  row.instance = instance;
  row.settings = settings;
  row.seed = seed;
  row.time_s = res.stats.time_s;
  row.status = to_string(res.status);
  row.nodes = res.stats.nodes;
  row.fort_cuts = res.stats.fort_cuts;
  row.int_cuts = res.stats.int_cuts;
  if (!std::isnan(res.stats.root_bound)) row.root_bound = res.stats.root_bound;
  if (res.has_solution) {
    row.z = res.value;
    if (row.root_bound) {
      const double z = static_cast<double>(res.value);
      row.root_gap_pct = 100.0 * std::abs(z - *row.root_bound) / std::max(1.0, std::abs(z));
    }
  }
  return row;
}

inline std::string to_csv(const BenchRow& row) {
  std::ostringstream out;
  out << row.instance << ',' << row.settings << ',' << row.seed << ',';
  out.precision(3);
  out << std::fixed << row.time_s << ',' << row.status << ',';
  if (row.z) out << *row.z;
  out << ',';
  out.precision(6);
  out.unsetf(std::ios::fixed);
  if (row.root_bound) out << *row.root_bound;
  out << ',';
  out.precision(3);
  out << std::fixed;
  if (row.root_gap_pct) out << *row.root_gap_pct;
  out << ',' << row.nodes << ',' << row.fort_cuts << ',' << row.int_cuts;
  return out.str();
}

// FORTIFY_SEED overrides any configured seed; it must be a plain decimal.
inline std::optional<std::uint64_t> env_seed_override() {
  const char* raw = std::getenv("FORTIFY_SEED");
  if (!raw || !*raw) return std::nullopt;
  std::uint64_t v = 0;
  for (const char* p = raw; *p; ++p) {
    if (!std::isdigit(static_cast<unsigned char>(*p)))
      throw std::invalid_argument("FORTIFY_SEED must be a decimal integer, got '" + std::string(raw) + "'");
    v = v * 10 + static_cast<std::uint64_t>(*p - '0');
  }
  return v;
}

}  // namespace fortify
