#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "floodit/floodit.hpp"

namespace {

using json = nlohmann::json;
using namespace floodit;

enum Exit : int { ok = 0, usage = 1, parse = 2, capacity = 3 };

// Raised for argument problems found after CLI11 has accepted the command line.
struct usage_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw usage_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw usage_error("cannot write " + path);
}

double millis_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

json stats_json(const dp::TableStats& s) {
  return {{"keys", s.keys},         {"zero_keys", s.zero_keys}, {"max_value", s.max_value},
          {"sections", s.sections}, {"sweeps", s.sweeps},       {"last_change_sweep", s.last_change_sweep},
          {"relaxations", s.relaxations}};
}

// ---- solve

struct SolveArgs {
  std::string file;
  std::string method = "auto";
  std::optional<std::string> target;
  bool emit_sequence = false;
  bool as_json = false;
};

int cmd_solve(const SolveArgs& a) {
  const Board2xN board = parse_board(read_file(a.file));
  std::optional<colour_id> target;
  if (a.target) {
    target = board.find_colour(*a.target);
    if (!target) throw usage_error("target colour " + *a.target + " does not occur on the board");
  }
  std::string method = a.method;
  if (method == "auto") method = board.num_cells() <= 12 || board.num_colours() > dp::kMaxColours ? "bfs" : "dp";

  const auto t0 = std::chrono::steady_clock::now();
  int value = 0;
  MoveSeq seq;
  json stats;
  if (method == "dp") {
    dp::SolveOptions opt;
    opt.target = target;
    auto sol = dp::solve(board, opt);
    value = sol.value;
    if (a.emit_sequence) seq = dp::reconstruct(sol.table);
    stats = stats_json(sol.table.stats());
  } else {
    const auto r = oracle::min_moves(to_graph(board), target);
    if (!r.solved()) throw capacity_error(std::string("search ") + oracle::to_string(r.status));
    value = r.value;
    seq = r.witness;
    stats = {{"states", r.states}};
  }
  const double ms = millis_since(t0);

  if (a.emit_sequence) {
    const auto res = replay(to_graph(board), seq);
    if (!res.flooded || static_cast<int>(seq.size()) != value || (target && res.final_state.colour(0) != *target))
      throw construction_error("emitted sequence fails replay");
  }

  if (a.as_json) {
    json out = {{"n", board.width()}, {"colours", board.num_colours()}, {"method", method},
                {"value", value},     {"millis", ms},                    {"stats", stats}};
    if (a.emit_sequence) {
      json moves = json::array();
      for (const auto& m : seq)
        moves.push_back({{"row", board.row_of(m.vertex)},
                         {"col", board.col_of(m.vertex)},
                         {"colour", board.palette()[static_cast<std::size_t>(m.colour)]}});
      out["sequence"] = std::move(moves);
    }
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "method " << method << "\nvalue " << value << "\n";
    if (a.emit_sequence)
      for (const auto& m : seq)
        std::cout << board.row_of(m.vertex) << " " << board.col_of(m.vertex) << " "
                  << board.palette()[static_cast<std::size_t>(m.colour)] << "\n";
  }
  return ok;
}

// ---- reduce

json meta_json(const reduction::ReductionMeta& meta) {
  json islands = json::array();
  for (const auto& g : meta.gadgets) {
    islands.push_back({{"edge", g.edge},
                       {"u", g.u},
                       {"v", g.v},
                       {"squares",
                        {{{"row", 1}, {"col", g.island_u.column}, {"colour", "v" + std::to_string(g.island_u.vertex)}},
                         {{"row", 1}, {"col", g.island_v.column}, {"colour", "v" + std::to_string(g.island_v.vertex)}}}}});
  }
  return {{"m", meta.m},         {"r", meta.r}, {"n", meta.n}, {"N", meta.N}, {"islands", std::move(islands)},
          {"legend", meta.legend}};
}

int cmd_reduce(const std::string& file, const std::string& out, const std::optional<std::string>& meta_path) {
  const auto g = reduction::parse_graph(read_file(file));
  const auto [board, meta] = reduction::build_board(g);
  write_file(out, serialize_board(board));
  const std::string meta_text = meta_json(meta).dump(2) + "\n";
  if (meta_path) write_file(*meta_path, meta_text);
  else std::cout << meta_text;
  return ok;
}

// ---- verify

void print_check(const verify::Check& c) {
  std::cout << (c.ok() ? "PASS " : c.failed ? "FAIL " : "UNKNOWN ") << c.name << " total=" << c.total
            << " failed=" << c.failed << " unknown=" << c.unknown << "\n";
  for (const auto& note : c.notes) std::cout << "  " << note << "\n";
}

struct VerifyArgs {
  std::vector<int> exhaustive;
  std::vector<int> random;
  std::uint64_t seed = 1;
  bool lemmas = false;
  bool reduction = false;
};

int cmd_verify(const VerifyArgs& a) {
  bool failed = false, undecided = false;
  auto take = [&](const verify::Check& c) {
    print_check(c);
    failed = failed || c.failed > 0;
    undecided = undecided || c.unknown > 0;
  };
  if (!a.exhaustive.empty()) {
    const int n = a.exhaustive[0], c = a.exhaustive[1];
    if (n < 1 || c < 1) throw usage_error("--exhaustive needs n >= 1 and c >= 1");
    verify::BoardChecks opt;
    opt.modes = true;
    const auto rep = verify::exhaustive(n, c, opt);
    std::cout << "exhaustive 2x" << n << " with " << c << " colours (" << rep.seconds << " s)\n";
    for (const auto& chk : rep.checks) take(chk);
  }
  if (!a.random.empty()) {
    const int count = a.random[0], n = a.random[1], c = a.random[2];
    if (count < 1 || n < 1 || c < 1) throw usage_error("--random needs positive count, n and c");
    const auto rep = verify::random_boards(count, n, c, a.seed);
    std::cout << "random " << count << " boards 2x" << n << " with " << c << " colours, seed " << a.seed << " ("
              << rep.seconds << " s)\n";
    for (const auto& chk : rep.checks) take(chk);
  }
  if (a.lemmas) {
    std::cout << "lemma suites, seed " << a.seed << "\n";
    take(verify::spanning_tree_suite(30, a.seed));
    take(verify::no_leaf_suite(30, a.seed + 1));
    take(verify::subadditivity_suite(30, a.seed + 2));
  }
  if (a.reduction) {
    for (const auto& rc : verify::reduction_suite()) {
      const auto& r = rc.report;
      std::cout << rc.name << ": n=" << r.meta.n << " N=" << r.meta.N << " palette=" << r.palette
                << " tau=" << r.tau << " strategy=" << r.upper << " bracket=[" << r.lower << ", " << r.upper
                << "] verdict=" << reduction::to_string(r.verdict);
      if (!r.dp_note.empty()) std::cout << " (dp: " << r.dp_note << ")";
      std::cout << "\n";
      const bool must_meet = rc.name == "K2" || rc.name == "P3";
      if (r.verdict == reduction::Verdict::mismatch || (must_meet && r.verdict != reduction::Verdict::equal))
        failed = true;
    }
  }
  if (failed) return usage;
  if (undecided) return capacity;
  return ok;
}

// ---- gen

int cmd_gen(int n, int colours, std::uint64_t seed) {
  if (n < 1 || colours < 1) throw usage_error("gen needs --n >= 1 and --colours >= 1");
  std::mt19937_64 rng(seed);
  std::cout << serialize_board(verify::random_board(rng, n, colours));
  return ok;
}

// ---- bench

struct BenchArgs {
  std::string range;
  int colours = 3;
  std::uint64_t seed = 1;
  bool as_json = false;
};

constexpr std::chrono::seconds kBenchBudget{600};

int cmd_bench(const BenchArgs& a) {
  int lo = 0, hi = 0;
  {
    const auto dots = a.range.find("..");
    try {
      if (dots == std::string::npos) {
        std::size_t used = 0;
        lo = hi = std::stoi(a.range, &used);
        if (used != a.range.size()) throw std::invalid_argument(a.range);
      } else {
        std::size_t u1 = 0, u2 = 0;
        const std::string left = a.range.substr(0, dots), right = a.range.substr(dots + 2);
        lo = std::stoi(left, &u1);
        hi = std::stoi(right, &u2);
        if (u1 != left.size() || u2 != right.size()) throw std::invalid_argument(a.range);
      }
    } catch (const std::logic_error&) {
      throw usage_error("--n-range expects a..b or a single width");
    }
  }
  if (lo < 1 || hi < lo || a.colours < 1) throw usage_error("--n-range needs 1 <= a <= b and --colours >= 1");

  json rows = json::array();
  auto emit = [&] {
    if (a.as_json) {
      std::cout << json{{"colours", a.colours}, {"seed", a.seed}, {"rows", rows}}.dump(2) << "\n";
      return;
    }
    std::cout << "n\tmillis\tvalue\tkeys\tsections\trelaxations\n";
    for (const auto& r : rows)
      std::cout << r["n"] << "\t" << r["millis"].get<double>() << "\t" << r["value"] << "\t" << r["stats"]["keys"]
                << "\t" << r["stats"]["sections"] << "\t" << r["stats"]["relaxations"] << "\n";
  };

  const auto start = std::chrono::steady_clock::now();
  for (int n = lo; n <= hi; ++n) {
    std::mt19937_64 rng(a.seed + static_cast<std::uint64_t>(n));
    const auto board = verify::random_board(rng, n, a.colours);
    dp::SolveOptions opt;
    opt.time_budget = kBenchBudget - (std::chrono::steady_clock::now() - start);
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const auto sol = dp::solve(board, opt);
      rows.push_back({{"n", n},
                      {"colours", board.num_colours()},
                      {"millis", millis_since(t0)},
                      {"value", sol.value},
                      {"stats", stats_json(sol.table.stats())}});
    } catch (const capacity_error& e) {
      emit();
      std::cerr << "floodit: stopped at n=" << n << ": " << e.what() << "\n";
      return capacity;
    }
  }
  emit();
  return ok;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact solver toolkit for Free-Flood-It on 2 x n boards"};
  app.require_subcommand(1);

  SolveArgs sa;
  auto* solve = app.add_subcommand("solve", "Minimum number of moves to flood a board");
  solve->add_option("board", sa.file, "Board file")->required();
  solve->add_option("--method", sa.method, "dp, bfs or auto")->check(CLI::IsMember({"dp", "bfs", "auto"}));
  solve->add_option("--target", sa.target, "Colour token the board must end in");
  solve->add_flag("--emit-sequence", sa.emit_sequence, "Print an optimal move sequence");
  solve->add_flag("--json", sa.as_json, "JSON output");

  std::string graph_file, board_out;
  std::optional<std::string> meta_out;
  auto* reduce = app.add_subcommand("reduce", "Compile a Vertex Cover instance into a 2 x n board");
  reduce->add_option("graph", graph_file, "Graph file")->required();
  reduce->add_option("-o", board_out, "Board output file")->required();
  reduce->add_option("--meta", meta_out, "Metadata output file (JSON); stdout if omitted");

  VerifyArgs va;
  auto* verify_cmd = app.add_subcommand("verify", "Run verification suites");
  verify_cmd->add_option("--exhaustive", va.exhaustive, "n c: every 2 x n board with c colours")->expected(2);
  verify_cmd->add_option("--random", va.random, "count n c: random boards")->expected(3);
  verify_cmd->add_option("--seed", va.seed, "Seed for --random and --lemmas");
  verify_cmd->add_flag("--lemmas", va.lemmas, "Spanning-tree, no-leaf-moves and subadditivity suites");
  verify_cmd->add_flag("--reduction", va.reduction, "Reduction checks on K2, P3 and K3");

  int gen_n = 0, gen_c = 0;
  std::uint64_t gen_seed = 1;
  auto* gen = app.add_subcommand("gen", "Random board on standard output");
  gen->add_option("--n", gen_n, "Width")->required();
  gen->add_option("--colours", gen_c, "Number of colour tokens")->required();
  gen->add_option("--seed", gen_seed, "Seed");

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "DP wall time over a range of widths");
  bench->add_option("--n-range", ba.range, "a..b")->required();
  bench->add_option("--colours", ba.colours, "Number of colour tokens");
  bench->add_option("--seed", ba.seed, "Seed");
  bench->add_flag("--json", ba.as_json, "JSON output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return usage;
  }

  try {
    if (*solve) return cmd_solve(sa);
    if (*reduce) return cmd_reduce(graph_file, board_out, meta_out);
    if (*verify_cmd) {
      if (va.exhaustive.empty() && va.random.empty() && !va.lemmas && !va.reduction)
        throw usage_error("verify needs at least one of --exhaustive, --random, --lemmas, --reduction");
      return cmd_verify(va);
    }
    if (*gen) return cmd_gen(gen_n, gen_c, gen_seed);
    if (*bench) return cmd_bench(ba);
  } catch (const usage_error& e) {
    std::cerr << "floodit: " << e.what() << "\n";
    return usage;
  } catch (const parse_error& e) {
    std::cerr << "floodit: parse error: " << e.what() << "\n";
    return parse;
  } catch (const input_error& e) {
    std::cerr << "floodit: " << e.what() << "\n";
    return usage;
  } catch (const std::exception& e) {
    // capacity_error, and anything that kept a result from being produced
    std::cerr << "floodit: " << e.what() << "\n";
    return capacity;
  }
  return usage;
}
