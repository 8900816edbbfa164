#pragma once

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "floodit/board.hpp"
#include "floodit/dp2xn.hpp"
#include "floodit/engine.hpp"
#include "floodit/error.hpp"
#include "floodit/oracle.hpp"
#include "floodit/reduction.hpp"

namespace floodit::verify {

// One property checked over many instances. `unknown` counts instances where a budget
// prevented a verdict; they are neither passes nor failures.
struct Check {
  explicit Check(std::string n = {}) : name(std::move(n)) {}

  std::string name;
  std::size_t total = 0;
  std::size_t failed = 0;
  std::size_t unknown = 0;
  std::vector<std::string> notes;  // first few failures

  void pass() { ++total; }
  void fail(std::string why) {
    ++total;
    ++failed;
    if (notes.size() < 8) notes.push_back(std::move(why));
  }
  void undecided(std::string why) {
    ++total;
    ++unknown;
    if (notes.size() < 8) notes.push_back(std::move(why));
  }
  void record(bool ok, const std::function<std::string()>& why) { ok ? pass() : fail(why()); }
  bool ok() const noexcept { return failed == 0 && unknown == 0 && total > 0; }
};

struct Report {
  std::deque<Check> checks;  // references stay valid as checks are added
  double seconds = 0;

  Check& get(const std::string& name) {
    for (auto& c : checks)
      if (c.name == name) return c;
    checks.push_back(Check{name});
    return checks.back();
  }
  bool ok() const {
    return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.ok(); });
  }
  bool any_failed() const {
    return std::any_of(checks.begin(), checks.end(), [](const Check& c) { return c.failed > 0; });
  }
};

inline Board2xN random_board(std::mt19937_64& rng, int n, int colours) {
  if (n < 1 || colours < 1) throw input_error("random board needs n >= 1 and colours >= 1");
  std::uniform_int_distribution<int> pick(0, colours - 1);
  std::vector<colour_id> cells(2 * static_cast<std::size_t>(n));
  for (auto& c : cells) c = pick(rng);
  return Board2xN(n, std::move(cells), default_palette(colours));
}

// The colouring with base-`colours` digits of `code`, cell 0 least significant.
inline Board2xN board_from_code(int n, int colours, std::uint64_t code) {
  std::vector<colour_id> cells(2 * static_cast<std::size_t>(n));
  for (auto& c : cells) {
    c = static_cast<colour_id>(code % static_cast<std::uint64_t>(colours));
    code /= static_cast<std::uint64_t>(colours);
  }
  return Board2xN(n, std::move(cells), default_palette(colours));
}

struct BoardChecks {
  bool targets = true;  // also compare every per-target variant
  bool modes = false;   // reference vs worklist tables
  oracle::SearchBudget budget;
};

// DP against the oracle on one board; feeds "equality", "targets", "witness", "bounds", "modes".
inline void check_board(const Board2xN& board, const BoardChecks& opt, Report& rep) {
  const auto g = to_graph(board);
  const std::string shown = serialize_board(board);
  auto& eq = rep.get("equality");
  auto& wit = rep.get("witness");
  auto& bnd = rep.get("bounds");

  const auto o = oracle::min_moves(g, std::nullopt, std::nullopt, opt.budget);
  const auto s = dp::solve(board);
  if (!o.solved()) {
    eq.undecided("oracle " + std::string(oracle::to_string(o.status)) + " on\n" + shown);
  } else {
    eq.record(o.value == s.value, [&] {
      return "dp " + std::to_string(s.value) + " vs oracle " + std::to_string(o.value) + " on\n" + shown;
    });
    const auto ow = replay(g, o.witness);
    wit.record(ow.flooded && static_cast<int>(o.witness.size()) == o.value,
               [&] { return "oracle witness fails replay on\n" + shown; });
  }
  try {
    const auto seq = dp::reconstruct(s.table);
    const auto dw = replay(g, seq);
    wit.record(dw.flooded && static_cast<int>(seq.size()) == s.value,
               [&] { return "dp sequence fails replay on\n" + shown; });
  } catch (const construction_error& e) {
    wit.fail(std::string(e.what()) + " on\n" + shown);
  }
  const int present = static_cast<int>(colours_present(g).size());
  bnd.record(s.value >= present - 1 && s.value <= g.num_vertices() - 1, [&] {
    return "value " + std::to_string(s.value) + " outside [" + std::to_string(present - 1) + ", " +
           std::to_string(g.num_vertices() - 1) + "] on\n" + shown;
  });

  if (opt.targets) {
    auto& tg = rep.get("targets");
    for (colour_id d = 0; d < board.num_colours(); ++d) {
      dp::SolveOptions so;
      so.target = d;
      const auto sd = dp::solve(board, so);
      const auto od = oracle::min_moves(g, d, std::nullopt, opt.budget);
      if (!od.solved()) {
        tg.undecided("oracle budget on target " + board.palette()[static_cast<std::size_t>(d)]);
        continue;
      }
      bool ok = sd.value == od.value;
      try {
        const auto seq = dp::reconstruct(sd.table);
        const auto r = replay(g, seq);
        ok = ok && r.flooded && r.final_state.colour(0) == d;
      } catch (const construction_error&) {
        ok = false;
      }
      tg.record(ok, [&] {
        return "target " + board.palette()[static_cast<std::size_t>(d)] + ": dp " + std::to_string(sd.value) +
               " vs oracle " + std::to_string(od.value) + " on\n" + shown;
      });
    }
  }
  if (opt.modes) {
    dp::SolveOptions ro;
    ro.mode = dp::Mode::reference;
    const auto sr = dp::solve(board, ro);
    rep.get("modes").record(sr.table.same_values(s.table), [&] { return "reference and worklist tables differ on\n" + shown; });
  }
}

// Every colouring of the 2 x n board with `colours` tokens.
inline Report exhaustive(int n, int colours, BoardChecks opt = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  Report rep;
  std::uint64_t count = 1;
  for (int i = 0; i < 2 * n; ++i) {
    if (count > (std::uint64_t{1} << 40) / static_cast<std::uint64_t>(colours))
      throw capacity_error("too many boards to enumerate");
    count *= static_cast<std::uint64_t>(colours);
  }
  for (std::uint64_t code = 0; code < count; ++code) check_board(board_from_code(n, colours, code), opt, rep);
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

inline Report random_boards(int count, int n, int colours, std::uint64_t seed, BoardChecks opt = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  Report rep;
  std::mt19937_64 rng(seed);
  for (int i = 0; i < count; ++i) check_board(random_board(rng, n, colours), opt, rep);
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

// Connected graph: a random tree plus each further pair with probability `extra`.
inline ColouredGraph random_connected_graph(std::mt19937_64& rng, int vertices, int colours, double extra) {
  std::vector<std::pair<vertex_id, vertex_id>> edges;
  std::bernoulli_distribution coin(extra);
  for (int v = 1; v < vertices; ++v) {
    std::uniform_int_distribution<int> parent(0, v - 1);
    const int p = parent(rng);
    edges.emplace_back(p, v);
    for (int u = 0; u < v; ++u)
      if (u != p && coin(rng)) edges.emplace_back(u, v);
  }
  std::uniform_int_distribution<int> pick(0, colours - 1);
  std::vector<colour_id> colouring(static_cast<std::size_t>(vertices));
  for (auto& c : colouring) c = pick(rng);
  return ColouredGraph::from_edges(vertices, edges, std::move(colouring), default_palette(colours));
}

inline std::string describe(const ColouredGraph& g) {
  std::string s = "graph:";
  for (vertex_id v = 0; v < g.num_vertices(); ++v) {
    s += " " + std::to_string(v) + "=" + g.palette()[static_cast<std::size_t>(g.colour(v))] + "[";
    for (vertex_id w : g.neighbours(v)) s += std::to_string(w) + ",";
    s += "]";
  }
  return s;
}

inline void record_verdict(Check& c, oracle::Verdict v, const std::function<std::string()>& why) {
  if (!v) c.undecided("budget: " + why());
  else if (*v) c.pass();
  else c.fail(why());
}

// Minimum over spanning trees equals the graph optimum, for every target colour.
inline Check spanning_tree_suite(int count, std::uint64_t seed, int max_vertices = 7, int max_colours = 3) {
  Check c{"spanning-tree"};
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> nv(2, max_vertices);
  for (int i = 0; i < count; ++i) {
    const auto g = random_connected_graph(rng, nv(rng), max_colours, 0.3);
    for (colour_id d = 0; d < g.num_colours(); ++d)
      record_verdict(c, oracle::check_spanning_tree_theorem(g, d),
                     [&] { return "target " + std::to_string(d) + " " + describe(g); });
  }
  return c;
}

// Restricting moves to bare(T) keeps the optimum (any final colour). With a fixed target it
// does not: b-a-a with target a needs one leaf move, or two moves inside bare(T).
inline Check no_leaf_suite(int count, std::uint64_t seed, int max_vertices = 9, int max_colours = 3) {
  Check c{"no-leaf-moves"};
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> nv(3, max_vertices);
  for (int i = 0; i < count; ++i) {
    const oracle::TreeView t(random_connected_graph(rng, nv(rng), max_colours, 0.0));
    record_verdict(c, oracle::check_no_leaf_moves(t, {}), [&] { return describe(t.graph()); });
  }
  return c;
}

inline bool induces_connected(const ColouredGraph& g, const std::vector<vertex_id>& set) {
  if (set.empty()) return false;
  std::vector<char> in(static_cast<std::size_t>(g.num_vertices()), 0), seen(in.size(), 0);
  for (vertex_id v : set) in[static_cast<std::size_t>(v)] = 1;
  std::vector<vertex_id> stack{set.front()};
  seen[static_cast<std::size_t>(set.front())] = 1;
  std::size_t reached = 0;
  while (!stack.empty()) {
    const vertex_id v = stack.back();
    stack.pop_back();
    ++reached;
    for (vertex_id w : g.neighbours(v)) {
      if (in[static_cast<std::size_t>(w)] && !seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = 1;
        stack.push_back(w);
      }
    }
  }
  return reached == set.size();
}

// A grows from a random vertex to a random size; B starts as V \ A and absorbs random vertices
// of A adjacent to it until it induces a connected graph.
inline std::pair<std::vector<vertex_id>, std::vector<vertex_id>> random_cover_pair(std::mt19937_64& rng,
                                                                                 const ColouredGraph& g) {
  const int n = g.num_vertices();
  std::vector<char> in_a(static_cast<std::size_t>(n), 0);
  std::uniform_int_distribution<int> vert(0, n - 1), size(1, n);
  std::vector<vertex_id> a{vert(rng)};
  in_a[static_cast<std::size_t>(a.front())] = 1;
  const int want = size(rng);
  while (static_cast<int>(a.size()) < want) {
    std::vector<vertex_id> frontier;
    for (vertex_id v : a)
      for (vertex_id w : g.neighbours(v))
        if (!in_a[static_cast<std::size_t>(w)]) frontier.push_back(w);
    if (frontier.empty()) break;
    const vertex_id w = frontier[std::uniform_int_distribution<std::size_t>(0, frontier.size() - 1)(rng)];
    if (!in_a[static_cast<std::size_t>(w)]) {
      in_a[static_cast<std::size_t>(w)] = 1;
      a.push_back(w);
    }
  }
  std::vector<char> in_b(static_cast<std::size_t>(n), 0);
  std::vector<vertex_id> b;
  for (vertex_id v = 0; v < n; ++v)
    if (!in_a[static_cast<std::size_t>(v)]) {
      in_b[static_cast<std::size_t>(v)] = 1;
      b.push_back(v);
    }
  if (b.empty()) {
    b.push_back(a[std::uniform_int_distribution<std::size_t>(0, a.size() - 1)(rng)]);
    in_b[static_cast<std::size_t>(b.back())] = 1;
  }
  while (!induces_connected(g, b)) {
    std::vector<vertex_id> touching;
    for (vertex_id v = 0; v < n; ++v) {
      if (in_b[static_cast<std::size_t>(v)]) continue;
      for (vertex_id w : g.neighbours(v))
        if (in_b[static_cast<std::size_t>(w)]) {
          touching.push_back(v);
          break;
        }
    }
    const vertex_id v = touching[std::uniform_int_distribution<std::size_t>(0, touching.size() - 1)(rng)];
    in_b[static_cast<std::size_t>(v)] = 1;
    b.push_back(v);
  }
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return {a, b};
}

inline Check subadditivity_suite(int count, std::uint64_t seed, int max_vertices = 7, int max_colours = 3) {
  Check c{"subadditivity"};
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> nv(2, max_vertices);
  for (int i = 0; i < count; ++i) {
    const auto g = random_connected_graph(rng, nv(rng), max_colours, 0.3);
    const auto [a, b] = random_cover_pair(rng, g);
    for (colour_id d = 0; d < g.num_colours(); ++d)
      record_verdict(c, oracle::check_subadditivity(g, a, b, d),
                     [&] { return "target " + std::to_string(d) + " " + describe(g); });
  }
  return c;
}

// Brute force: does some spanning tree T of the section have bare(T) inside the r1-r2 path?
inline bool tree_exists_brute(int n, Border lo, Border hi, vertex_id r1, vertex_id r2) {
  const auto verts = geom::section_vertices(n, lo, hi);
  std::vector<int> local(2 * static_cast<std::size_t>(n), -1);
  for (std::size_t i = 0; i < verts.size(); ++i) local[static_cast<std::size_t>(verts[i])] = static_cast<int>(i);
  std::vector<std::pair<vertex_id, vertex_id>> edges;
  for (vertex_id v : verts) {
    const int row = v / n, col = v % n;
    if (col + 1 < n && local[static_cast<std::size_t>(v + 1)] >= 0) edges.emplace_back(local[static_cast<std::size_t>(v)], local[static_cast<std::size_t>(v + 1)]);
    if (row == 0 && local[static_cast<std::size_t>(v + n)] >= 0) edges.emplace_back(local[static_cast<std::size_t>(v)], local[static_cast<std::size_t>(v + n)]);
  }
  const int k = static_cast<int>(verts.size());
  const auto g = ColouredGraph::from_edges(k, edges, std::vector<colour_id>(static_cast<std::size_t>(k), 0), {"a"});
  bool found = false;
  oracle::for_each_spanning_tree(g, 1'000'000, [&](const auto& tree_edges) {
    if (found) return;
    const oracle::TreeView t(ColouredGraph::from_edges(k, tree_edges, g.colouring(), g.palette()));
    auto path = t.path(local[static_cast<std::size_t>(r1)], local[static_cast<std::size_t>(r2)]);
    std::sort(path.begin(), path.end());
    const auto bare = t.bare();
    found = std::includes(path.begin(), path.end(), bare.begin(), bare.end());
  });
  return found;
}

// tree_exists against brute force on every section of every 2 x n colouring with `colours`
// tokens, for every root pair incident with the bounding borders.
inline Check tree_exists_suite(int n, int colours) {
  Check c{"tree-exists"};
  struct Case {
    Border lo, hi;
    vertex_id r1, r2;
    bool expected;
  };
  std::vector<Case> cases;
  const auto borders = enumerate_borders(n);
  for (Border lo : borders)
    for (Border hi : borders) {
      if (!geom::is_section(lo, hi)) continue;
      for (vertex_id r1 : geom::incident_vertices(n, lo, Side::right)) {
        if (!geom::contains(n, r1, lo, hi)) continue;
        for (vertex_id r2 : geom::incident_vertices(n, hi, Side::left)) {
          if (!geom::contains(n, r2, lo, hi)) continue;
          cases.push_back({lo, hi, r1, r2, tree_exists_brute(n, lo, hi, r1, r2)});
        }
      }
    }
  std::uint64_t count = 1;
  for (int i = 0; i < 2 * n; ++i) count *= static_cast<std::uint64_t>(colours);
  for (std::uint64_t code = 0; code < count; ++code) {
    const auto board = board_from_code(n, colours, code);
    for (const auto& k : cases) {
      c.record(dp::tree_exists(board, k.lo, k.hi, k.r1, k.r2) == k.expected, [&] {
        return "section (" + std::to_string(k.lo.top) + "," + std::to_string(k.lo.bottom) + ")-(" +
               std::to_string(k.hi.top) + "," + std::to_string(k.hi.bottom) + ") roots " + std::to_string(k.r1) +
               "," + std::to_string(k.r2) + ": expected " + (k.expected ? "true" : "false");
      });
    }
  }
  return c;
}

struct ReductionCase {
  std::string name;
  reduction::ReductionReport report;
};

inline std::vector<ReductionCase> reduction_suite(const reduction::ReductionBudgets& budgets = {}) {
  return {{"K2", reduction::verify_reduction(reduction::k2(), budgets)},
          {"P3", reduction::verify_reduction(reduction::p3(), budgets)},
          {"K3", reduction::verify_reduction(reduction::k3(), budgets)}};
}

} // namespace floodit::verify
