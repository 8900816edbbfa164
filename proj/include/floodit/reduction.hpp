#pragma once

#include <algorithm>
#include <chrono>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "floodit/board.hpp"
#include "floodit/dp2xn.hpp"
#include "floodit/engine.hpp"
#include "floodit/error.hpp"

namespace floodit::reduction {

// Simple graph for Vertex Cover; edges stored with u < v in input order.
struct VCInstance {
  int num_vertices = 0;
  std::vector<std::pair<int, int>> edges;
};

struct Island {
  int column = 0;  // bottom row
  int vertex = 0;  // the graph vertex whose colour it carries
};

struct GadgetInfo {
  int edge = 0;
  int u = 0, v = 0;
  int first_column = 0;
  Island island_u, island_v;
};

struct ReductionMeta {
  int m = 0;
  int r = 0;
  int n = 0;
  int N = 0;
  std::vector<GadgetInfo> gadgets;             // islands per edge
  std::map<std::string, std::string> legend;  // colour token -> role
};

// Validates and normalizes; throws input_error.
inline VCInstance make_instance(int num_vertices, std::vector<std::pair<int, int>> edges) {
  VCInstance g;
  g.num_vertices = num_vertices;
  std::set<std::pair<int, int>> seen;
  std::vector<char> used(static_cast<std::size_t>(std::max(num_vertices, 0)), 0);
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || u >= num_vertices || v >= num_vertices) throw input_error("edge endpoint out of range");
    if (u == v) throw input_error("self-loop at vertex " + std::to_string(u));
    if (u > v) std::swap(u, v);
    if (!seen.insert({u, v}).second)
      throw input_error("duplicate edge " + std::to_string(u) + " " + std::to_string(v));
    used[static_cast<std::size_t>(u)] = used[static_cast<std::size_t>(v)] = 1;
    g.edges.emplace_back(u, v);
  }
  if (g.edges.empty()) throw input_error("graph has no edges");
  for (int x = 0; x < num_vertices; ++x)
    if (!used[static_cast<std::size_t>(x)]) throw input_error("isolated vertex " + std::to_string(x));
  return g;
}

// One edge per line "u v" (0-based), '#' comments, blank lines ignored, optional first line
// "p <num_vertices>"; otherwise the vertex count is max id + 1.
inline VCInstance parse_graph(std::string_view text) {
  const auto lines = floodit::detail::split_lines(text);
  std::optional<int> declared;
  std::size_t declared_line = 0;
  std::vector<std::pair<int, int>> edges;
  std::vector<std::size_t> edge_line;
  std::set<std::pair<int, int>> seen;
  int max_id = -1;

  auto number = [](std::string_view tok, int& out) {
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
    return ec == std::errc{} && ptr == tok.data() + tok.size() && out >= 0;
  };

  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    const auto trimmed = floodit::detail::trim(lines[i]);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    const auto tok = floodit::detail::split_ws(trimmed);
    if (tok.size() == 2 && tok[0] == "p") {
      if (declared || !edges.empty()) throw parse_error(line_no, "header line must come first and only once");
      int nv = 0;
      if (!number(tok[1], nv) || nv < 1) throw parse_error(line_no, "malformed vertex count");
      declared = nv;
      declared_line = line_no;
      continue;
    }
    int u = 0, v = 0;
    if (tok.size() != 2 || !number(tok[0], u) || !number(tok[1], v))
      throw parse_error(line_no, "expected an edge \"u v\" with 0-based decimal ids");
    if (u == v) throw parse_error(line_no, "self-loop at vertex " + std::to_string(u));
    if (!seen.insert({std::min(u, v), std::max(u, v)}).second)
      throw parse_error(line_no, "duplicate edge " + std::to_string(u) + " " + std::to_string(v));
    if (declared && std::max(u, v) >= *declared)
      throw parse_error(line_no, "vertex id exceeds the declared vertex count");
    edges.emplace_back(u, v);
    edge_line.push_back(line_no);
    max_id = std::max({max_id, u, v});
  }
  if (edges.empty()) throw parse_error(lines.size() + 1, "graph has no edges");
  const int nv = declared.value_or(max_id + 1);
  std::vector<char> used(static_cast<std::size_t>(nv), 0);
  for (auto [u, v] : edges) used[static_cast<std::size_t>(u)] = used[static_cast<std::size_t>(v)] = 1;
  for (int x = 0; x < nv; ++x) {
    if (!used[static_cast<std::size_t>(x)])
      throw parse_error(declared ? declared_line : edge_line.back(), "isolated vertex " + std::to_string(x));
  }
  return make_instance(nv, std::move(edges));
}

inline int gadget_width(const VCInstance& g) { return 2 * (2 * static_cast<int>(g.edges.size()) + g.num_vertices) + 6; }

// Gadget for edge e = uv, width 2r + 6:
//   columns  x_r .. x_1 | a u a a v a (bottom) / a a a a a a (top) | x_1 .. x_r
// Each flank colour fills both squares of its column; u and v are single-square islands on the
// bottom row, surrounded by the gadget's core colour a_e. Gadgets are placed left to right.
inline std::pair<Board2xN, ReductionMeta> build_board(const VCInstance& g) {
  ReductionMeta meta;
  meta.m = static_cast<int>(g.edges.size());
  meta.r = 2 * meta.m + g.num_vertices;
  const int w = 2 * meta.r + 6;
  meta.n = meta.m * w;
  meta.N = meta.m * meta.r + 2 * meta.m - 1;

  std::vector<std::string> cell_tokens(2 * static_cast<std::size_t>(meta.n));
  auto put = [&](int row, int col, const std::string& tok) {
    cell_tokens[static_cast<std::size_t>(row * meta.n + col)] = tok;
  };
  for (int e = 0; e < meta.m; ++e) {
    const auto [u, v] = g.edges[static_cast<std::size_t>(e)];
    const int base = e * w;
    const std::string core = "a" + std::to_string(e);
    meta.legend[core] = "core a_" + std::to_string(e);
    for (int i = 1; i <= meta.r; ++i) {
      const std::string x = "x" + std::to_string(e) + "_" + std::to_string(i);
      meta.legend[x] = "flank x_" + std::to_string(i) + "^" + std::to_string(e);
      for (int row = 0; row < 2; ++row) {
        put(row, base + meta.r - i, x);
        put(row, base + meta.r + 5 + i, x);
      }
    }
    for (int k = 0; k < 6; ++k) {
      put(0, base + meta.r + k, core);
      put(1, base + meta.r + k, core);
    }
    const std::string tu = "v" + std::to_string(u), tv = "v" + std::to_string(v);
    meta.legend[tu] = "vertex " + std::to_string(u);
    meta.legend[tv] = "vertex " + std::to_string(v);
    put(1, base + meta.r + 1, tu);
    put(1, base + meta.r + 4, tv);
    meta.gadgets.push_back({e, u, v, base, {base + meta.r + 1, u}, {base + meta.r + 4, v}});
  }

  // Dense ids by first occurrence, top row then bottom row, as the text format assigns them.
  std::vector<std::string> palette;
  std::map<std::string, colour_id> ids;
  std::vector<colour_id> cells;
  cells.reserve(cell_tokens.size());
  for (const auto& tok : cell_tokens) {
    auto [it, inserted] = ids.try_emplace(tok, static_cast<colour_id>(palette.size()));
    if (inserted) palette.push_back(tok);
    cells.push_back(it->second);
  }
  return {Board2xN(meta.n, std::move(cells), std::move(palette)), std::move(meta)};
}

struct CoverResult {
  int size = 0;
  std::vector<int> cover;  // ascending
};

inline bool is_vertex_cover(const VCInstance& g, const std::vector<int>& cover) {
  std::vector<char> in(static_cast<std::size_t>(g.num_vertices), 0);
  for (int x : cover) {
    if (x < 0 || x >= g.num_vertices) return false;
    in[static_cast<std::size_t>(x)] = 1;
  }
  return std::all_of(g.edges.begin(), g.edges.end(), [&](const auto& e) {
    return in[static_cast<std::size_t>(e.first)] || in[static_cast<std::size_t>(e.second)];
  });
}

// Brute force over subsets in order of size.
inline CoverResult min_vertex_cover(const VCInstance& g, int cap = 20) {
  if (g.num_vertices > cap)
    throw capacity_error("vertex cover brute force capped at " + std::to_string(cap) + " vertices");
  const int nv = g.num_vertices;
  for (int k = 0; k <= nv; ++k) {
    // Gosper's hack over k-subsets
    if (k == 0) {
      if (g.edges.empty()) return {0, {}};
      continue;
    }
    for (std::uint32_t s = (1u << k) - 1; s < (1u << nv);) {
      std::vector<int> cover;
      for (int x = 0; x < nv; ++x)
        if (s >> x & 1) cover.push_back(x);
      if (is_vertex_cover(g, cover)) return {k, cover};
      const std::uint32_t c = s & (~s + 1), r = s + c;
      s = (((r ^ s) >> 2) / c) | r;
    }
  }
  return {nv, {}};
}

// The flooding strategy a cover induces: per gadget, one core move that recolours the island
// of the endpoint not chosen into the core, then x_1 .. x_r from the core; then m - 1 moves
// linking the gadgets; then one move per distinct colour among the islands left over.
inline MoveSeq cover_strategy(const VCInstance& g, const std::vector<int>& cover, const Board2xN& board,
                              const ReductionMeta& meta) {
  if (!is_vertex_cover(g, cover)) throw input_error("not a vertex cover");
  std::vector<char> in(static_cast<std::size_t>(g.num_vertices), 0);
  for (int x : cover) in[static_cast<std::size_t>(x)] = 1;
  auto colour_of = [&](const std::string& tok) {
    auto c = board.find_colour(tok);
    if (!c) throw input_error("board does not carry colour " + tok);
    return *c;
  };

  MoveSeq seq;
  std::vector<int> leftover;
  for (const auto& gd : meta.gadgets) {
    const int chosen = in[static_cast<std::size_t>(gd.u)] ? gd.u : gd.v;  // smaller id when both
    const Island other = chosen == gd.u ? gd.island_v : gd.island_u;
    const vertex_id core_vertex = board.vertex(0, gd.first_column + meta.r);
    seq.push_back({board.vertex(1, other.column), colour_of("a" + std::to_string(gd.edge))});
    for (int i = 1; i <= meta.r; ++i)
      seq.push_back({core_vertex, colour_of("x" + std::to_string(gd.edge) + "_" + std::to_string(i))});
    leftover.push_back(chosen);
  }
  const vertex_id hub = board.vertex(0, meta.gadgets.front().first_column + meta.r);
  for (std::size_t e = 1; e < meta.gadgets.size(); ++e)
    seq.push_back({hub, colour_of("x" + std::to_string(meta.gadgets[e].edge) + "_" + std::to_string(meta.r))});
  std::sort(leftover.begin(), leftover.end());
  leftover.erase(std::unique(leftover.begin(), leftover.end()), leftover.end());
  for (int x : leftover) seq.push_back({hub, colour_of("v" + std::to_string(x))});

  const auto res = replay(to_graph(board), seq);
  if (!res.flooded) throw construction_error("cover strategy does not flood the board");
  return seq;
}

enum class Verdict { equal, unresolved, mismatch };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::equal: return "EQUAL";
    case Verdict::unresolved: return "UNRESOLVED";
    case Verdict::mismatch: return "MISMATCH";
  }
  return "?";
}

struct ReductionBudgets {
  std::chrono::steady_clock::duration dp_time = std::chrono::seconds(10);
  std::size_t dp_entries = 50'000'000;
  int cover_cap = 20;
};

struct ReductionReport {
  ReductionMeta meta;
  int palette = 0;
  int tau = 0;
  int target = 0;  // N + tau
  int upper = 0;   // strategy length with a minimum cover
  int colour_bound = 0;
  std::optional<int> dp_value;
  std::string dp_note;  // why the DP bound is missing, if it is
  int lower = 0;
  Verdict verdict = Verdict::unresolved;
};

// Brackets the flood number of the compiled board: the cover strategy from above, the colour
// count (and the DP when it fits) from below.
inline ReductionReport verify_reduction(const VCInstance& g, const ReductionBudgets& budgets = {}) {
  ReductionReport rep;
  auto [board, meta] = build_board(g);
  rep.meta = meta;
  rep.palette = board.num_colours();
  const auto mvc = min_vertex_cover(g, budgets.cover_cap);
  rep.tau = mvc.size;
  rep.target = meta.N + mvc.size;
  rep.upper = static_cast<int>(cover_strategy(g, mvc.cover, board, meta).size());
  rep.colour_bound = rep.palette - 1;
  rep.lower = rep.colour_bound;
  if (rep.palette > dp::kMaxColours) {
    rep.dp_note = "palette over the DP cap";
  } else if (rep.lower < rep.upper) {
    dp::SolveOptions opt;
    opt.time_budget = budgets.dp_time;
    opt.max_entries = budgets.dp_entries;
    try {
      rep.dp_value = dp::solve(board, opt).value;
      rep.lower = std::max(rep.lower, *rep.dp_value);
    } catch (const capacity_error& e) {
      rep.dp_note = e.what();
    }
  } else {
    rep.dp_note = "not needed: colour bound meets the strategy";
  }
  if (rep.lower == rep.upper)
    rep.verdict = rep.upper == rep.target ? Verdict::equal : Verdict::mismatch;
  else
    rep.verdict = rep.lower > rep.upper ? Verdict::mismatch : Verdict::unresolved;
  return rep;
}

// Fixed small instances.
inline VCInstance k2() { return make_instance(2, {{0, 1}}); }
inline VCInstance p3() { return make_instance(3, {{0, 1}, {1, 2}}); }
inline VCInstance k3() { return make_instance(3, {{0, 1}, {1, 2}, {0, 2}}); }

} // namespace floodit::reduction
