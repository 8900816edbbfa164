#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "floodit/engine.hpp"
#include "floodit/error.hpp"

namespace floodit::oracle {

struct SearchBudget {
  std::size_t max_states = 20'000'000;
  int max_depth = std::numeric_limits<int>::max();
};

enum class Status { solved, budget_exhausted, unreachable };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::solved: return "solved";
    case Status::budget_exhausted: return "budget_exhausted";
    case Status::unreachable: return "unreachable";
  }
  return "?";
}

struct SearchResult {
  Status status = Status::unreachable;
  int value = -1;  // meaningful only when solved
  MoveSeq witness;
  std::size_t states = 0;

  bool solved() const noexcept { return status == Status::solved; }
};

namespace detail {

// Each move removes at most one colour from the set present; bringing in an absent target
// removes none.
inline int colour_lower_bound(std::span<const std::uint8_t> state, std::optional<colour_id> target) {
  std::uint64_t seen[4] = {0, 0, 0, 0};
  int k = 0;
  for (auto c : state) {
    auto& w = seen[c >> 6];
    const auto bit = std::uint64_t{1} << (c & 63);
    if (!(w & bit)) {
      w |= bit;
      ++k;
    }
  }
  if (target) {
    const bool has = (seen[*target >> 6] >> (*target & 63)) & 1;
    return has ? k - 1 : k;
  }
  return k - 1;
}

inline bool is_goal(std::span<const std::uint8_t> state, std::optional<colour_id> target) {
  const auto c0 = state.front();
  if (target && c0 != *target) return false;
  return std::all_of(state.begin(), state.end(), [&](auto c) { return c == c0; });
}

struct PackedCodec {
  int bits;
  std::uint64_t encode(std::span<const std::uint8_t> s) const {
    std::uint64_t k = 0;
    for (std::size_t i = 0; i < s.size(); ++i) k |= std::uint64_t{s[i]} << (i * static_cast<std::size_t>(bits));
    return k;
  }
  void decode(std::uint64_t k, std::span<std::uint8_t> out) const {
    const std::uint64_t mask = (std::uint64_t{1} << bits) - 1;
    for (std::size_t i = 0; i < out.size(); ++i)
      out[i] = static_cast<std::uint8_t>((k >> (i * static_cast<std::size_t>(bits))) & mask);
  }
};

struct StringCodec {
  std::string encode(std::span<const std::uint8_t> s) const { return std::string(s.begin(), s.end()); }
  void decode(const std::string& k, std::span<std::uint8_t> out) const { std::copy(k.begin(), k.end(), out.begin()); }
};

template <class Key, class Codec>
SearchResult bfs(const ColouredGraph& g, std::optional<colour_id> target, const std::vector<char>& allowed,
                 const SearchBudget& budget, const Codec& codec, int upper_bound) {
  const auto n = static_cast<std::size_t>(g.num_vertices());
  const int c = g.num_colours();
  const auto& adj = g.adjacency();

  struct Parent {
    Key from;
    Move move;
  };
  std::unordered_map<Key, Parent> parent;
  std::vector<std::uint8_t> start(n);
  for (std::size_t v = 0; v < n; ++v) start[v] = static_cast<std::uint8_t>(g.colour(static_cast<vertex_id>(v)));

  SearchResult res;
  const Key root = codec.encode(start);
  parent.emplace(root, Parent{root, Move{}});
  if (is_goal(start, target)) {
    res.status = Status::solved;
    res.value = 0;
    res.states = 1;
    return res;
  }

  std::vector<Key> frontier{root}, next;
  std::vector<std::uint8_t> cur(n), child(n);
  std::vector<char> mark(n);
  std::vector<vertex_id> comp;
  bool cut_by_depth = false;

  for (int depth = 0; !frontier.empty(); ++depth) {
    if (depth >= budget.max_depth) {
      cut_by_depth = true;
      break;
    }
    next.clear();
    for (const Key& key : frontier) {
      codec.decode(key, cur);
      std::fill(mark.begin(), mark.end(), 0);
      for (std::size_t v = 0; v < n; ++v) {
        if (mark[v]) continue;
        floodit::detail::collect_component(adj, std::span<const std::uint8_t>(cur), static_cast<vertex_id>(v), mark,
                                           comp);
        vertex_id rep = -1;
        for (vertex_id w : comp) {
          if (allowed.empty() || allowed[static_cast<std::size_t>(w)]) {
            rep = w;
            break;
          }
        }
        if (rep < 0) continue;
        const auto own = cur[v];
        for (int d = 0; d < c; ++d) {
          if (d == own) continue;
          child = cur;
          for (vertex_id w : comp) child[static_cast<std::size_t>(w)] = static_cast<std::uint8_t>(d);
          if (depth + 1 + colour_lower_bound(child, target) > upper_bound) continue;
          Key ck = codec.encode(child);
          auto [it, inserted] = parent.try_emplace(ck, Parent{key, Move{rep, d}});
          if (!inserted) continue;
          if (is_goal(child, target)) {
            res.status = Status::solved;
            res.value = depth + 1;
            res.states = parent.size();
            for (Key k = ck; !(k == root);) {
              const auto& p = parent.at(k);
              res.witness.push_back(p.move);
              k = p.from;
            }
            std::reverse(res.witness.begin(), res.witness.end());
            return res;
          }
          if (parent.size() > budget.max_states) {
            res.status = Status::budget_exhausted;
            res.states = parent.size();
            return res;
          }
          next.push_back(std::move(ck));
        }
      }
    }
    frontier.swap(next);
  }
  res.states = parent.size();
  res.status = cut_by_depth ? Status::budget_exhausted : Status::unreachable;
  return res;
}

} // namespace detail

// Exact minimum number of moves flooding `g` (to `target` if given), playing only at vertices in
// `allowed_vertices` if given. Breadth-first over colourings; the first goal found is optimal.
inline SearchResult min_moves(const ColouredGraph& g, std::optional<colour_id> target = std::nullopt,
                              std::optional<std::span<const vertex_id>> allowed_vertices = std::nullopt,
                              const SearchBudget& budget = {}) {
  const auto n = static_cast<std::size_t>(g.num_vertices());
  if (target && (*target < 0 || *target >= g.num_colours())) throw input_error("target colour out of range");
  if (g.num_colours() > 256) throw capacity_error("oracle supports at most 256 colours");
  std::vector<char> allowed;
  if (allowed_vertices) {
    if (allowed_vertices->empty()) throw input_error("allowed vertex set is empty");
    allowed.assign(n, 0);
    for (vertex_id v : *allowed_vertices) {
      if (v < 0 || static_cast<std::size_t>(v) >= n) throw input_error("allowed vertex out of range");
      allowed[static_cast<std::size_t>(v)] = 1;
    }
  }

  // Upper bound for pruning: greedy flooding (plus a final recolour) when unrestricted.
  int upper = std::numeric_limits<int>::max() / 2;
  if (!allowed_vertices) {
    const auto greedy = greedy_flood(g);
    upper = static_cast<int>(greedy.size());
    if (target) {
      const auto end = replay(g, greedy).final_state;
      if (end.colour(0) != *target) ++upper;
    }
  }

  int bits = 1;
  while ((1 << bits) < g.num_colours()) ++bits;
  if (n * static_cast<std::size_t>(bits) <= 64) {
    return detail::bfs<std::uint64_t>(g, target, allowed, budget, detail::PackedCodec{bits}, upper);
  }
  return detail::bfs<std::string>(g, target, allowed, budget, detail::StringCodec{}, upper);
}

// A spanning tree (or any tree) with its leaf structure.
class TreeView {
public:
  explicit TreeView(ColouredGraph tree) : tree_(std::move(tree)) {
    if (tree_.num_edges() + 1 != static_cast<std::size_t>(tree_.num_vertices()))
      throw input_error("graph is not a tree (|E| != |V| - 1)");
  }

  const ColouredGraph& graph() const noexcept { return tree_; }

  // Non-leaf vertices (degree >= 2).
  std::vector<vertex_id> bare() const {
    std::vector<vertex_id> out;
    for (vertex_id v = 0; v < tree_.num_vertices(); ++v)
      if (tree_.neighbours(v).size() >= 2) out.push_back(v);
    return out;
  }

  // Vertices of the unique x-y path, from x to y.
  std::vector<vertex_id> path(vertex_id x, vertex_id y) const {
    const auto n = static_cast<std::size_t>(tree_.num_vertices());
    if (x < 0 || y < 0 || static_cast<std::size_t>(x) >= n || static_cast<std::size_t>(y) >= n)
      throw input_error("path endpoint out of range");
    std::vector<vertex_id> prev(n, -1);
    std::vector<vertex_id> queue{x};
    prev[static_cast<std::size_t>(x)] = x;
    for (std::size_t i = 0; i < queue.size(); ++i) {
      for (vertex_id w : tree_.neighbours(queue[i])) {
        if (prev[static_cast<std::size_t>(w)] < 0) {
          prev[static_cast<std::size_t>(w)] = queue[i];
          queue.push_back(w);
        }
      }
    }
    std::vector<vertex_id> out{y};
    while (out.back() != x) out.push_back(prev[static_cast<std::size_t>(out.back())]);
    std::reverse(out.begin(), out.end());
    return out;
  }

private:
  ColouredGraph tree_;
};

// Calls `fn` once per spanning tree (as an edge list), by deletion/contraction over the edge list.
// Throws capacity_error once more than `limit` trees have been produced.
inline void for_each_spanning_tree(const ColouredGraph& g, std::size_t limit,
                                   const std::function<void(const std::vector<std::pair<vertex_id, vertex_id>>&)>& fn) {
  const int n = g.num_vertices();
  std::vector<std::pair<vertex_id, vertex_id>> edges;
  for (vertex_id u = 0; u < n; ++u)
    for (vertex_id v : g.neighbours(u))
      if (u < v) edges.emplace_back(u, v);

  std::vector<std::pair<vertex_id, vertex_id>> chosen;
  std::size_t produced = 0;

  auto find = [](std::vector<int>& p, int x) {
    while (p[static_cast<std::size_t>(x)] != x) x = p[static_cast<std::size_t>(x)] = p[static_cast<std::size_t>(p[static_cast<std::size_t>(x)])];
    return x;
  };
  // Can the chosen edges plus edges[from..] still connect everything?
  auto connectable = [&](std::size_t from) {
    std::vector<int> p(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = i;
    int comps = n;
    auto join = [&](vertex_id a, vertex_id b) {
      a = find(p, a);
      b = find(p, b);
      if (a != b) {
        p[static_cast<std::size_t>(a)] = b;
        --comps;
      }
    };
    for (auto [a, b] : chosen) join(a, b);
    for (std::size_t i = from; i < edges.size(); ++i) join(edges[i].first, edges[i].second);
    return comps == 1;
  };

  std::function<void(std::size_t, std::vector<int>)> rec = [&](std::size_t i, std::vector<int> parent) {
    if (static_cast<int>(chosen.size()) == n - 1) {
      if (++produced > limit) throw capacity_error("spanning tree limit exceeded");
      fn(chosen);
      return;
    }
    if (i == edges.size()) return;
    const auto [u, v] = edges[i];
    const int ru = find(parent, u), rv = find(parent, v);
    if (ru != rv) {
      auto contracted = parent;
      contracted[static_cast<std::size_t>(ru)] = rv;
      chosen.push_back(edges[i]);
      rec(i + 1, std::move(contracted));
      chosen.pop_back();
    }
    if (connectable(i + 1)) rec(i + 1, std::move(parent));
  };

  std::vector<int> parent(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) parent[static_cast<std::size_t>(i)] = i;
  rec(0, std::move(parent));
}

inline std::vector<TreeView> spanning_trees(const ColouredGraph& g, std::size_t limit = 100'000) {
  std::vector<TreeView> out;
  for_each_spanning_tree(g, limit, [&](const auto& edges) {
    out.emplace_back(ColouredGraph::from_edges(g.num_vertices(), edges, g.colouring(), g.palette()));
  });
  return out;
}

// nullopt means the budget prevented a verdict.
using Verdict = std::optional<bool>;

inline Verdict check_spanning_tree_theorem(const ColouredGraph& g, colour_id d, const SearchBudget& budget = {},
                                           std::size_t tree_limit = 100'000) {
  const auto whole = min_moves(g, d, std::nullopt, budget);
  if (!whole.solved()) return std::nullopt;
  int best = std::numeric_limits<int>::max();
  bool unknown = false;
  for (const auto& t : spanning_trees(g, tree_limit)) {
    const auto r = min_moves(t.graph(), d, std::nullopt, budget);
    if (!r.solved()) {
      unknown = true;
      continue;
    }
    best = std::min(best, r.value);
  }
  // A tree optimum below the graph optimum is a definite failure even if other trees were unknown.
  if (best < whole.value) return false;
  if (unknown) return std::nullopt;
  return best == whole.value;
}

inline Verdict check_no_leaf_moves(const TreeView& t, const SearchBudget& budget = {},
                                   std::optional<colour_id> target = std::nullopt) {
  const auto bare = t.bare();
  if (bare.empty()) throw input_error("tree needs at least 3 vertices for a non-empty bare subtree");
  const auto free_run = min_moves(t.graph(), target, std::nullopt, budget);
  const auto restricted = min_moves(t.graph(), target, std::span<const vertex_id>(bare), budget);
  if (!free_run.solved() || restricted.status == Status::budget_exhausted) return std::nullopt;
  if (!restricted.solved()) return false;
  return restricted.value == free_run.value;
}

inline Verdict check_subadditivity(const ColouredGraph& g, std::span<const vertex_id> a, std::span<const vertex_id> b,
                                   colour_id d, const SearchBudget& budget = {}) {
  std::vector<char> covered(static_cast<std::size_t>(g.num_vertices()), 0);
  for (vertex_id v : a) covered.at(static_cast<std::size_t>(v)) = 1;
  for (vertex_id v : b) covered.at(static_cast<std::size_t>(v)) = 1;
  if (std::find(covered.begin(), covered.end(), 0) != covered.end()) throw input_error("A and B must cover V");
  const auto ga = induced_subgraph(g, a);  // throws if disconnected
  const auto gb = induced_subgraph(g, b);
  const auto whole = min_moves(g, d, std::nullopt, budget);
  const auto ra = min_moves(ga.graph, d, std::nullopt, budget);
  const auto rb = min_moves(gb.graph, d, std::nullopt, budget);
  if (!whole.solved() || !ra.solved() || !rb.solved()) return std::nullopt;
  return whole.value <= ra.value + rb.value;
}

} // namespace floodit::oracle
