#pragma once

#include <algorithm>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "floodit/error.hpp"

namespace floodit {

using vertex_id = int;
using colour_id = int;

// A single flood move: the monochromatic component containing `vertex` takes `colour`.
struct Move {
  vertex_id vertex = 0;
  colour_id colour = 0;

  friend bool operator==(const Move&, const Move&) = default;
};

using MoveSeq = std::vector<Move>;

// Palette tokens "a", "b", ... for up to 26 colours, "c26", "c27", ... beyond.
inline std::vector<std::string> default_palette(int size) {
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(size));
  for (int i = 0; i < size; ++i) {
    out.push_back(i < 26 ? std::string(1, static_cast<char>('a' + i)) : "c" + std::to_string(i));
  }
  return out;
}

// Connected, loop-free, undirected graph with a vertex colouring over a palette of tokens.
//
// The colouring is the full game state. Structure (adjacency, palette) is shared between
// copies, so recolouring a graph is a vector copy.
class ColouredGraph {
public:
  ColouredGraph(std::vector<std::vector<vertex_id>> adjacency, std::vector<colour_id> colouring,
                std::vector<std::string> palette)
      : colouring_(std::move(colouring)) {
    auto s = std::make_shared<Structure>();
    s->adjacency = std::move(adjacency);
    s->palette = std::move(palette);
    const auto n = s->adjacency.size();
    if (n == 0) throw input_error("graph must have at least one vertex");
    if (colouring_.size() != n) throw input_error("colouring size does not match vertex count");
    if (s->palette.empty()) throw input_error("palette must be non-empty");
    for (std::size_t v = 0; v < n; ++v) {
      auto& nb = s->adjacency[v];
      std::sort(nb.begin(), nb.end());
      nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
      for (vertex_id w : nb) {
        if (w < 0 || static_cast<std::size_t>(w) >= n) throw input_error("neighbour id out of range");
        if (static_cast<std::size_t>(w) == v) throw input_error("self-loop at vertex " + std::to_string(v));
      }
      s->num_edges += nb.size();
    }
    for (std::size_t v = 0; v < n; ++v) {
      for (vertex_id w : s->adjacency[v]) {
        const auto& back = s->adjacency[static_cast<std::size_t>(w)];
        if (!std::binary_search(back.begin(), back.end(), static_cast<vertex_id>(v)))
          throw input_error("adjacency is not symmetric");
      }
    }
    s->num_edges /= 2;
    for (colour_id c : colouring_) {
      if (c < 0 || static_cast<std::size_t>(c) >= s->palette.size())
        throw input_error("colour id out of palette range");
    }
    structure_ = std::move(s);
    if (!is_connected()) throw input_error("graph is not connected");
  }

  // Edge-list convenience constructor.
  static ColouredGraph from_edges(int num_vertices, std::span<const std::pair<vertex_id, vertex_id>> edges,
                                  std::vector<colour_id> colouring, std::vector<std::string> palette) {
    std::vector<std::vector<vertex_id>> adj(static_cast<std::size_t>(std::max(num_vertices, 0)));
    for (auto [u, v] : edges) {
      if (u < 0 || v < 0 || u >= num_vertices || v >= num_vertices) throw input_error("edge endpoint out of range");
      adj[static_cast<std::size_t>(u)].push_back(v);
      adj[static_cast<std::size_t>(v)].push_back(u);
    }
    return ColouredGraph(std::move(adj), std::move(colouring), std::move(palette));
  }

  int num_vertices() const noexcept { return static_cast<int>(structure_->adjacency.size()); }
  std::size_t num_edges() const noexcept { return structure_->num_edges; }
  int num_colours() const noexcept { return static_cast<int>(structure_->palette.size()); }

  std::span<const vertex_id> neighbours(vertex_id v) const {
    return structure_->adjacency[static_cast<std::size_t>(v)];
  }
  const std::vector<std::vector<vertex_id>>& adjacency() const noexcept { return structure_->adjacency; }
  bool adjacent(vertex_id u, vertex_id v) const {
    auto nb = neighbours(u);
    return std::binary_search(nb.begin(), nb.end(), v);
  }

  colour_id colour(vertex_id v) const { return colouring_[static_cast<std::size_t>(v)]; }
  const std::vector<colour_id>& colouring() const noexcept { return colouring_; }
  const std::vector<std::string>& palette() const noexcept { return structure_->palette; }

  bool is_monochromatic() const {
    return std::all_of(colouring_.begin(), colouring_.end(), [&](colour_id c) { return c == colouring_.front(); });
  }

  // Same structure, different colouring.
  ColouredGraph with_colouring(std::vector<colour_id> colouring) const {
    if (colouring.size() != colouring_.size()) throw input_error("colouring size does not match vertex count");
    for (colour_id c : colouring) {
      if (c < 0 || c >= num_colours()) throw input_error("colour id out of palette range");
    }
    ColouredGraph g = *this;
    g.colouring_ = std::move(colouring);
    return g;
  }

  friend bool operator==(const ColouredGraph& a, const ColouredGraph& b) {
    return a.colouring_ == b.colouring_ && a.structure_->adjacency == b.structure_->adjacency &&
           a.structure_->palette == b.structure_->palette;
  }

private:
  struct Structure {
    std::vector<std::vector<vertex_id>> adjacency;
    std::vector<std::string> palette;
    std::size_t num_edges = 0;
  };

  bool is_connected() const {
    const auto& adj = structure_->adjacency;
    std::vector<char> seen(adj.size(), 0);
    std::vector<vertex_id> stack{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
      vertex_id v = stack.back();
      stack.pop_back();
      for (vertex_id w : adj[static_cast<std::size_t>(v)]) {
        if (!seen[static_cast<std::size_t>(w)]) {
          seen[static_cast<std::size_t>(w)] = 1;
          ++count;
          stack.push_back(w);
        }
      }
    }
    return count == adj.size();
  }

  std::shared_ptr<const Structure> structure_;
  std::vector<colour_id> colouring_;
};

namespace detail {

// Collects the monochromatic component of `start` under `colouring` into `out`.
// `mark` must be zeroed on entry for the vertices involved; it is left set for the component.
template <class Colour>
void collect_component(const std::vector<std::vector<vertex_id>>& adj, std::span<const Colour> colouring,
                       vertex_id start, std::vector<char>& mark, std::vector<vertex_id>& out) {
  out.clear();
  const Colour c = colouring[static_cast<std::size_t>(start)];
  mark[static_cast<std::size_t>(start)] = 1;
  out.push_back(start);
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (vertex_id w : adj[static_cast<std::size_t>(out[i])]) {
      if (!mark[static_cast<std::size_t>(w)] && colouring[static_cast<std::size_t>(w)] == c) {
        mark[static_cast<std::size_t>(w)] = 1;
        out.push_back(w);
      }
    }
  }
}

} // namespace detail

// Partition of the vertices into maximal connected monochromatic blocks.
struct Components {
  std::vector<int> block_of;                   // vertex -> block index
  std::vector<std::vector<vertex_id>> blocks;  // each sorted ascending; blocks ordered by smallest vertex
};

inline Components mono_components(const ColouredGraph& g) {
  const auto n = static_cast<std::size_t>(g.num_vertices());
  Components out;
  out.block_of.assign(n, -1);
  std::vector<char> mark(n, 0);
  std::vector<vertex_id> comp;
  const std::span<const colour_id> col(g.colouring());
  for (std::size_t v = 0; v < n; ++v) {
    if (mark[v]) continue;
    detail::collect_component(g.adjacency(), col, static_cast<vertex_id>(v), mark, comp);
    std::sort(comp.begin(), comp.end());
    for (vertex_id w : comp) out.block_of[static_cast<std::size_t>(w)] = static_cast<int>(out.blocks.size());
    out.blocks.push_back(comp);
  }
  return out;
}

inline void check_move(const ColouredGraph& g, const Move& m) {
  if (m.vertex < 0 || m.vertex >= g.num_vertices())
    throw input_error("move vertex " + std::to_string(m.vertex) + " out of range");
  if (m.colour < 0 || m.colour >= g.num_colours())
    throw input_error("move colour " + std::to_string(m.colour) + " out of range");
}

// Recolours the monochromatic component of m.vertex; returns the new state.
inline ColouredGraph apply_move(const ColouredGraph& g, const Move& m) {
  check_move(g, m);
  std::vector<colour_id> next = g.colouring();
  std::vector<char> mark(next.size(), 0);
  std::vector<vertex_id> comp;
  detail::collect_component(g.adjacency(), std::span<const colour_id>(next), m.vertex, mark, comp);
  for (vertex_id v : comp) next[static_cast<std::size_t>(v)] = m.colour;
  return g.with_colouring(std::move(next));
}

struct ReplayResult {
  ColouredGraph final_state;
  bool flooded = false;
};

inline ReplayResult replay(const ColouredGraph& g, std::span<const Move> seq) {
  ColouredGraph cur = g;
  for (const Move& m : seq) cur = apply_move(cur, m);
  const bool flooded = cur.is_monochromatic();
  return {std::move(cur), flooded};
}

// Sorted set of colours on the whole graph.
inline std::vector<colour_id> colours_present(const ColouredGraph& g) {
  std::vector<char> seen(static_cast<std::size_t>(g.num_colours()), 0);
  for (colour_id c : g.colouring()) seen[static_cast<std::size_t>(c)] = 1;
  std::vector<colour_id> out;
  for (std::size_t c = 0; c < seen.size(); ++c)
    if (seen[c]) out.push_back(static_cast<colour_id>(c));
  return out;
}

// Sorted set of colours on a vertex subset.
inline std::vector<colour_id> colours_present(const ColouredGraph& g, std::span<const vertex_id> subset) {
  std::vector<char> seen(static_cast<std::size_t>(g.num_colours()), 0);
  for (vertex_id v : subset) {
    if (v < 0 || v >= g.num_vertices()) throw input_error("subset vertex out of range");
    seen[static_cast<std::size_t>(g.colour(v))] = 1;
  }
  std::vector<colour_id> out;
  for (std::size_t c = 0; c < seen.size(); ++c)
    if (seen[c]) out.push_back(static_cast<colour_id>(c));
  return out;
}

struct Contraction {
  ColouredGraph graph;
  std::vector<vertex_id> vertex_map;  // original vertex -> contracted vertex (its block)
};

// Contracts monochromatic components; the result is properly coloured.
inline Contraction contract(const ColouredGraph& g) {
  const Components comps = mono_components(g);
  const auto k = comps.blocks.size();
  std::vector<std::vector<vertex_id>> adj(k);
  std::vector<colour_id> colouring(k);
  for (std::size_t b = 0; b < k; ++b) {
    colouring[b] = g.colour(comps.blocks[b].front());
    for (vertex_id v : comps.blocks[b]) {
      for (vertex_id w : g.neighbours(v)) {
        const int o = comps.block_of[static_cast<std::size_t>(w)];
        if (o != static_cast<int>(b)) adj[b].push_back(o);
      }
    }
  }
  return {ColouredGraph(std::move(adj), std::move(colouring), g.palette()), comps.block_of};
}

struct InducedSubgraph {
  ColouredGraph graph;
  std::vector<vertex_id> original;  // new id -> original id
};

// Subgraph induced by `subset`, which must induce a connected graph.
inline InducedSubgraph induced_subgraph(const ColouredGraph& g, std::span<const vertex_id> subset) {
  std::vector<vertex_id> verts(subset.begin(), subset.end());
  std::sort(verts.begin(), verts.end());
  verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
  if (verts.empty()) throw input_error("induced subgraph of an empty set");
  std::vector<int> index(static_cast<std::size_t>(g.num_vertices()), -1);
  for (std::size_t i = 0; i < verts.size(); ++i) {
    if (verts[i] < 0 || verts[i] >= g.num_vertices()) throw input_error("subset vertex out of range");
    index[static_cast<std::size_t>(verts[i])] = static_cast<int>(i);
  }
  std::vector<std::vector<vertex_id>> adj(verts.size());
  std::vector<colour_id> colouring(verts.size());
  for (std::size_t i = 0; i < verts.size(); ++i) {
    colouring[i] = g.colour(verts[i]);
    for (vertex_id w : g.neighbours(verts[i])) {
      if (index[static_cast<std::size_t>(w)] >= 0) adj[i].push_back(index[static_cast<std::size_t>(w)]);
    }
  }
  return {ColouredGraph(std::move(adj), std::move(colouring), g.palette()), std::move(verts)};
}

// Floods any connected graph with at most (#components - 1) <= n - 1 moves: the component of
// vertex 0 repeatedly takes the colour of a neighbouring component, absorbing at least one per move.
inline MoveSeq greedy_flood(const ColouredGraph& g) {
  MoveSeq seq;
  ColouredGraph cur = g;
  std::vector<char> mark;
  std::vector<vertex_id> comp;
  while (!cur.is_monochromatic()) {
    mark.assign(static_cast<std::size_t>(cur.num_vertices()), 0);
    detail::collect_component(cur.adjacency(), std::span<const colour_id>(cur.colouring()), 0, mark, comp);
    colour_id next = cur.colour(0);
    for (vertex_id v : comp) {
      for (vertex_id w : cur.neighbours(v)) {
        if (!mark[static_cast<std::size_t>(w)]) {
          next = cur.colour(w);
          break;
        }
      }
      if (next != cur.colour(0)) break;
    }
    seq.push_back({0, next});
    cur = apply_move(cur, seq.back());
  }
  return seq;
}

} // namespace floodit
