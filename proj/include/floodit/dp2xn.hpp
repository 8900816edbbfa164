#pragma once

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "floodit/board.hpp"
#include "floodit/engine.hpp"
#include "floodit/error.hpp"

namespace floodit::dp {

using value_t = std::uint16_t;
inline constexpr value_t kInf = std::numeric_limits<value_t>::max();
inline constexpr int kMaxColours = 32;
inline constexpr int kMaxWidth = 1000;

constexpr value_t sat_add(value_t a, value_t b) noexcept {
  const unsigned s = unsigned{a} + unsigned{b};
  return s >= kInf ? kInf : static_cast<value_t>(s);
}

enum class Mode { reference, worklist };
// Which sections get table entries: those reachable from the whole board through splits, or all.
enum class Scope { reachable, full };

struct ZKey {
  Border b1;
  Border b2;
  vertex_id r1 = 0;
  vertex_id r2 = 0;
  colour_id d = 0;
  std::uint32_t ignore = 0;  // bit set over palette ids

  friend bool operator==(const ZKey&, const ZKey&) = default;
};

enum class BackKind : std::uint8_t { none, zero, f1, f2 };

struct BackPtr {
  BackKind kind = BackKind::none;
  colour_id colour = 0;  // F1: the colour d' the path held before the last move
  Border border;         // F2
  vertex_id x1 = -1;     // F2
  vertex_id x2 = -1;     // F2
};

struct SolveOptions {
  std::optional<colour_id> target;
  Mode mode = Mode::worklist;
  Scope scope = Scope::reachable;
  std::size_t max_entries = 400'000'000;
  std::optional<std::chrono::steady_clock::duration> time_budget;
};

struct TableStats {
  std::size_t keys = 0;
  std::size_t zero_keys = 0;
  int max_value = 0;  // largest finite value
  std::size_t sections = 0;
  std::size_t sweeps = 0;             // reference mode: sweeps performed
  std::size_t last_change_sweep = 0;  // reference mode: last sweep that changed a value
  std::size_t relaxations = 0;        // value decreases (reference) / entries improved past init (worklist)
};

namespace detail {

// Bits of `value` selected by `mask`, packed to the low end (software pext).
inline std::uint32_t compress(std::uint32_t value, std::uint32_t mask) noexcept {
  std::uint32_t out = 0;
  std::uint32_t bit = 1;
  for (std::uint32_t m = mask; m; m &= m - 1, bit <<= 1)
    if (value & m & (~m + 1)) out |= bit;
  return out;
}

inline void add_minimal(std::vector<std::uint32_t>& set, std::uint32_t mask) {
  for (auto m : set)
    if ((m & mask) == m) return;
  std::erase_if(set, [&](std::uint32_t m) { return (mask & m) == mask; });
  set.push_back(mask);
}

// Minimal sets of off-path colours over all simple r1-r2 paths inside the section that
// dominate it (every section square is on the path or adjacent to it), using only squares with
// on_path(v). off_bits(v) is the contribution of an off-path square. Empty result: no such path.
//
// Requires r1 incident with lo and r2 incident with hi. Under that, a section with at most one
// square strictly left of r1 and at most one strictly right of r2 only admits column-monotone
// dominating paths, which a left-to-right sweep over (exit row, colour set) states covers.
template <class OnPath, class OffBits>
std::vector<std::uint32_t> path_masks(int n, Border lo, Border hi, vertex_id r1, vertex_id r2, OnPath on_path,
                                      OffBits off_bits) {
  std::vector<std::uint32_t> out;
  auto in = [&](int row, int col) { return col >= 0 && col < n && geom::in_section(row, col, lo, hi); };
  auto id = [&](int row, int col) { return row * n + col; };
  const auto cells = geom::section_vertices(n, lo, hi);

  auto outside_count = [&](int col, bool left) {
    int k = 0;
    for (vertex_id v : cells) k += left ? (v % n < col) : (v % n > col);
    return k;
  };
  if (outside_count(r1 % n, true) > 1 || outside_count(r2 % n, false) > 1) return out;

  if (r1 == r2) {
    if (!on_path(r1)) return out;
    std::uint32_t mask = 0;
    for (vertex_id v : cells) {
      if (v == r1) continue;
      const bool adj = (v % n == r1 % n) || (v / n == r1 / n && (v % n == r1 % n + 1 || v % n + 1 == r1 % n));
      if (!adj) return out;
      mask |= off_bits(v);
    }
    out.push_back(mask);
    return out;
  }

  vertex_id a = r1, z = r2;
  if (a % n > z % n) std::swap(a, z);
  const int ra = a / n, ca = a % n, rz = z / n, cz = z % n;
  if (outside_count(ca, true) > 1 || outside_count(cz, false) > 1) return out;

  // The (at most one) square left of column ca and right of column cz.
  std::optional<vertex_id> lcell, rcell;
  for (vertex_id v : cells) {
    if (v % n < ca) lcell = v;
    if (v % n > cz) rcell = v;
  }
  if (lcell && lcell.value() % n != ca - 1) return out;
  if (rcell && rcell.value() % n != cz + 1) return out;

  if (!on_path(a) || !on_path(z)) return out;

  if (ca == cz) {
    // Both squares of one column, joined by the rung; side squares hang off their row.
    std::uint32_t mask = 0;
    if (lcell) mask |= off_bits(*lcell);
    if (rcell) mask |= off_bits(*rcell);
    out.push_back(mask);
    return out;
  }

  // states[row]: minimal masks of paths that leave the current column along `row`.
  std::vector<std::uint32_t> states[2];
  {
    const int o = 1 - ra;
    const bool o_in = in(o, ca);
    auto left_ok = [&](bool row_used[2]) { return !lcell || row_used[lcell.value() / n]; };
    std::uint32_t lmask = lcell ? off_bits(*lcell) : 0;
    bool used1[2] = {false, false};
    used1[ra] = true;
    if (left_ok(used1)) add_minimal(states[ra], lmask | (o_in ? off_bits(id(o, ca)) : 0));
    if (o_in && on_path(id(o, ca))) {
      bool used2[2] = {true, true};
      if (left_ok(used2)) add_minimal(states[o], lmask);
    }
  }

  for (int col = ca + 1; col < cz; ++col) {
    std::vector<std::uint32_t> next[2];
    for (int e = 0; e < 2; ++e) {
      if (states[e].empty() || !in(e, col) || !on_path(id(e, col))) continue;
      const int o = 1 - e;
      const bool o_in = in(o, col);
      const std::uint32_t stay = o_in ? off_bits(id(o, col)) : 0;
      for (auto m : states[e]) add_minimal(next[e], m | stay);
      if (o_in && on_path(id(o, col)))
        for (auto m : states[e]) add_minimal(next[o], m);
    }
    states[0].swap(next[0]);
    states[1].swap(next[1]);
  }

  for (int e = 0; e < 2; ++e) {
    if (states[e].empty() || !in(e, cz) || !on_path(id(e, cz))) continue;
    std::uint32_t extra = 0;
    bool used[2] = {false, false};
    used[e] = true;
    if (e == rz) {
      if (in(1 - e, cz)) extra |= off_bits(id(1 - e, cz));
    } else {
      used[rz] = true;  // (e, cz) then the rung to z
    }
    if (rcell) {
      if (!used[rcell.value() / n]) continue;
      extra |= off_bits(*rcell);
    }
    for (auto m : states[e]) add_minimal(out, m | extra);
  }
  return out;
}

struct RootPair {
  vertex_id r1;
  vertex_id r2;
};

// A split of a section: an interior border b and a crossing edge, x1 left of b and x2 right.
struct Split {
  Border b;
  vertex_id x1, x2;
};

// Root pairs (r1 incident with lo, r2 incident with hi) admitting a spanning tree whose
// non-leaves all lie on the r1-r2 path.
inline std::vector<RootPair> section_roots(int n, Border lo, Border hi) {
  std::vector<RootPair> roots;
  const auto left = geom::incident_vertices(n, lo, Side::right);
  const auto right = geom::incident_vertices(n, hi, Side::left);
  for (vertex_id r1 : left) {
    if (!geom::contains(n, r1, lo, hi)) continue;
    for (vertex_id r2 : right) {
      if (!geom::contains(n, r2, lo, hi)) continue;
      if (!path_masks(n, lo, hi, r1, r2, [](vertex_id) { return true; }, [](vertex_id) { return 0u; }).empty())
        roots.push_back({r1, r2});
    }
  }
  return roots;
}

// Splits from the literal definition: every border strictly between lo and hi that leaves
// sections on both sides, with each of its crossing edges.
inline std::vector<Split> literal_splits(int n, Border lo, Border hi) {
  std::vector<Split> out;
  for (int t = lo.top; t <= hi.top; ++t)
    for (int bb = lo.bottom; bb <= hi.bottom; ++bb) {
      const Border b{t, bb};
      if (b == lo || b == hi) continue;
      if (!geom::is_section(lo, b) || !geom::is_section(b, hi)) continue;
      for (auto [x1, x2] : geom::crossing_edges(n, b))
        if (geom::contains(n, x1, lo, b) && geom::contains(n, x2, b, hi)) out.push_back({b, x1, x2});
    }
  return out;
}

// The literal splits restricted to borders where both sub-keys can have roots at all: a root
// pair needs at most one square beyond each end, which pins the border to a few positions
// around each edge of the section.
inline std::vector<Split> candidate_splits(int n, Border lo, Border hi) {
  std::vector<Split> out;
  auto in = [&](int row, int col) { return col >= 0 && col < n && geom::in_section(row, col, lo, hi); };
  auto consider = [&](Border b, vertex_id x1, vertex_id x2) {
    if (!border_leq(lo, b) || !border_leq(b, hi) || b == lo || b == hi) return;
    if (!geom::is_section(lo, b) || !geom::is_section(b, hi)) return;
    if (!geom::contains(n, x1, lo, b) || !geom::contains(n, x2, b, hi)) return;
    out.push_back({b, x1, x2});
  };
  for (int j = 0; j < n; ++j) {
    if (j + 1 < n && in(0, j) && in(0, j + 1)) {
      const int blo = std::max(lo.bottom, std::min(hi.bottom, j + 1) - 1);
      const int bhi = std::min(hi.bottom, std::max(lo.bottom, j + 1) + 1);
      for (int bb = blo; bb <= bhi; ++bb) consider({j + 1, bb}, j, j + 1);
    }
    if (j + 1 < n && in(1, j) && in(1, j + 1)) {
      const int tlo = std::max(lo.top, std::min(hi.top, j + 1) - 1);
      const int thi = std::min(hi.top, std::max(lo.top, j + 1) + 1);
      for (int t = tlo; t <= thi; ++t) consider({t, j + 1}, n + j, n + j + 1);
    }
    if (in(0, j) && in(1, j)) {
      {  // top square left of the border: t > j >= b
        const int tlo = std::max(lo.top, j + 1);
        const int thi = std::min(hi.top, std::max(lo.top, j + 1) + 1);
        const int blo = std::max(lo.bottom, std::min(hi.bottom, j) - 1);
        const int bhi = std::min(hi.bottom, j);
        for (int t = tlo; t <= thi; ++t)
          for (int bb = blo; bb <= bhi; ++bb) consider({t, bb}, j, n + j);
      }
      {  // bottom square left of the border: b > j >= t
        const int blo = std::max(lo.bottom, j + 1);
        const int bhi = std::min(hi.bottom, std::max(lo.bottom, j + 1) + 1);
        const int tlo = std::max(lo.top, std::min(hi.top, j) - 1);
        const int thi = std::min(hi.top, j);
        for (int bb = blo; bb <= bhi; ++bb)
          for (int t = tlo; t <= thi; ++t) consider({t, bb}, n + j, j);
      }
    }
  }
  return out;
}

inline int find_root(const std::vector<RootPair>& roots, vertex_id r1, vertex_id r2) noexcept {
  for (std::size_t i = 0; i < roots.size(); ++i)
    if (roots[i].r1 == r1 && roots[i].r2 == r2) return static_cast<int>(i);
  return -1;
}

// zero_masks(...)[p][d]: minimal off-path colour sets of d-coloured dominating paths for root p.
inline std::vector<std::vector<std::vector<std::uint32_t>>> zero_masks(const Board2xN& board, Border lo, Border hi,
                                                                       const std::vector<RootPair>& roots,
                                                                       std::uint32_t present) {
  const int c = board.num_colours();
  std::vector<std::vector<std::vector<std::uint32_t>>> out(roots.size());
  for (std::size_t p = 0; p < roots.size(); ++p) {
    out[p].resize(static_cast<std::size_t>(c));
    for (int d = 0; d < c; ++d) {
      if (!(present >> d & 1)) continue;
      out[p][static_cast<std::size_t>(d)] = path_masks(
          board.width(), lo, hi, roots[p].r1, roots[p].r2, [&](vertex_id v) { return board.colour(v) == d; },
          [&](vertex_id v) { return board.colour(v) == d ? 0u : 1u << board.colour(v); });
    }
  }
  return out;
}

inline bool is_zero(const std::vector<std::uint32_t>& masks, std::uint32_t ignore) noexcept {
  for (auto m : masks)
    if ((m & ignore) == m) return true;
  return false;
}

struct Section {
  Border lo, hi;
  std::uint32_t mask = 0;          // colours present
  std::vector<colour_id> colours;  // ascending; bit i of a subset index <-> colours[i]
  std::vector<RootPair> roots;
  std::vector<value_t> values;  // [subset][root][d]
  bool evaluated = false;

  std::size_t subsets() const noexcept { return std::size_t{1} << colours.size(); }
  std::uint32_t expand(std::uint32_t s) const noexcept {
    std::uint32_t out = 0;
    for (std::size_t i = 0; s; ++i, s >>= 1)
      if (s & 1) out |= 1u << colours[i];
    return out;
  }
};

// A split resolved for one root pair: the two sub-sections (or slots) and their root indices.
struct SplitRef {
  Split split;
  int left, left_root;
  int right, right_root;
};

inline void check_key_geometry(const Board2xN& board, Border b1, Border b2, vertex_id r1, vertex_id r2) {
  if (!is_section(board, b1, b2)) throw input_error("borders do not bound a section");
  const int n = board.width();
  for (vertex_id r : {r1, r2}) {
    if (r < 0 || r >= 2 * n || !geom::contains(n, r, b1, b2)) throw input_error("root vertex not in the section");
  }
}

} // namespace detail

// Whether B[b1,b2] has a spanning tree T with bare(T) contained in the r1-r2 path of T.
// r1 must be incident with b1 and r2 with b2.
inline bool tree_exists(const Board2xN& board, Border b1, Border b2, vertex_id r1, vertex_id r2) {
  detail::check_key_geometry(board, b1, b2, r1, r2);
  return !detail::path_masks(board.width(), b1, b2, r1, r2, [](vertex_id) { return true; },
                             [](vertex_id) { return 0u; })
              .empty();
}

// Whether f*(z) is zero at initialization: a d-coloured r1-r2 path dominating the section, with
// every off-path square coloured from I or d.
inline bool zero_test(const Board2xN& board, const ZKey& z) {
  detail::check_key_geometry(board, z.b1, z.b2, z.r1, z.r2);
  if (z.d < 0 || z.d >= board.num_colours()) throw input_error("colour out of range");
  const auto masks = detail::path_masks(
      board.width(), z.b1, z.b2, z.r1, z.r2, [&](vertex_id v) { return board.colour(v) == z.d; },
      [&](vertex_id v) { return board.colour(v) == z.d ? 0u : 1u << board.colour(v); });
  return detail::is_zero(masks, z.ignore);
}

class Solver;

// f* over the key space of one board. Only keys of the stored sections exist; lookups of other
// keys return nullopt. Ignore sets are canonicalized to the section's colours on lookup.
class Table {
public:
  const Board2xN& board() const noexcept { return board_; }
  int num_colours() const noexcept { return c_; }
  const TableStats& stats() const noexcept { return stats_; }
  Mode mode() const noexcept { return mode_; }

  std::optional<value_t> value(const ZKey& z) const {
    const auto at = find(z);
    if (!at) return std::nullopt;
    return sections_[at->first].values[at->second];
  }

  // The rule realizing the stored value: Zero, else the first F1 colour, else the first F2
  // split (literal enumeration order) whose operands add up to it. Derived from the final
  // values, so it does not depend on the evaluation order.
  std::optional<BackPtr> back(const ZKey& z) const {
    const auto at = find(z);
    if (!at) return std::nullopt;
    const auto& s = sections_[at->first];
    const value_t v = s.values[at->second];
    BackPtr bp;
    if (v == kInf) return bp;
    if (v == 0) {
      bp.kind = BackKind::zero;
      return bp;
    }
    for (int d2 = 0; d2 < c_; ++d2) {
      ZKey sub = z;
      sub.d = d2;
      sub.ignore = z.ignore | (1u << z.d);
      const auto w = value(sub);
      if (w && sat_add(*w, 1) == v) {
        bp.kind = BackKind::f1;
        bp.colour = d2;
        return bp;
      }
    }
    for (const auto& sp : detail::literal_splits(board_.width(), z.b1, z.b2)) {
      const auto l = value(ZKey{z.b1, sp.b, z.r1, sp.x1, z.d, z.ignore});
      if (!l || *l > v) continue;
      const auto r = value(ZKey{sp.b, z.b2, sp.x2, z.r2, z.d, z.ignore});
      if (r && sat_add(*l, *r) == v) {
        bp.kind = BackKind::f2;
        bp.border = sp.b;
        bp.x1 = sp.x1;
        bp.x2 = sp.x2;
        return bp;
      }
    }
    return bp;  // none: the table is not a fixed point
  }

  bool contains_section(Border b1, Border b2) const { return section_id(b1, b2) >= 0; }

  // Calls fn(key, value) for every stored key, I in canonical form.
  void for_each(const std::function<void(const ZKey&, value_t)>& fn) const {
    for (const auto& s : sections_) {
      if (s.values.empty()) continue;
      const std::size_t R = s.roots.size();
      for (std::uint32_t sub = 0; sub < s.subsets(); ++sub) {
        const std::uint32_t ig = s.expand(sub);
        for (std::size_t p = 0; p < R; ++p)
          for (int d = 0; d < c_; ++d) {
            const std::size_t i = (sub * R + p) * static_cast<std::size_t>(c_) + static_cast<std::size_t>(d);
            fn(ZKey{s.lo, s.hi, s.roots[p].r1, s.roots[p].r2, d, ig}, s.values[i]);
          }
      }
    }
  }

  // Same key set and the same value on every key.
  bool same_values(const Table& other) const {
    if (!(board_ == other.board_) || c_ != other.c_ || stats_.keys != other.stats_.keys) return false;
    bool ok = true;
    for_each([&](const ZKey& z, value_t v) {
      if (!ok) return;
      auto w = other.value(z);
      if (!w || *w != v) ok = false;
    });
    return ok;
  }

  // Whole-board key attaining the optimum, and the optimum (kInf if none is finite).
  const ZKey& best_key() const noexcept { return best_; }
  int best_value() const noexcept { return best_value_; }

private:
  friend class Solver;

  explicit Table(Board2xN board) : board_(std::move(board)) {}

  long long border_index(Border b) const noexcept {
    return static_cast<long long>(b.top) * (board_.width() + 1) + b.bottom;
  }
  long long section_key(Border lo, Border hi) const noexcept {
    const long long m = static_cast<long long>(board_.width() + 1) * (board_.width() + 1);
    return border_index(lo) * m + border_index(hi);
  }
  int section_id(Border lo, Border hi) const {
    auto it = index_.find(section_key(lo, hi));
    return it == index_.end() ? -1 : it->second;
  }

  // (section id, index within the section) of a key.
  std::optional<std::pair<std::size_t, std::size_t>> find(const ZKey& z) const {
    const int sid = section_id(z.b1, z.b2);
    if (sid < 0) return std::nullopt;
    const auto& s = sections_[static_cast<std::size_t>(sid)];
    if (s.values.empty()) return std::nullopt;
    const int p = detail::find_root(s.roots, z.r1, z.r2);
    if (p < 0 || z.d < 0 || z.d >= c_) return std::nullopt;
    const std::uint32_t sub = detail::compress(z.ignore, s.mask);
    return std::pair{static_cast<std::size_t>(sid),
                     (sub * s.roots.size() + static_cast<std::size_t>(p)) * static_cast<std::size_t>(c_) +
                         static_cast<std::size_t>(z.d)};
  }

  Board2xN board_;
  int c_ = 0;
  Mode mode_ = Mode::worklist;
  std::vector<detail::Section> sections_;
  std::unordered_map<long long, int> index_;
  TableStats stats_;
  ZKey best_;
  int best_value_ = kInf;
};

class Solver {
public:
  Solver(const Board2xN& board, const SolveOptions& opt) : opt_(opt), table_(board) {
    const int n = board.width();
    if (board.num_colours() > kMaxColours)
      throw capacity_error("palette of " + std::to_string(board.num_colours()) + " colours exceeds the DP cap of " +
                           std::to_string(kMaxColours));
    if (n > kMaxWidth) throw capacity_error("board width exceeds the DP cap of " + std::to_string(kMaxWidth));
    if (opt.target && (*opt.target < 0 || *opt.target >= board.num_colours()))
      throw input_error("target colour out of range");
    n_ = n;
    c_ = board.num_colours();
    table_.c_ = c_;
    table_.mode_ = opt.mode;
    if (opt.time_budget) deadline_ = std::chrono::steady_clock::now() + *opt.time_budget;
  }

  Table run() {
    const int full = get_section({0, 0}, {n_, n_});
    if (opt_.scope == Scope::full) {
      const auto borders = enumerate_borders(n_);
      for (Border lo : borders)
        for (Border hi : borders)
          if (geom::is_section(lo, hi)) get_section(lo, hi);
    }
    if (opt_.mode == Mode::worklist) {
      if (opt_.scope == Scope::full) {
        for (std::size_t i = 0; i < table_.sections_.size(); ++i) ensure(static_cast<int>(i));
      } else {
        ensure(full);
      }
    } else {
      run_reference();
    }
    finish(full);
    return std::move(table_);
  }

private:
  const Board2xN& board() const { return table_.board_; }

  void check_deadline() {
    if (deadline_ && std::chrono::steady_clock::now() > *deadline_)
      throw capacity_error("DP time budget exceeded");
  }

  const std::vector<detail::RootPair>& roots_of(Border lo, Border hi) {
    const long long key = table_.section_key(lo, hi);
    auto it = roots_cache_.find(key);
    if (it != roots_cache_.end()) return it->second;
    return roots_cache_.emplace(key, detail::section_roots(n_, lo, hi)).first->second;
  }

  int get_section(Border lo, Border hi) {
    const long long key = table_.section_key(lo, hi);
    auto it = table_.index_.find(key);
    if (it != table_.index_.end()) return it->second;
    detail::Section s;
    s.lo = lo;
    s.hi = hi;
    for (vertex_id v : geom::section_vertices(n_, lo, hi)) s.mask |= 1u << board().colour(v);
    for (int c = 0; c < c_; ++c)
      if (s.mask >> c & 1) s.colours.push_back(c);
    s.roots = roots_of(lo, hi);
    const int id = static_cast<int>(table_.sections_.size());
    table_.sections_.push_back(std::move(s));
    table_.index_.emplace(key, id);
    return id;
  }

  // Per root of section `sid`, the splits whose two sub-keys are both in the key space.
  // Registers the sub-sections; a section enters the table only through such a split.
  std::vector<std::vector<detail::SplitRef>> resolve_splits(int sid, bool literal) {
    const Border lo = table_.sections_[static_cast<std::size_t>(sid)].lo;
    const Border hi = table_.sections_[static_cast<std::size_t>(sid)].hi;
    const auto splits = literal ? detail::literal_splits(n_, lo, hi) : detail::candidate_splits(n_, lo, hi);
    const std::size_t R = table_.sections_[static_cast<std::size_t>(sid)].roots.size();
    std::vector<std::vector<detail::SplitRef>> out(R);
    for (const auto& sp : splits) {
      const auto& lroots = roots_of(lo, sp.b);
      const auto& rroots = roots_of(sp.b, hi);
      int left = -1, right = -1;
      for (std::size_t p = 0; p < R; ++p) {
        const auto root = table_.sections_[static_cast<std::size_t>(sid)].roots[p];
        const int lr = detail::find_root(lroots, root.r1, sp.x1);
        const int rr = detail::find_root(rroots, sp.x2, root.r2);
        if (lr < 0 || rr < 0) continue;
        if (left < 0) {
          left = get_section(lo, sp.b);
          right = get_section(sp.b, hi);
        }
        out[p].push_back({sp, left, lr, right, rr});
      }
    }
    return out;
  }

  void allocate(detail::Section& s) {
    const std::size_t count = s.subsets() * s.roots.size() * static_cast<std::size_t>(c_);
    table_.stats_.keys += count;
    if (table_.stats_.keys > opt_.max_entries)
      throw capacity_error("DP table exceeds the entry budget of " + std::to_string(opt_.max_entries));
    s.values.assign(count, kInf);
  }

  // Worklist mode: evaluates a section once everything it depends on is final. Within a
  // section, ignore sets go from largest to smallest so f1 into a larger set reads final
  // values, and the f1 self-loop at an equal set (d already ignored or absent) closes in one
  // step: those keys take min(base, 1 + min over all colours of base).
  void ensure(int sid) {
    if (table_.sections_[static_cast<std::size_t>(sid)].evaluated) return;
    check_deadline();
    auto splits = resolve_splits(sid, false);
    for (const auto& per_root : splits)
      for (const auto& sp : per_root) {
        ensure(sp.left);
        ensure(sp.right);
      }
    auto& s = table_.sections_[static_cast<std::size_t>(sid)];
    allocate(s);
    const auto zmasks = detail::zero_masks(board(), s.lo, s.hi, s.roots, s.mask);
    const std::size_t R = s.roots.size();
    const std::size_t C = static_cast<std::size_t>(c_);
    const int k = static_cast<int>(s.colours.size());
    std::vector<int> pos(C, -1);
    for (int i = 0; i < k; ++i) pos[static_cast<std::size_t>(s.colours[static_cast<std::size_t>(i)])] = i;

    // Distinct child sections; refs are rewritten to name slots in `children`.
    std::vector<int> children;
    slot_.resize(table_.sections_.size(), -1);
    for (auto& per_root : splits)
      for (auto& ref : per_root)
        for (int* side : {&ref.left, &ref.right}) {
          int& slot = slot_[static_cast<std::size_t>(*side)];
          if (slot < 0) {
            slot = static_cast<int>(children.size());
            children.push_back(*side);
          }
          *side = slot;
        }
    for (int ch : children) slot_[static_cast<std::size_t>(ch)] = -1;
    const std::size_t S = s.subsets();
    // offset[slot * S + sub]: start of the ignore-set block of a child for parent subset `sub`.
    std::vector<std::size_t> offset(children.size() * S);
    for (std::size_t i = 0; i < children.size(); ++i) {
      const auto& ch = table_.sections_[static_cast<std::size_t>(children[i])];
      for (std::uint32_t sub = 0; sub < S; ++sub)
        offset[i * S + sub] = detail::compress(s.expand(sub), ch.mask) * ch.roots.size() * C;
    }
    std::vector<std::uint32_t> ignore(S);
    for (std::uint32_t sub = 0; sub < S; ++sub) ignore[sub] = s.expand(sub);

    std::vector<unsigned> base(S * C);
    std::vector<char> zero(S * C);
    for (std::size_t p = 0; p < R; ++p) {
      for (std::uint32_t sub = 0; sub < S; ++sub)
        for (std::size_t d = 0; d < C; ++d) {
          zero[sub * C + d] = detail::is_zero(zmasks[p][d], ignore[sub]);
          base[sub * C + d] = zero[sub * C + d] ? 0 : kInf;
        }
      // f2: splits outermost, so each child's small block is read in one pass
      for (const auto& ref : splits[p]) {
        const auto li = static_cast<std::size_t>(ref.left), ri = static_cast<std::size_t>(ref.right);
        const value_t* lvals = table_.sections_[static_cast<std::size_t>(children[li])].values.data() +
                               static_cast<std::size_t>(ref.left_root) * C;
        const value_t* rvals = table_.sections_[static_cast<std::size_t>(children[ri])].values.data() +
                               static_cast<std::size_t>(ref.right_root) * C;
        const std::size_t* loff = &offset[li * S];
        const std::size_t* roff = &offset[ri * S];
        for (std::uint32_t sub = 0; sub < S; ++sub) {
          const value_t* lrow = lvals + loff[sub];
          const value_t* rrow = rvals + roff[sub];
          unsigned* row = &base[sub * C];
          for (std::size_t d = 0; d < C; ++d) row[d] = std::min(row[d], unsigned{lrow[d]} + unsigned{rrow[d]});
        }
      }
      // f1, largest ignore sets first
      for (std::uint32_t sub = static_cast<std::uint32_t>(S); sub-- > 0;) {
        unsigned* row = &base[sub * C];
        for (std::size_t d = 0; d < C; ++d) {
          const int pd = pos[d];
          if (pd < 0 || (sub >> pd & 1)) continue;
          const value_t* up = &s.values[((sub | (1u << pd)) * R + p) * C];
          for (std::size_t d2 = 0; d2 < C; ++d2) row[d] = std::min(row[d], unsigned{up[d2]} + 1);
        }
        unsigned low = kInf;
        for (std::size_t d = 0; d < C; ++d) low = std::min(low, row[d]);
        value_t* out = &s.values[(sub * R + p) * C];
        for (std::size_t d = 0; d < C; ++d) {
          const bool self = pos[d] < 0 || (sub >> pos[d] & 1);
          const unsigned v = self ? std::min(row[d], low + 1) : row[d];
          out[d] = static_cast<value_t>(std::min<unsigned>(v, kInf));
          if (!zero[sub * C + d] && out[d] != kInf) ++table_.stats_.relaxations;
        }
      }
    }
    s.evaluated = true;
  }

  // Reference mode: the literal iteration. Zero/infinity initialization, then n^2 + 2n sweeps,
  // each recomputing every key from the previous sweep's values as min(old, f1, f2).
  void run_reference() {
    std::vector<std::vector<std::vector<detail::SplitRef>>> splits;
    for (std::size_t i = 0; i < table_.sections_.size(); ++i) {
      check_deadline();
      splits.push_back(resolve_splits(static_cast<int>(i), true));
    }
    const std::size_t C = static_cast<std::size_t>(c_);
    for (auto& s : table_.sections_) {
      allocate(s);
      const auto zmasks = detail::zero_masks(board(), s.lo, s.hi, s.roots, s.mask);
      for (std::uint32_t sub = 0; sub < s.subsets(); ++sub) {
        const std::uint32_t ig = s.expand(sub);
        for (std::size_t p = 0; p < s.roots.size(); ++p)
          for (std::size_t d = 0; d < C; ++d)
            if (detail::is_zero(zmasks[p][d], ig)) s.values[(sub * s.roots.size() + p) * C + d] = 0;
      }
      s.evaluated = true;
    }

    const std::size_t sweeps =
        static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_) + 2 * static_cast<std::size_t>(n_);
    std::vector<std::vector<value_t>> prev(table_.sections_.size());
    for (std::size_t sweep = 1; sweep <= sweeps; ++sweep) {
      check_deadline();
      for (std::size_t i = 0; i < table_.sections_.size(); ++i) prev[i] = table_.sections_[i].values;
      bool changed = false;
      for (std::size_t i = 0; i < table_.sections_.size(); ++i) {
        auto& s = table_.sections_[i];
        const std::size_t R = s.roots.size();
        for (std::uint32_t sub = 0; sub < s.subsets(); ++sub) {
          const std::uint32_t ig = s.expand(sub);
          for (std::size_t p = 0; p < R; ++p) {
            for (std::size_t d = 0; d < C; ++d) {
              const std::size_t at = (sub * R + p) * C + d;
              value_t best = prev[i][at];
              const std::uint32_t up = detail::compress(ig | (1u << d), s.mask);
              for (std::size_t d2 = 0; d2 < C; ++d2) best = std::min(best, sat_add(prev[i][(up * R + p) * C + d2], 1));
              for (const auto& ref : splits[i][p]) {
                const auto& L = table_.sections_[static_cast<std::size_t>(ref.left)];
                const auto& Rs = table_.sections_[static_cast<std::size_t>(ref.right)];
                const std::uint32_t ls = detail::compress(ig, L.mask), rs = detail::compress(ig, Rs.mask);
                best = std::min(
                    best,
                    sat_add(prev[static_cast<std::size_t>(ref.left)]
                                [(ls * L.roots.size() + static_cast<std::size_t>(ref.left_root)) * C + d],
                            prev[static_cast<std::size_t>(ref.right)]
                                [(rs * Rs.roots.size() + static_cast<std::size_t>(ref.right_root)) * C + d]));
              }
              if (best < prev[i][at]) {
                s.values[at] = best;
                ++table_.stats_.relaxations;
                changed = true;
              }
            }
          }
        }
      }
      table_.stats_.sweeps = sweep;
      if (changed) table_.stats_.last_change_sweep = sweep;
    }
  }

  void finish(int full) {
    auto& st = table_.stats_;
    st.sections = 0;
    st.zero_keys = 0;
    st.max_value = 0;
    for (const auto& s : table_.sections_) {
      if (s.values.empty()) continue;
      ++st.sections;
      for (const value_t v : s.values) {
        if (v == 0) ++st.zero_keys;
        if (v != kInf) st.max_value = std::max(st.max_value, static_cast<int>(v));
      }
    }
    const auto& s = table_.sections_[static_cast<std::size_t>(full)];
    int best = kInf;
    for (std::size_t p = 0; p < s.roots.size(); ++p) {
      const auto r = s.roots[p];
      if (r.r1 % n_ != 0 || r.r2 % n_ != n_ - 1) continue;
      for (int d = 0; d < c_; ++d) {
        if (opt_.target && d != *opt_.target) continue;
        const value_t v = s.values[p * static_cast<std::size_t>(c_) + static_cast<std::size_t>(d)];
        if (v < best) {
          best = v;
          table_.best_ = ZKey{s.lo, s.hi, r.r1, r.r2, d, 0};
        }
      }
    }
    table_.best_value_ = best;
  }

  SolveOptions opt_;
  Table table_;
  int n_ = 0;
  int c_ = 0;
  std::optional<std::chrono::steady_clock::time_point> deadline_;
  std::unordered_map<long long, std::vector<detail::RootPair>> roots_cache_;
  std::vector<int> slot_;  // scratch: section id -> child slot while evaluating a parent
};

struct Solution {
  int value = kInf;  // kInf only if no key reached a finite value (does not happen on valid boards)
  Table table;
};

inline Solution solve(const Board2xN& board, const SolveOptions& opt = {}) {
  Table t = Solver(board, opt).run();
  const int v = t.best_value();
  return {v, std::move(t)};
}

inline TableStats table_stats(const Table& t) { return t.stats(); }

// Walks back pointers from the optimal whole-board key into a move sequence, then replays it on
// the board. Any mismatch is a construction_error.
inline MoveSeq reconstruct(const Table& table) {
  if (table.best_value() == kInf) throw input_error("table has no finite optimum");
  const Board2xN& board = table.board();
  MoveSeq out;

  std::function<void(const ZKey&)> emit = [&](const ZKey& z) {
    const auto bp = table.back(z);
    if (!bp) throw construction_error("back pointer leads outside the table");
    switch (bp->kind) {
      case BackKind::zero: return;
      case BackKind::f1: {
        ZKey sub = z;
        sub.d = bp->colour;
        sub.ignore = z.ignore | (1u << z.d);
        emit(sub);
        out.push_back({z.r1, z.d});
        return;
      }
      case BackKind::f2: {
        emit(ZKey{z.b1, bp->border, z.r1, bp->x1, z.d, z.ignore});
        emit(ZKey{bp->border, z.b2, bp->x2, z.r2, z.d, z.ignore});
        return;
      }
      case BackKind::none: break;
    }
    throw construction_error("key without a back pointer on the optimal path");
  };
  emit(table.best_key());

  const auto g = to_graph(board);
  const auto res = replay(g, out);
  const bool colour_ok = res.flooded && res.final_state.colour(0) == table.best_key().d;
  if (!res.flooded || !colour_ok || static_cast<int>(out.size()) != table.best_value()) {
    std::string msg = "reconstructed sequence fails replay (value " + std::to_string(table.best_value()) +
                      ", length " + std::to_string(out.size()) + ", flooded " + (res.flooded ? "yes" : "no") +
                      "): ";
    for (const auto& m : out) msg += "(" + std::to_string(m.vertex) + "," + board.palette()[static_cast<std::size_t>(m.colour)] + ")";
    throw construction_error(msg);
  }
  return out;
}

} // namespace floodit::dp
