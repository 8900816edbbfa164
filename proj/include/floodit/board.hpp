#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "floodit/engine.hpp"
#include "floodit/error.hpp"

namespace floodit {

// A top-to-bottom cut of a 2 x n board, identified by where it meets the top edge (`top`
// columns lie to its left in row 0) and the bottom edge (`bottom` columns to its left in row 1).
struct Border {
  int top = 0;
  int bottom = 0;

  friend bool operator==(const Border&, const Border&) = default;
  friend auto operator<=>(const Border&, const Border&) = default;
};

// Componentwise order: b1 meets both board edges left of (or at) b2.
constexpr bool border_leq(Border b1, Border b2) noexcept {
  return b1.top <= b2.top && b1.bottom <= b2.bottom;
}

constexpr bool border_less(Border b1, Border b2) noexcept { return border_leq(b1, b2) && b1 != b2; }

// The region between two comparable borders.
struct SectionRef {
  Border left;
  Border right;

  friend bool operator==(const SectionRef&, const SectionRef&) = default;
};

enum class Side { left, right };

// 2 x n grid of colour ids. Vertex ids are row-major with row 0 on top: v = row * n + col.
class Board2xN {
public:
  Board2xN(int n, std::vector<colour_id> cells, std::vector<std::string> palette)
      : n_(n), cells_(std::move(cells)), palette_(std::move(palette)) {
    if (n_ < 1) throw input_error("board width must be at least 1");
    if (cells_.size() != 2 * static_cast<std::size_t>(n_)) throw input_error("board needs exactly 2 x n cells");
    if (palette_.empty()) throw input_error("palette must be non-empty");
    for (colour_id c : cells_) {
      if (c < 0 || static_cast<std::size_t>(c) >= palette_.size()) throw input_error("cell colour out of palette range");
    }
  }

  int width() const noexcept { return n_; }
  int num_cells() const noexcept { return 2 * n_; }
  int num_colours() const noexcept { return static_cast<int>(palette_.size()); }

  vertex_id vertex(int row, int col) const noexcept { return row * n_ + col; }
  int row_of(vertex_id v) const noexcept { return v / n_; }
  int col_of(vertex_id v) const noexcept { return v % n_; }

  colour_id at(int row, int col) const { return cells_[static_cast<std::size_t>(vertex(row, col))]; }
  colour_id colour(vertex_id v) const { return cells_[static_cast<std::size_t>(v)]; }
  const std::string& token(int row, int col) const { return palette_[static_cast<std::size_t>(at(row, col))]; }

  const std::vector<colour_id>& cells() const noexcept { return cells_; }
  const std::vector<std::string>& palette() const noexcept { return palette_; }

  std::optional<colour_id> find_colour(std::string_view token) const {
    auto it = std::find(palette_.begin(), palette_.end(), token);
    if (it == palette_.end()) return std::nullopt;
    return static_cast<colour_id>(it - palette_.begin());
  }

  // Same width and the same token on every square; palette order is irrelevant.
  friend bool operator==(const Board2xN& a, const Board2xN& b) {
    if (a.n_ != b.n_) return false;
    for (std::size_t i = 0; i < a.cells_.size(); ++i) {
      if (a.palette_[static_cast<std::size_t>(a.cells_[i])] != b.palette_[static_cast<std::size_t>(b.cells_[i])])
        return false;
    }
    return true;
  }

private:
  int n_;
  std::vector<colour_id> cells_;
  std::vector<std::string> palette_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n\f\v";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      if (start < text.size()) lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

} // namespace detail

// Text format:
//   n
//   <n tokens, top row>
//   <n tokens, bottom row>
// Leading lines starting with '#' are comments. Colour ids follow first occurrence, top row first.
inline Board2xN parse_board(std::string_view text) {
  const auto lines = detail::split_lines(text);
  std::size_t i = 0;
  while (i < lines.size() && !lines[i].empty() && lines[i].front() == '#') ++i;
  std::size_t last = lines.size();
  while (last > i && detail::trim(lines[last - 1]).empty()) --last;
  if (last - i != 3) {
    throw parse_error(std::min(last, lines.size()) + (last == i ? 1 : 0),
                      "expected 3 lines (width, top row, bottom row), found " + std::to_string(last - i));
  }

  const auto header = detail::trim(lines[i]);
  int n = 0;
  auto [ptr, ec] = std::from_chars(header.data(), header.data() + header.size(), n);
  if (ec != std::errc{} || ptr != header.data() + header.size() || header.empty())
    throw parse_error(i + 1, "board width is not a decimal integer");
  if (n < 1) throw parse_error(i + 1, "board width must be at least 1");

  std::vector<std::string> palette;
  std::unordered_map<std::string, colour_id> ids;
  std::vector<colour_id> cells;
  cells.reserve(2 * static_cast<std::size_t>(n));
  for (std::size_t row = 0; row < 2; ++row) {
    const std::size_t line_no = i + 2 + row;
    const auto tokens = detail::split_ws(lines[i + 1 + row]);
    if (tokens.size() != static_cast<std::size_t>(n)) {
      throw parse_error(line_no, "ragged row: expected " + std::to_string(n) + " tokens, found " +
                                     std::to_string(tokens.size()));
    }
    for (auto tok : tokens) {
      auto [it, inserted] = ids.try_emplace(std::string(tok), static_cast<colour_id>(palette.size()));
      if (inserted) palette.emplace_back(tok);
      cells.push_back(it->second);
    }
  }
  return Board2xN(n, std::move(cells), std::move(palette));
}

inline std::string serialize_board(const Board2xN& board) {
  std::string out = std::to_string(board.width()) + "\n";
  for (int row = 0; row < 2; ++row) {
    for (int col = 0; col < board.width(); ++col) {
      if (col) out += ' ';
      out += board.token(row, col);
    }
    out += '\n';
  }
  return out;
}

// Dual graph: one vertex per square, edges between horizontally or vertically adjacent squares.
inline ColouredGraph to_graph(const Board2xN& board) {
  const int n = board.width();
  std::vector<std::vector<vertex_id>> adj(static_cast<std::size_t>(2 * n));
  auto link = [&](vertex_id a, vertex_id b) {
    adj[static_cast<std::size_t>(a)].push_back(b);
    adj[static_cast<std::size_t>(b)].push_back(a);
  };
  for (int col = 0; col < n; ++col) {
    link(board.vertex(0, col), board.vertex(1, col));
    if (col + 1 < n) {
      link(board.vertex(0, col), board.vertex(0, col + 1));
      link(board.vertex(1, col), board.vertex(1, col + 1));
    }
  }
  return ColouredGraph(std::move(adj), board.cells(), board.palette());
}

// All (n+1)^2 borders, ordered by (top, bottom).
inline std::vector<Border> enumerate_borders(int n) {
  if (n < 1) throw input_error("board width must be at least 1");
  std::vector<Border> out;
  out.reserve(static_cast<std::size_t>((n + 1) * (n + 1)));
  for (int t = 0; t <= n; ++t)
    for (int b = 0; b <= n; ++b) out.push_back({t, b});
  return out;
}

// Pure geometry on a board of width n; the Board2xN overloads below forward here.
namespace geom {

constexpr bool valid_border(int n, Border b) noexcept {
  return b.top >= 0 && b.top <= n && b.bottom >= 0 && b.bottom <= n;
}

// Square (row, col) lies left of the border.
constexpr bool left_of(int row, int col, Border b) noexcept { return col < (row == 0 ? b.top : b.bottom); }

constexpr bool in_section(int row, int col, Border lo, Border hi) noexcept {
  return !left_of(row, col, lo) && left_of(row, col, hi);
}

constexpr bool contains(int n, vertex_id v, Border lo, Border hi) noexcept {
  return in_section(v / n, v % n, lo, hi);
}

// Non-empty and connected: each row is a contiguous run, so the rows must share a column
// whenever both are non-empty.
constexpr bool is_section(Border lo, Border hi) noexcept {
  if (!border_leq(lo, hi)) return false;
  const bool top = lo.top < hi.top;
  const bool bot = lo.bottom < hi.bottom;
  if (top && bot) return std::max(lo.top, lo.bottom) < std::min(hi.top, hi.bottom);
  return top || bot;
}

inline std::vector<vertex_id> section_vertices(int n, Border lo, Border hi) {
  std::vector<vertex_id> out;
  for (int col = lo.top; col < hi.top; ++col) out.push_back(col);
  for (int col = lo.bottom; col < hi.bottom; ++col) out.push_back(n + col);
  return out;
}

inline int section_size(Border lo, Border hi) noexcept {
  return std::max(0, hi.top - lo.top) + std::max(0, hi.bottom - lo.bottom);
}

// Squares with an edge on the border: the vertical edge squares on `side`, plus every square
// whose horizontal middle edge lies on the border's run between the two meeting points.
inline std::vector<vertex_id> incident_vertices(int n, Border b, Side side) {
  std::vector<vertex_id> out;
  if (side == Side::right) {
    if (b.top < n) out.push_back(b.top);
    if (b.bottom < n) out.push_back(n + b.bottom);
  } else {
    if (b.top > 0) out.push_back(b.top - 1);
    if (b.bottom > 0) out.push_back(n + b.bottom - 1);
  }
  for (int j = std::min(b.top, b.bottom); j < std::max(b.top, b.bottom); ++j) {
    out.push_back(j);
    out.push_back(n + j);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Edges cut by the border, each oriented (left endpoint, right endpoint).
inline std::vector<std::pair<vertex_id, vertex_id>> crossing_edges(int n, Border b) {
  std::vector<std::pair<vertex_id, vertex_id>> out;
  if (b.top > 0 && b.top < n) out.emplace_back(b.top - 1, b.top);
  if (b.bottom > 0 && b.bottom < n) out.emplace_back(n + b.bottom - 1, n + b.bottom);
  for (int j = std::min(b.top, b.bottom); j < std::max(b.top, b.bottom); ++j) {
    if (b.top > j)
      out.emplace_back(j, n + j);  // top square left of the border, bottom square right
    else
      out.emplace_back(n + j, j);
  }
  return out;
}

} // namespace geom

inline void check_border(const Board2xN& board, Border b) {
  if (!geom::valid_border(board.width(), b))
    throw input_error("border (" + std::to_string(b.top) + "," + std::to_string(b.bottom) + ") out of range");
}

// Vertices between b1 and b2, top row first.
inline std::vector<vertex_id> section_vertices(const Board2xN& board, Border b1, Border b2) {
  check_border(board, b1);
  check_border(board, b2);
  if (!border_leq(b1, b2)) throw input_error("section borders are not ordered (b1 <= b2 violated)");
  return geom::section_vertices(board.width(), b1, b2);
}

inline bool is_section(const Board2xN& board, Border b1, Border b2) {
  check_border(board, b1);
  check_border(board, b2);
  if (!border_leq(b1, b2)) throw input_error("section borders are not ordered (b1 <= b2 violated)");
  return geom::is_section(b1, b2);
}

inline std::vector<vertex_id> incident_vertices(const Board2xN& board, Border b, Side side,
                                                std::optional<SectionRef> within = std::nullopt) {
  check_border(board, b);
  auto out = geom::incident_vertices(board.width(), b, side);
  if (within) {
    const int n = board.width();
    std::erase_if(out, [&](vertex_id v) { return !geom::contains(n, v, within->left, within->right); });
  }
  return out;
}

inline std::vector<std::pair<vertex_id, vertex_id>> crossing_edges(const Board2xN& board, Border b,
                                                                   std::optional<SectionRef> within = std::nullopt) {
  check_border(board, b);
  auto out = geom::crossing_edges(board.width(), b);
  if (within) {
    const int n = board.width();
    std::erase_if(out, [&](const auto& e) {
      return !geom::contains(n, e.first, within->left, within->right) ||
             !geom::contains(n, e.second, within->left, within->right);
    });
  }
  return out;
}

} // namespace floodit
