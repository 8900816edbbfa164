#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <random>

#include "floodit/board.hpp"
#include "floodit/reduction.hpp"

using namespace floodit;
using namespace floodit::reduction;

namespace {

void expect_parse_error_at(const std::string& text, std::size_t line) {
  try {
    parse_graph(text);
    FAIL() << "expected parse_error for:\n" << text;
  } catch (const parse_error& e) {
    EXPECT_EQ(e.line(), line) << e.what();
  }
}

VCInstance random_graph(std::mt19937_64& rng, int nv) {
  std::vector<std::pair<int, int>> edges;
  for (int v = 1; v < nv; ++v) edges.emplace_back(std::uniform_int_distribution<int>(0, v - 1)(rng), v);
  std::bernoulli_distribution coin(0.3);
  for (int u = 0; u < nv; ++u)
    for (int v = u + 1; v < nv; ++v)
      if (coin(rng) && std::find(edges.begin(), edges.end(), std::make_pair(u, v)) == edges.end())
        edges.emplace_back(u, v);
  return make_instance(nv, edges);
}

} // namespace

TEST(ParseGraph, Examples) {
  const auto k2g = parse_graph("0 1\n");
  EXPECT_EQ(k2g.num_vertices, 2);
  EXPECT_EQ(k2g.edges.size(), 1u);
  const auto p3g = parse_graph("0 1\n1 2");
  EXPECT_EQ(p3g.num_vertices, 3);
  EXPECT_EQ(p3g.edges.size(), 2u);
  expect_parse_error_at("0 0\n", 1);
}

TEST(ParseGraph, CommentsHeaderAndOrientation) {
  const auto g = parse_graph("# triangle\np 3\n\n2 1\n0 1\n# end\n0 2\n");
  EXPECT_EQ(g.num_vertices, 3);
  ASSERT_EQ(g.edges.size(), 3u);
  EXPECT_EQ(g.edges[0], std::make_pair(1, 2));
}

TEST(ParseGraph, Errors) {
  expect_parse_error_at("0 1\n1 0\n", 2);      // duplicate, either orientation
  expect_parse_error_at("0 1\n1 x\n", 2);      // malformed
  expect_parse_error_at("0 1 2\n", 1);         // too many fields
  expect_parse_error_at("0 -1\n", 1);          // negative id
  expect_parse_error_at("0 1\n2 3\np 4\n", 3); // header after edges
  expect_parse_error_at("p 2\n0 5\n", 2);      // id beyond the header
  expect_parse_error_at("# nothing\n", 2);     // no edges
  expect_parse_error_at("0 2\n", 1);           // vertex 1 isolated
  expect_parse_error_at("p 3\n0 1\n", 1);      // vertex 2 isolated, blamed on the header
}

TEST(MakeInstance, Validates) {
  EXPECT_THROW(make_instance(2, {{0, 0}}), input_error);
  EXPECT_THROW(make_instance(2, {{0, 1}, {1, 0}}), input_error);
  EXPECT_THROW(make_instance(3, {{0, 1}}), input_error);
  EXPECT_THROW(make_instance(2, {{0, 2}}), input_error);
  EXPECT_THROW(make_instance(2, {}), input_error);
}

TEST(BuildBoard, Arithmetic) {
  const auto [b2, m2] = build_board(k2());
  EXPECT_EQ(m2.m, 1);
  EXPECT_EQ(m2.r, 4);
  EXPECT_EQ(m2.n, 14);
  EXPECT_EQ(m2.N, 5);
  EXPECT_EQ(b2.width(), 14);
  EXPECT_EQ(b2.num_colours(), 7);
  const auto [b3, m3] = build_board(p3());
  EXPECT_EQ(m3.r, 7);
  EXPECT_EQ(m3.n, 40);
  EXPECT_EQ(m3.N, 17);
  EXPECT_EQ(b3.num_colours(), 19);
}

TEST(BuildBoard, InvariantsOnRandomGraphs) {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 20; ++i) {
    const auto g = random_graph(rng, std::uniform_int_distribution<int>(2, 5)(rng));
    const auto [board, meta] = build_board(g);
    const int m = static_cast<int>(g.edges.size());
    EXPECT_EQ(meta.r, 2 * m + g.num_vertices);
    EXPECT_EQ(meta.n, m * (2 * meta.r + 6));
    EXPECT_EQ(meta.N, m * meta.r + 2 * m - 1);
    EXPECT_EQ(board.width(), meta.n);
    EXPECT_EQ(board.num_colours(), m * meta.r + m + g.num_vertices);
    EXPECT_EQ(parse_board(serialize_board(board)), board);
    EXPECT_EQ(meta.legend.size(), static_cast<std::size_t>(board.num_colours()));

    // Every island is a singleton component on the bottom row carrying its vertex colour.
    const auto g2 = to_graph(board);
    const auto comps = mono_components(g2);
    ASSERT_EQ(meta.gadgets.size(), g.edges.size());
    for (const auto& gd : meta.gadgets) {
      for (const Island& isl : {gd.island_u, gd.island_v}) {
        const vertex_id v = board.vertex(1, isl.column);
        EXPECT_EQ(comps.blocks[static_cast<std::size_t>(comps.block_of[static_cast<std::size_t>(v)])].size(), 1u);
        EXPECT_EQ(board.token(1, isl.column), "v" + std::to_string(isl.vertex));
      }
      EXPECT_NE(std::abs(gd.island_u.column - gd.island_v.column), 1);
    }
  }
}

TEST(MinVertexCover, Examples) {
  EXPECT_EQ(min_vertex_cover(k2()).size, 1);
  const auto p = min_vertex_cover(p3());
  EXPECT_EQ(p.size, 1);
  EXPECT_EQ(p.cover, (std::vector<int>{1}));
  EXPECT_EQ(min_vertex_cover(k3()).size, 2);
  std::vector<std::pair<int, int>> star;
  for (int v = 1; v < 22; ++v) star.emplace_back(0, v);
  EXPECT_THROW(min_vertex_cover(make_instance(22, star)), capacity_error);
  EXPECT_EQ(min_vertex_cover(make_instance(22, star), 22).size, 1);
}

TEST(CoverStrategy, Examples) {
  for (auto [g, want] : {std::pair{k2(), 6}, std::pair{p3(), 18}, std::pair{k3(), 34}}) {
    const auto [board, meta] = build_board(g);
    const auto mvc = min_vertex_cover(g);
    const auto seq = cover_strategy(g, mvc.cover, board, meta);
    EXPECT_EQ(static_cast<int>(seq.size()), want);
    EXPECT_TRUE(replay(to_graph(board), seq).flooded);
  }
  const auto [board, meta] = build_board(k2());
  EXPECT_EQ(cover_strategy(k2(), {1}, board, meta).size(), 6u);
  EXPECT_THROW(cover_strategy(p3(), {0}, build_board(p3()).first, build_board(p3()).second), input_error);
}

TEST(CoverStrategy, LengthBoundForEveryCover) {
  std::mt19937_64 rng(22);
  for (int i = 0; i < 15; ++i) {
    const auto g = random_graph(rng, std::uniform_int_distribution<int>(2, 5)(rng));
    const auto [board, meta] = build_board(g);
    const auto graph = to_graph(board);
    for (std::uint32_t s = 0; s < (1u << g.num_vertices); ++s) {
      std::vector<int> cover;
      for (int v = 0; v < g.num_vertices; ++v)
        if (s >> v & 1) cover.push_back(v);
      if (!is_vertex_cover(g, cover)) continue;
      const auto seq = cover_strategy(g, cover, board, meta);
      EXPECT_LE(static_cast<int>(seq.size()), meta.N + static_cast<int>(cover.size()));
      EXPECT_TRUE(replay(graph, seq).flooded);
    }
  }
}

// After the core move, each flank move adds exactly the two flank columns of that colour.
TEST(CoverStrategy, FlankAbsorption) {
  const auto g = p3();
  const auto [board, meta] = build_board(g);
  const auto seq = cover_strategy(g, {1}, board, meta);
  ColouredGraph cur = to_graph(board);
  std::size_t at = 0;
  for (const auto& gd : meta.gadgets) {
    cur = apply_move(cur, seq[at++]);
    const vertex_id core = board.vertex(0, gd.first_column + meta.r);
    auto size_of = [&](const ColouredGraph& s) {
      const auto c = mono_components(s);
      return c.blocks[static_cast<std::size_t>(c.block_of[static_cast<std::size_t>(core)])].size();
    };
    EXPECT_EQ(size_of(cur), 11u);  // 12 core squares minus the chosen island
    for (int i = 1; i <= meta.r; ++i) {
      const auto before = size_of(cur);
      cur = apply_move(cur, seq[at++]);
      EXPECT_EQ(size_of(cur), before + 4) << "flank " << i;
    }
  }
}

TEST(VerifyReduction, Verdicts) {
  const auto a = verify_reduction(k2());
  EXPECT_EQ(a.verdict, Verdict::equal);
  EXPECT_EQ(a.upper, 6);
  EXPECT_EQ(a.lower, 6);
  EXPECT_EQ(a.target, 6);
  const auto b = verify_reduction(p3());
  EXPECT_EQ(b.verdict, Verdict::equal);
  EXPECT_EQ(b.upper, 18);
  const auto c = verify_reduction(k3());
  EXPECT_EQ(c.verdict, Verdict::unresolved);
  EXPECT_EQ(c.lower, 32);
  EXPECT_EQ(c.upper, 34);
  EXPECT_FALSE(c.dp_value.has_value());
}
