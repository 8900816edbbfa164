#include <gtest/gtest.h>

#include <random>

#include "floodit/engine.hpp"
#include "floodit/error.hpp"

using namespace floodit;

namespace {

ColouredGraph path(std::vector<colour_id> colours, int palette = 2) {
  const int n = static_cast<int>(colours.size());
  std::vector<std::pair<vertex_id, vertex_id>> edges;
  for (int v = 1; v < n; ++v) edges.emplace_back(v - 1, v);
  return ColouredGraph::from_edges(n, edges, std::move(colours), default_palette(palette));
}

// a b / b a as a 4-cycle: 0-1 top, 2-3 bottom, 0-2 and 1-3 rungs.
ColouredGraph checkerboard() {
  const std::vector<std::pair<vertex_id, vertex_id>> edges{{0, 1}, {2, 3}, {0, 2}, {1, 3}};
  return ColouredGraph::from_edges(4, edges, {0, 1, 1, 0}, {"a", "b"});
}

} // namespace

TEST(ColouredGraph, RejectsSelfLoopsDisconnectionAndBadColours) {
  EXPECT_THROW(ColouredGraph({{0}}, {0}, {"a"}), input_error);
  EXPECT_THROW(ColouredGraph({{}, {}}, {0, 0}, {"a"}), input_error);
  EXPECT_THROW(ColouredGraph({{1}, {0}}, {0, 2}, {"a", "b"}), input_error);
  EXPECT_THROW(ColouredGraph({{1}, {}}, {0, 0}, {"a"}), input_error);
  EXPECT_THROW(ColouredGraph({}, {}, {"a"}), input_error);
}

TEST(ColouredGraph, DeduplicatesParallelEdges) {
  const auto g = ColouredGraph::from_edges(2, std::vector<std::pair<vertex_id, vertex_id>>{{0, 1}, {1, 0}}, {0, 0}, {"a"});
  EXPECT_EQ(g.num_edges(), 1u);
  EXPECT_TRUE(g.adjacent(0, 1));
}

TEST(MonoComponents, MonochromaticGraphIsOneBlock) {
  const auto c = mono_components(path({1, 1, 1, 1}));
  ASSERT_EQ(c.blocks.size(), 1u);
  EXPECT_EQ(c.blocks[0], (std::vector<vertex_id>{0, 1, 2, 3}));
}

TEST(MonoComponents, TwoColoursTwoSingletons) {
  const auto c = mono_components(path({0, 1}));
  EXPECT_EQ(c.blocks.size(), 2u);
}

TEST(MonoComponents, AlternatingPathIsAllSingletons) {
  const auto c = mono_components(path({0, 1, 0}));
  EXPECT_EQ(c.blocks.size(), 3u);
  EXPECT_NE(c.block_of[0], c.block_of[2]);
}

TEST(ApplyMove, SameColourIsIdentity) {
  const auto g = path({1, 1, 1});
  EXPECT_EQ(apply_move(g, {1, 1}), g);
}

TEST(ApplyMove, MiddleOfABAFloods) {
  const auto g = apply_move(path({0, 1, 0}), {1, 0});
  EXPECT_TRUE(g.is_monochromatic());
  EXPECT_EQ(g.colour(0), 0);
}

TEST(ApplyMove, CheckerboardMoveMakesThreeVertexComponent) {
  const auto g = apply_move(checkerboard(), {0, 1});
  const auto c = mono_components(g);
  ASSERT_EQ(c.blocks.size(), 2u);
  EXPECT_EQ(c.blocks[c.block_of[0]], (std::vector<vertex_id>{0, 1, 2}));
  EXPECT_EQ(g.colour(3), 0);
}

TEST(ApplyMove, RejectsOutOfRange) {
  const auto g = path({0, 1});
  EXPECT_THROW(apply_move(g, {2, 0}), input_error);
  EXPECT_THROW(apply_move(g, {0, 5}), input_error);
  EXPECT_THROW(apply_move(g, {-1, 0}), input_error);
}

TEST(Replay, EmptySequence) {
  EXPECT_TRUE(replay(path({0, 0}), {}).flooded);
  EXPECT_FALSE(replay(path({0, 1}), {}).flooded);
}

TEST(Replay, GreedyFloodsWithinVertexCountMinusOne) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = std::uniform_int_distribution<int>(1, 12)(rng);
    std::vector<std::pair<vertex_id, vertex_id>> edges;
    for (int v = 1; v < n; ++v) edges.emplace_back(std::uniform_int_distribution<int>(0, v - 1)(rng), v);
    for (int k = 0; k < n; ++k) {
      const int u = std::uniform_int_distribution<int>(0, n - 1)(rng), v = std::uniform_int_distribution<int>(0, n - 1)(rng);
      if (u != v) edges.emplace_back(u, v);
    }
    std::vector<colour_id> col(static_cast<std::size_t>(n));
    for (auto& c : col) c = std::uniform_int_distribution<int>(0, 3)(rng);
    const auto g = ColouredGraph::from_edges(n, edges, col, default_palette(4));
    const auto seq = greedy_flood(g);
    EXPECT_LE(static_cast<int>(seq.size()), n - 1);
    EXPECT_TRUE(replay(g, seq).flooded);
  }
}

TEST(ColoursPresent, WholeGraphAndSubsets) {
  EXPECT_EQ(colours_present(path({1, 1}, 3)), (std::vector<colour_id>{1}));
  EXPECT_EQ(colours_present(checkerboard()), (std::vector<colour_id>{0, 1}));
  const std::vector<vertex_id> one{1};
  EXPECT_EQ(colours_present(checkerboard(), one), (std::vector<colour_id>{1}));
  const std::vector<vertex_id> bad{9};
  EXPECT_THROW(colours_present(checkerboard(), bad), input_error);
}

TEST(Contract, ProperlyColouredGraphKeepsShape) {
  const auto c = contract(checkerboard());
  EXPECT_EQ(c.graph.num_vertices(), 4);
  EXPECT_EQ(c.graph.num_edges(), 4u);
}

TEST(Contract, MonochromaticGraphBecomesOneVertex) {
  const auto c = contract(path({0, 0, 0}));
  EXPECT_EQ(c.graph.num_vertices(), 1);
  EXPECT_EQ(c.vertex_map, (std::vector<vertex_id>{0, 0, 0}));
}

TEST(Contract, AAB) {
  const auto c = contract(path({0, 0, 1}));
  EXPECT_EQ(c.graph.num_vertices(), 2);
  EXPECT_EQ(c.graph.num_edges(), 1u);
  EXPECT_EQ(c.vertex_map[0], c.vertex_map[1]);
  EXPECT_NE(c.vertex_map[1], c.vertex_map[2]);
}

TEST(InducedSubgraph, KeepsInternalEdgesAndRejectsDisconnected) {
  const auto g = path({0, 1, 0, 1});
  const std::vector<vertex_id> mid{1, 2};
  const auto s = induced_subgraph(g, mid);
  EXPECT_EQ(s.graph.num_vertices(), 2);
  EXPECT_EQ(s.original, mid);
  const std::vector<vertex_id> ends{0, 3};
  EXPECT_THROW(induced_subgraph(g, ends), input_error);
}
