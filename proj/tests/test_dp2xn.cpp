#include <gtest/gtest.h>

#include <chrono>
#include <map>
#include <random>
#include <set>
#include <tuple>

#include "floodit/board.hpp"
#include "floodit/dp2xn.hpp"
#include "floodit/oracle.hpp"
#include "floodit/verify.hpp"

using namespace floodit;

namespace {

Board2xN uniform(int n, int colours = 1) {
  return Board2xN(n, std::vector<colour_id>(2 * static_cast<std::size_t>(n), 0), default_palette(colours));
}

int oracle_value(const Board2xN& b, std::optional<colour_id> target = std::nullopt) {
  const auto r = oracle::min_moves(to_graph(b), target);
  EXPECT_TRUE(r.solved());
  return r.value;
}

} // namespace

TEST(TreeExists, SingleColumn) {
  const auto b = uniform(4);
  for (int j = 0; j < 4; ++j) EXPECT_TRUE(dp::tree_exists(b, {j, j}, {j + 1, j + 1}, j, 4 + j));
}

TEST(TreeExists, TwoSquaresStrictlyLeftOfRootFails) {
  EXPECT_FALSE(dp::tree_exists(uniform(4), {0, 0}, {4, 4}, 1, 3));
  EXPECT_FALSE(dp::tree_exists(uniform(4), {0, 0}, {4, 4}, 1, 7));
}

TEST(TreeExists, FullTwoByThreeCorners) {
  EXPECT_TRUE(dp::tree_exists(uniform(3), {0, 0}, {3, 3}, 0, 2));
  EXPECT_TRUE(dp::tree_exists(uniform(3), {0, 0}, {3, 3}, 3, 2));
}

// r1 = r2 on top of a column whose bottom square has neighbours on both sides: the only
// spanning tree has the bottom middle square as a non-leaf off the (single-vertex) path.
TEST(TreeExists, SingleRootWithBranchingNeighbourFails) {
  const int n = 3;
  const Border lo{1, 0}, hi{2, 3};
  EXPECT_TRUE(is_section(uniform(n), lo, hi));
  EXPECT_FALSE(dp::tree_exists(uniform(n), lo, hi, 1, 1));
  EXPECT_FALSE(verify::tree_exists_brute(n, lo, hi, 1, 1));
}

TEST(TreeExists, RejectsBadGeometry) {
  EXPECT_THROW(dp::tree_exists(uniform(4), {0, 2}, {2, 4}, 0, 7), input_error);
  EXPECT_THROW(dp::tree_exists(uniform(4), {0, 0}, {2, 2}, 3, 1), input_error);
}

TEST(TreeExists, MatchesBruteForceUpToWidthFive) {
  for (int n = 1; n <= 5; ++n) {
    const auto c = verify::tree_exists_suite(n, 1);
    EXPECT_TRUE(c.ok()) << n << ": " << (c.notes.empty() ? "" : c.notes.front());
  }
}

TEST(ZeroTest, Examples) {
  const auto b = parse_board("2\nd d\ne e\n");
  const colour_id d = *b.find_colour("d"), e = *b.find_colour("e");
  dp::ZKey z{{0, 0}, {2, 2}, 0, 1, d, 1u << e};
  EXPECT_TRUE(dp::zero_test(b, z));
  z.ignore = 0;
  EXPECT_FALSE(dp::zero_test(b, z));
  const auto mono = uniform(3);
  EXPECT_TRUE(dp::zero_test(mono, {{0, 0}, {3, 3}, 0, 5, 0, 0}));
  EXPECT_TRUE(dp::zero_test(mono, {{0, 0}, {3, 3}, 3, 2, 0, 0}));
  EXPECT_THROW(dp::zero_test(b, {{0, 0}, {2, 2}, 0, 1, 7, 0}), input_error);
}

TEST(Solve, SmallExamples) {
  for (int n = 1; n <= 6; ++n) EXPECT_EQ(dp::solve(uniform(n)).value, 0);
  EXPECT_EQ(dp::solve(parse_board("1\na\nb\n")).value, 1);
  EXPECT_EQ(dp::solve(parse_board("2\na b\nb a\n")).value, 2);
}

TEST(Solve, TargetAbsentFromBoard) {
  const auto b = Board2xN(2, {0, 0, 0, 0}, {"a", "b"});
  dp::SolveOptions opt;
  opt.target = 1;
  EXPECT_EQ(dp::solve(b, opt).value, 1);
  const auto seq = dp::reconstruct(dp::solve(b, opt).table);
  ASSERT_EQ(seq.size(), 1u);
  EXPECT_EQ(seq[0].colour, 1);
}

TEST(Solve, Capacity) {
  std::vector<std::string> palette;
  for (int i = 0; i < 33; ++i) palette.push_back("c" + std::to_string(i));
  EXPECT_THROW(dp::solve(Board2xN(1, {0, 1}, palette)), capacity_error);
  EXPECT_THROW(dp::solve(uniform(1001)), capacity_error);
  dp::SolveOptions opt;
  opt.max_entries = 10;
  std::mt19937_64 rng(1);
  EXPECT_THROW(dp::solve(verify::random_board(rng, 8, 3), opt), capacity_error);
  dp::SolveOptions late;
  late.time_budget = std::chrono::nanoseconds(0);
  EXPECT_THROW(dp::solve(verify::random_board(rng, 20, 3), late), capacity_error);
  dp::SolveOptions bad;
  bad.target = 3;
  EXPECT_THROW(dp::solve(uniform(2, 2), bad), input_error);
}

TEST(Solve, ThirtyTwoColoursAccepted) {
  const std::vector<colour_id> cells{0, 31, 31, 0};
  std::vector<std::string> palette;
  for (int i = 0; i < 32; ++i) palette.push_back("c" + std::to_string(i));
  EXPECT_EQ(dp::solve(Board2xN(2, cells, palette)).value, 2);
}

TEST(Solve, MatchesOracleOnRandomBoards) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 60; ++i) {
    const int n = std::uniform_int_distribution<int>(1, 6)(rng);
    const int c = std::uniform_int_distribution<int>(1, 4)(rng);
    const auto b = verify::random_board(rng, n, c);
    EXPECT_EQ(dp::solve(b).value, oracle_value(b)) << serialize_board(b);
    const colour_id d = std::uniform_int_distribution<int>(0, c - 1)(rng);
    dp::SolveOptions opt;
    opt.target = d;
    EXPECT_EQ(dp::solve(b, opt).value, oracle_value(b, d)) << serialize_board(b) << " target " << d;
  }
}

TEST(Reconstruct, Examples) {
  EXPECT_TRUE(dp::reconstruct(dp::solve(uniform(3)).table).empty());
  const auto b = parse_board("1\na\nb\n");
  const auto seq = dp::reconstruct(dp::solve(b).table);
  ASSERT_EQ(seq.size(), 1u);
  EXPECT_TRUE(replay(to_graph(b), seq).flooded);
}

TEST(Reconstruct, RandomTwoByFiveReplay) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 100; ++i) {
    const auto b = verify::random_board(rng, 5, 3);
    const auto sol = dp::solve(b);
    const auto seq = dp::reconstruct(sol.table);
    EXPECT_EQ(static_cast<int>(seq.size()), sol.value);
    EXPECT_TRUE(replay(to_graph(b), seq).flooded);
  }
}

TEST(Table, StatsOnTrivialBoard) {
  const auto sol = dp::solve(uniform(1));
  const auto st = dp::table_stats(sol.table);
  EXPECT_EQ(st.relaxations, 0u);
  EXPECT_EQ(st.max_value, 0);
  EXPECT_GT(st.keys, 0u);
  EXPECT_GT(st.zero_keys, 0u);
  dp::SolveOptions ref;
  ref.mode = dp::Mode::reference;
  EXPECT_EQ(dp::table_stats(dp::solve(uniform(1), ref).table).relaxations, 0u);
}

TEST(Table, ReferenceRunsTheFullSweepCount) {
  const auto b = parse_board("3\na b c\nc a b\n");
  dp::SolveOptions ref;
  ref.mode = dp::Mode::reference;
  const auto st = dp::solve(b, ref).table.stats();
  EXPECT_EQ(st.sweeps, 3u * 3u + 2u * 3u);
  EXPECT_LE(st.last_change_sweep, st.sweeps);
}

TEST(Table, ValueLookupCanonicalizesIgnoreSets) {
  const auto b = Board2xN(2, {0, 1, 1, 0}, {"a", "b", "z"});  // z absent
  const auto sol = dp::solve(b);
  const auto z = sol.table.best_key();
  auto with_absent = z;
  with_absent.ignore |= 1u << 2;
  EXPECT_EQ(sol.table.value(z), sol.table.value(with_absent));
  EXPECT_FALSE(sol.table.value(dp::ZKey{{0, 0}, {2, 2}, 1, 1, 0, 0}).has_value());  // no such root pair
}

TEST(Table, BackPointerOfOptimumIsConsistent) {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 20; ++i) {
    const auto b = verify::random_board(rng, 4, 3);
    const auto sol = dp::solve(b);
    const auto bp = sol.table.back(sol.table.best_key());
    ASSERT_TRUE(bp.has_value());
    EXPECT_EQ(bp->kind == dp::BackKind::zero, sol.value == 0);
    EXPECT_NE(bp->kind, dp::BackKind::none);
  }
}

TEST(Modes, ReferenceAndWorklistAgree) {
  std::mt19937_64 rng(14);
  for (int i = 0; i < 25; ++i) {
    const auto b = verify::random_board(rng, std::uniform_int_distribution<int>(1, 4)(rng), 3);
    dp::SolveOptions ref;
    ref.mode = dp::Mode::reference;
    const auto a = dp::solve(b), r = dp::solve(b, ref);
    EXPECT_TRUE(a.table.same_values(r.table)) << serialize_board(b);
    EXPECT_EQ(a.value, r.value);
  }
}

TEST(Modes, FullScopeKeepsTheOptimum) {
  std::mt19937_64 rng(15);
  for (int i = 0; i < 15; ++i) {
    const auto b = verify::random_board(rng, 4, 3);
    dp::SolveOptions full;
    full.scope = dp::Scope::full;
    const auto f = dp::solve(b, full);
    const auto r = dp::solve(b);
    EXPECT_EQ(f.value, r.value);
    EXPECT_GE(f.table.stats().sections, r.table.stats().sections);
    dp::SolveOptions full_ref = full;
    full_ref.mode = dp::Mode::reference;
    EXPECT_TRUE(f.table.same_values(dp::solve(b, full_ref).table));
  }
}

// Per root pair, the literal splits whose two sub-keys have valid roots are exactly the
// candidate splits with the same property.
TEST(Splits, CandidatesKeepEveryUsableLiteralSplit) {
  for (int n = 1; n <= 7; ++n) {
    std::map<std::pair<int, int>, std::vector<dp::detail::RootPair>> cache;
    auto roots = [&](Border lo, Border hi) -> const std::vector<dp::detail::RootPair>& {
      const auto key = std::make_pair(lo.top * 100 + lo.bottom, hi.top * 100 + hi.bottom);
      auto it = cache.find(key);
      if (it == cache.end()) it = cache.emplace(key, dp::detail::section_roots(n, lo, hi)).first;
      return it->second;
    };
    for (Border lo : enumerate_borders(n))
      for (Border hi : enumerate_borders(n)) {
        if (!geom::is_section(lo, hi)) continue;
        using Row = std::tuple<int, int, vertex_id, vertex_id, vertex_id, vertex_id>;
        auto usable = [&](const std::vector<dp::detail::Split>& splits) {
          std::set<Row> out;
          for (const auto& root : roots(lo, hi))
            for (const auto& sp : splits)
              if (dp::detail::find_root(roots(lo, sp.b), root.r1, sp.x1) >= 0 &&
                  dp::detail::find_root(roots(sp.b, hi), sp.x2, root.r2) >= 0)
                out.insert({sp.b.top, sp.b.bottom, sp.x1, sp.x2, root.r1, root.r2});
          return out;
        };
        const auto lit = dp::detail::literal_splits(n, lo, hi);
        const auto cand = dp::detail::candidate_splits(n, lo, hi);
        EXPECT_EQ(usable(lit), usable(cand)) << n << " (" << lo.top << "," << lo.bottom << ")-(" << hi.top << ","
                                             << hi.bottom << ")";
        std::set<std::tuple<int, int, vertex_id, vertex_id>> lset;
        for (const auto& s : lit) lset.insert({s.b.top, s.b.bottom, s.x1, s.x2});
        for (const auto& s : cand) EXPECT_TRUE(lset.count({s.b.top, s.b.bottom, s.x1, s.x2}));
      }
  }
}

TEST(Detail, CompressAndMinimalSets) {
  EXPECT_EQ(dp::detail::compress(0b1011'0110u, 0b1111'0000u), 0b1011u);
  EXPECT_EQ(dp::detail::compress(0b0101u, 0b0101u), 0b11u);
  std::vector<std::uint32_t> set;
  dp::detail::add_minimal(set, 0b110);
  dp::detail::add_minimal(set, 0b111);  // dominated
  dp::detail::add_minimal(set, 0b010);  // dominates 0b110
  dp::detail::add_minimal(set, 0b001);
  EXPECT_EQ(std::set<std::uint32_t>(set.begin(), set.end()), (std::set<std::uint32_t>{0b010, 0b001}));
  EXPECT_EQ(dp::sat_add(dp::kInf, 1), dp::kInf);
  EXPECT_EQ(dp::sat_add(3, 4), 7);
}
