#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "mrmp/planner.hpp"

using namespace mrmp;

namespace {

Instance asInstance(const testfix::Layout& fx) { return {fx.workspace, fx.starts, fx.targets, "", {}}; }

MotionPlan planFor(const testfix::Layout& fx) {
  const auto fs = computeFreeSpace(fx.workspace);
  return solveComponent(fs.components[0], fx.starts, fx.targets);
}

// Straight-line graph on points along the x axis, 5 apart.
MotionGraph lineGraph(std::size_t n) {
  MotionGraph g;
  g.startCount = 0;
  for (std::size_t i = 0; i < n; ++i) g.nodes.push_back({{5.0 * i, 0}, NodeKind::Target, i, std::nullopt});
  g.incident.assign(n, {});
  for (std::size_t i = 0; i + 1 < n; ++i) {
    g.incident[i].push_back(g.edges.size());
    g.incident[i + 1].push_back(g.edges.size());
    g.edges.push_back({i, i + 1, EdgeKind::Guaranteed, {}, {geom::ArcSeg::segment(g.nodes[i].position, g.nodes[i + 1].position)}});
  }
  return g;
}

}  // namespace

TEST(Validate, Examples) {
  const std::vector<Point> W{{0, 0}, {20, 0}, {20, 10}, {0, 10}};
  const auto Fi = computeFreeSpace(W).components[0];
  const std::vector<Point> close{{3, 3}, {6.9, 3}}, far{{3, 7}, {10, 7}};
  auto v = validateSingleComponent(Fi, close, far);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].kind, ViolationKind::Mu);
  EXPECT_NEAR(v[0].value, 3.9, 1e-12);
  v = validateSingleComponent(Fi, far, std::vector<Point>{{3, 3}});
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].kind, ViolationKind::Charge);
  EXPECT_TRUE(validateSingleComponent(Fi, far, std::vector<Point>{{3, 3}, {10, 3}}).empty());
  EXPECT_EQ(validateSingleComponent(Fi, std::vector<Point>{{0.5, 5}}, std::vector<Point>{{5, 5}})[0].kind,
            ViolationKind::OutsideFreeSpace);
}

TEST(MergeClosePairs, Examples) {
  const std::vector<Point> S{{0, 0}, {10, 0}};
  auto p = mergeClosePairs(S, std::vector<Point>{{1, 0}, {12, 0}});
  EXPECT_EQ(p.targetOf[0], std::optional<std::size_t>(0));
  EXPECT_FALSE(p.targetOf[1].has_value());  // distance exactly 2: open aura
  EXPECT_EQ(p.keptTargets, std::vector<std::size_t>{1});
}

TEST(ChargedTree, CutZeroChargeEdges) {
  ChargedTree path{{0, 1, 2, 3}, {{0, 1}, {1, 2}, {2, 3}}, {1, -1, 1, -1}};
  auto parts = cutZeroChargeEdges(path);
  ASSERT_EQ(parts.size(), 2u);
  EXPECT_EQ(parts[0].nodes, (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(parts[1].nodes, (std::vector<std::size_t>{2, 3}));
  ChargedTree star{{0, 1, 2, 3}, {{0, 1}, {0, 2}, {0, 3}}, {0, 0, 0, 0}};
  EXPECT_EQ(cutZeroChargeEdges(star).size(), 4u);
  ChargedTree noCut{{0, 1, 2}, {{0, 1}, {1, 2}}, {1, 0, -1}};
  EXPECT_EQ(cutZeroChargeEdges(noCut).size(), 1u);
}

TEST(ChargedTree, FindSink) {
  EXPECT_EQ(findSink({{0, 1}, {{0, 1}}, {1, -1}}), 1u);
  EXPECT_EQ(findSink({{0, 1, 2}, {{0, 1}, {1, 2}}, {2, -1, -1}}), 2u);
  EXPECT_EQ(findSink({{5}, {}, {0, 0, 0, 0, 0, 0}}), 5u);
}

TEST(ChainMove, Examples) {
  const MotionGraph g = lineGraph(5);
  auto all = [](const MotionEdge&) { return true; };
  {
    Occupancy occ{{1, 0, 0, 0, 0}};
    const auto moves = chainMove(g, occ, 0, 4, all);
    ASSERT_EQ(moves.size(), 1u);
    EXPECT_EQ(moves[0].path.size(), 4u);
    EXPECT_EQ(occ.occupied, (std::vector<char>{0, 0, 0, 0, 1}));
  }
  {
    Occupancy occ{{1, 1, 0, 0, 0}};
    const auto moves = chainMove(g, occ, 0, 2, all);
    ASSERT_EQ(moves.size(), 2u);
    EXPECT_TRUE(geom::near(moves[0].from, {5, 0}));  // a→t first
    EXPECT_TRUE(geom::near(moves[1].to, {5, 0}));
  }
  {
    Occupancy occ{{1, 1, 1, 1, 0}};
    const auto moves = chainMove(g, occ, 0, 4, all);
    EXPECT_EQ(moves.size(), 4u);
    EXPECT_TRUE(geom::near(moves[0].from, {15, 0}));
    EXPECT_EQ(occ.occupied, (std::vector<char>{0, 1, 1, 1, 1}));
    // Occupancy count is preserved.
    EXPECT_EQ(std::count(occ.occupied.begin(), occ.occupied.end(), 1), 4);
  }
  {
    Occupancy occ{{1, 0, 0, 0, 0}};
    auto none = [](const MotionEdge&) { return false; };
    EXPECT_THROW(chainMove(g, occ, 0, 4, none), NoPath);
  }
}

TEST(SolveComponent, Trivial) {
  const std::vector<Point> W{{0, 0}, {12, 0}, {12, 8}, {0, 8}};
  const auto Fi = computeFreeSpace(W).components[0];
  const std::vector<Point> S{{3, 3}};
  EXPECT_TRUE(solveComponent(Fi, S, S).moves.empty());
  const std::vector<Point> T{{9, 5}};
  const auto plan = solveComponent(Fi, S, T);
  ASSERT_EQ(plan.moves.size(), 1u);
  EXPECT_TRUE(checkPlan({W, S, T, "", {}}, plan).empty());
  EXPECT_THROW(solveComponent(Fi, std::vector<Point>{{3, 3}, {6, 3}}, std::vector<Point>{{9, 5}, {9, 2}}),
               PreconditionViolation);
}

TEST(SolveComponent, ClimbThroughBlockingAreas) {
  for (int k = 1; k <= 3; ++k)
    for (bool up : {true, false}) {
      const auto fx = testfix::stackedClimb(k, up);
      const auto plan = planFor(fx);
      const auto v = checkPlan(asInstance(fx), plan);
      EXPECT_TRUE(v.empty()) << "k=" << k << " up=" << up << " " << (v.empty() ? "" : v[0].message);
      const std::size_t m = fx.starts.size();
      EXPECT_LE(plan.moves.size(), 2 * m * m + m);
      EXPECT_GE(plan.moves.size(), 1u);
    }
}

TEST(SolveComponent, BlockerFilledLastWhenImporting) {
  // Extra robot comes down into the bottom room, whose target blocks the
  // channel: the blocker target must be filled after the crossing.
  const auto fx = testfix::stackedClimb(1, false);
  const auto plan = planFor(fx);
  ASSERT_TRUE(checkPlan(asInstance(fx), plan).empty());
  const Point blocker = fx.targets[0];
  std::size_t fillBlocker = plan.moves.size(), crossing = plan.moves.size();
  for (std::size_t i = 0; i < plan.moves.size(); ++i) {
    if (geom::near(plan.moves[i].to, blocker, 1e-9)) fillBlocker = i;
    if (plan.moves[i].from.y > 6 && plan.moves[i].to.y < 4) crossing = i;
  }
  ASSERT_LT(crossing, plan.moves.size());
  ASSERT_LT(fillBlocker, plan.moves.size());
  EXPECT_LE(crossing, fillBlocker);
}

TEST(SolveComponent, ClosePairsSettleInsideAuras) {
  const std::vector<Point> W{{0, 0}, {16, 0}, {16, 8}, {0, 8}};
  const auto Fi = computeFreeSpace(W).components[0];
  const std::vector<Point> S{{3, 3}, {9, 4}}, T{{4, 4}, {13, 5}};
  const auto plan = solveComponent(Fi, S, T);
  EXPECT_TRUE(checkPlan({W, S, T, "", {}}, plan).empty());
  // The last move settles the pair (3,3)→(4,4) within both auras.
  const Move& last = plan.moves.back();
  EXPECT_TRUE(geom::near(last.to, {4, 4}, 1e-9));
  EXPECT_GE(geom::pathClearance(last.path, {13, 5}), 2 - 1e-6);
}

TEST(SolveComponent, RandomInstancesVerify) {
  std::mt19937 rng(5);
  int solved = 0;
  for (int it = 0; it < 60 && solved < 25; ++it) {
    const auto W = testfix::randomComb(rng);
    const auto fs = computeFreeSpace(W);
    const Region& Fi = fs.components[0];
    std::vector<Point> S, T;
    const int m = 1 + it % 5;
    const double beta = it % 2 == 0 ? 2.0 : 0.0;
    if (!testfix::samplePositions(
            rng, Fi.bbox(), [&](Point p) { return geom::pointInRegion(p, Fi) == geom::Where::Inside; }, m, 4,
            beta, S, T))
      continue;
    const auto plan = solveComponent(Fi, S, T);
    EXPECT_TRUE(checkPlan({W, S, T, "", {}}, plan).empty()) << "instance " << it;
    EXPECT_LE(plan.moves.size(), static_cast<std::size_t>(2 * m * m + m));
    ++solved;
  }
  EXPECT_GE(solved, 20);
}
