#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "mrmp/multiplan.hpp"
#include "mrmp/planner.hpp"
#include "mrmp/verifier.hpp"

using namespace mrmp;
using geom::ArcSeg;

namespace {

Instance fromLayout(const testfix::Layout& fx) {
  Instance in;
  in.workspace = fx.workspace;
  in.starts = fx.starts;
  in.targets = fx.targets;
  return in;
}

Region box(double x0, double y0, double x1, double y1) {
  return geom::polygonRegion(std::vector<Point>{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}});
}

Move straight(Point a, Point b) { return {a, b, {ArcSeg::segment(a, b)}}; }

InterferenceRecord rec(bool isStart, std::size_t from, std::size_t to, bool blocker = true) {
  InterferenceRecord r;
  r.isStart = isStart;
  r.sourceComponent = from;
  r.targetComponent = to;
  r.isRemoteBlocker = blocker;
  return r;
}

// Samples the path and checks it against the polygon with the test-side oracle.
bool pathInside(const std::vector<ArcSeg>& path, const std::vector<Point>& poly) {
  for (const auto& e : path)
    for (int i = 0; i <= 50; ++i)
      if (!testfix::insidePolygon(poly, e.at(i / 50.0)) && testfix::distanceToPolygon(poly, e.at(i / 50.0)) > 1e-7)
        return false;
  return true;
}

}  // namespace

TEST(InterferenceSets, DistantComponentsGiveNothing) {
  // Two 8x8 rooms joined by a 1.2 wide neck; positions near the room centers.
  const std::vector<Point> ws{{0, 0}, {8, 0}, {8, 3.4}, {10, 3.4}, {10, 0}, {18, 0},
                              {18, 8}, {10, 8}, {10, 4.6}, {8, 4.6}, {8, 8}, {0, 8}};
  const FreeSpace fs = computeFreeSpace(ws);
  ASSERT_EQ(fs.components.size(), 2u);
  const std::vector<Point> S{{4, 4}, {14, 4}}, T{{4, 2}, {14, 6}};
  EXPECT_TRUE(interferenceSets(fs, S, T).empty());
}

TEST(InterferenceSets, WindowStartCutsCorridor) {
  const Instance in = genFigure(Figure::Fig8, 0.1);
  const FreeSpace fs = computeFreeSpace(in.workspace);
  ASSERT_EQ(fs.components.size(), 2u);
  const auto recs = interferenceSets(fs, in.starts, in.targets);
  ASSERT_EQ(recs.size(), 1u);
  EXPECT_TRUE(recs[0].isStart);
  EXPECT_EQ(recs[0].index, 1u);
  // The corridor's free space spans y in [-0.2, 0.2]; the aura of (0, 1.7)
  // reaches down to y = -0.3 and so covers its full height.
  EXPECT_TRUE(recs[0].isRemoteBlocker);
  EXPECT_EQ(recs[0].sourceComponent, *fs.componentOf(in.starts[1]));
  EXPECT_EQ(recs[0].targetComponent, *fs.componentOf(in.starts[0]));
}

TEST(InterferenceSets, Fig9StartAndTargetBothInterfere) {
  const Instance in = genFigure(Figure::Fig9, 0.1);
  const FreeSpace fs = computeFreeSpace(in.workspace);
  ASSERT_EQ(fs.components.size(), 2u);
  const auto recs = interferenceSets(fs, in.starts, in.targets);
  ASSERT_EQ(recs.size(), 2u);
  bool start = false, target = false;
  for (const auto& r : recs) {
    (r.isStart ? start : target) = true;
    EXPECT_FALSE(r.isRemoteBlocker);
  }
  EXPECT_TRUE(start && target);
  // One mutual set: the two auras overlap.
  EXPECT_LT(geom::dist(recs[0].source, recs[1].source), 4.0);
}

TEST(InterferenceSets, NonBlockingWindowTarget) {
  const Instance in = fromLayout(testfix::threeRooms());
  const FreeSpace fs = computeFreeSpace(in.workspace);
  ASSERT_EQ(fs.components.size(), 3u);
  const auto recs = interferenceSets(fs, in.starts, in.targets);
  ASSERT_EQ(recs.size(), 2u);
  int blockers = 0;
  for (const auto& r : recs) {
    blockers += r.isRemoteBlocker;
    if (!r.isStart) {
      EXPECT_EQ(r.index, 1u);
      EXPECT_FALSE(r.isRemoteBlocker);  // the corridor is 2.4 high below the window
    }
  }
  EXPECT_EQ(blockers, 1);
}

TEST(BuildOrder, NoEdgesKeepsIndexOrder) {
  EXPECT_EQ(buildOrder({4, {}}), (std::vector<std::size_t>{0, 1, 2, 3}));
}

TEST(BuildOrder, StartAndTargetDirections) {
  // Start of 2 cuts 1, start of 1 cuts 0: chain 2, 1, 0.
  std::vector<InterferenceRecord> r{rec(true, 2, 1), rec(true, 1, 0)};
  EXPECT_EQ(buildOrder(interferenceForest(r, 3)), (std::vector<std::size_t>{2, 1, 0}));
  // A target of 0 cutting 1 means 1 is solved first.
  r = {rec(false, 0, 1)};
  EXPECT_EQ(buildOrder(interferenceForest(r, 2)), (std::vector<std::size_t>{1, 0}));
  // Plain interference adds no edge.
  r = {rec(true, 1, 0, false), rec(false, 0, 1, false)};
  EXPECT_TRUE(interferenceForest(r, 2).edges.empty());
}

TEST(BuildOrder, LowestReadyIndexFirst) {
  const InterferenceForest f{4, {{3, 0}, {1, 0}}};
  EXPECT_EQ(buildOrder(f), (std::vector<std::size_t>{1, 2, 3, 0}));
}

TEST(BuildOrder, CycleDetected) {
  std::vector<InterferenceRecord> r{rec(true, 0, 1), rec(true, 1, 0)};
  EXPECT_THROW(buildOrder(interferenceForest(r, 2)), CycleDetected);
}

TEST(Detour, UntouchedWhenClear) {
  const Move m = straight({-5, 0}, {5, 0});
  const Point parked[] = {{0, 2.5}};
  const Move d = detourAroundAuras(m, parked, box(-6, -3, 6, 3));
  ASSERT_EQ(d.path.size(), 1u);
  EXPECT_NEAR(geom::pathLength(d.path), 10.0, 1e-12);
}

TEST(Detour, ChordBecomesShorterArc) {
  const Move m = straight({-5, 0}, {5, 0});
  const Point parked[] = {{0, 1}};
  const Move d = detourAroundAuras(m, parked, box(-6, -3, 6, 3));
  // Chord at distance 1 from the center of a radius-2 circle: crossings at
  // x = ±√3, far arc of 240° replaced by the near arc of 120°.
  EXPECT_NEAR(geom::pathLength(d.path), 10 - 2 * std::sqrt(3.0) + 4 * geom::kPi / 3, 1e-6);
  EXPECT_GE(geom::pathClearance(d.path, parked[0]), 2 - 1e-9);
  EXPECT_TRUE(geom::near(d.path.front().a, m.from) && geom::near(d.path.back().b, m.to));
}

TEST(Detour, ArcSideOutsideRegionRejected) {
  const Move m = straight({-5, 0}, {5, 0});
  const Point parked[] = {{0, -0.5}};
  const Move d = detourAroundAuras(m, parked, box(-6, -1, 6, 4));
  // Only the upper side fits: half angle acos(0.25) on each side of vertical.
  EXPECT_NEAR(geom::pathLength(d.path), 10 - 2 * std::sqrt(3.75) + 4 * std::acos(0.25), 1e-6);
  EXPECT_TRUE(pathInside(d.path, {{-6, -1}, {6, -1}, {6, 4}, {-6, 4}}));
}

TEST(Detour, OverlappingAurasReroute) {
  const Move m = straight({-5, 0}, {5, 0});
  const Point parked[] = {{-1.2, 1.2}, {1.2, 1.2}};
  const Move d = detourAroundAuras(m, parked, box(-6, -3, 6, 3));
  for (Point p : parked) EXPECT_GE(geom::pathClearance(d.path, p), 2 - 1e-9);
  EXPECT_TRUE(pathInside(d.path, {{-6, -3}, {6, -3}, {6, 3}, {-6, 3}}));
  EXPECT_TRUE(geom::near(d.path.front().a, m.from) && geom::near(d.path.back().b, m.to));
}

TEST(Detour, ImpossibleThrows) {
  const Move m = straight({-5, 0}, {5, 0});
  const Point parked[] = {{0, 0}};
  EXPECT_THROW(detourAroundAuras(m, parked, box(-6, -1.5, 6, 1.5)), DetourImpossible);
}

TEST(SolveAll, Fig8UpperFirst) {
  const Instance in = genFigure(Figure::Fig8, 0.1);
  const MultiPlan r = solveAllDetailed(in);
  ASSERT_EQ(r.order.size(), 2u);
  EXPECT_EQ(r.order.front(), *r.freeSpace.componentOf(in.starts[1]));
  ASSERT_EQ(r.plan.moves.size(), 2u);
  EXPECT_TRUE(geom::near(r.plan.moves[0].from, in.starts[1]) && geom::near(r.plan.moves[0].to, in.targets[1]));
  EXPECT_TRUE(geom::near(r.plan.moves[1].from, in.starts[0]) && geom::near(r.plan.moves[1].to, in.targets[0]));
  EXPECT_TRUE(checkPlan(in, r.plan).empty());
}

TEST(SolveAll, Fig9MutualInterference) {
  const Instance in = genFigure(Figure::Fig9, 0.1);
  const MultiPlan r = solveAllDetailed(in);
  EXPECT_EQ(r.order, (std::vector<std::size_t>{0, 1}));
  EXPECT_TRUE(checkPlan(in, r.plan).empty());
}

TEST(SolveAll, DetourAroundParkedWindowRobot) {
  const Instance in = fromLayout(testfix::threeRooms());
  const MultiPlan r = solveAllDetailed(in);
  const auto& fs = r.freeSpace;
  const std::size_t room = *fs.componentOf(in.starts[1]), lowRoom = *fs.componentOf(in.starts[0]),
                    corridor = *fs.componentOf(in.starts[2]);
  auto pos = [&](std::size_t c) { return std::find(r.order.begin(), r.order.end(), c) - r.order.begin(); };
  EXPECT_LT(pos(lowRoom), pos(corridor));
  EXPECT_LT(pos(room), pos(corridor));
  const Move* corridorMove = nullptr;
  for (const auto& m : r.plan.moves)
    if (geom::near(m.from, in.starts[2])) corridorMove = &m;
  ASSERT_NE(corridorMove, nullptr);
  EXPECT_GT(geom::pathLength(corridorMove->path), 8.0 + 1e-6);
  EXPECT_GE(geom::pathClearance(corridorMove->path, in.targets[1]), 2 - 1e-9);
  EXPECT_TRUE(checkPlan(in, r.plan).empty());
}

TEST(SolveAll, SingleComponentDelegates) {
  Instance in;
  in.workspace = {{0, 0}, {20, 0}, {20, 10}, {0, 10}};
  in.starts = {{3, 3}, {3, 8}};
  in.targets = {{17, 3}, {17, 8}};
  const MultiPlan r = solveAllDetailed(in);
  EXPECT_TRUE(r.records.empty());
  EXPECT_TRUE(checkPlan(in, r.plan).empty());
}

TEST(SolveAll, BetaBelowThreeRejected) {
  Instance in = genFigure(Figure::Fig8, 0.1);
  // 2.9 from the window start, inside the upper room.
  in.targets[1] = in.starts[1] + Point{2.9 * std::cos(geom::kPi / 3), 2.9 * std::sin(geom::kPi / 3)};
  try {
    solveAll(in);
    FAIL() << "expected a precondition violation";
  } catch (const PreconditionViolation& e) {
    bool beta = false;
    for (const auto& v : e.violations()) beta |= v.kind == ViolationKind::Beta;
    EXPECT_TRUE(beta);
  }
}

TEST(SolveAll, MalformedWorkspaceRejected) {
  Instance in;
  in.workspace = {{0, 0}, {10, 10}, {10, 0}, {0, 10}};
  EXPECT_THROW(solveAll(in), PreconditionViolation);
}

TEST(SolveAll, RandomMultiComponentVerify) {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    const Instance in = genRandom(seed, 6, 2 + seed % 3, true);
    const MultiPlan r = solveAllDetailed(in);
    EXPECT_GE(r.freeSpace.components.size(), 2u);
    EXPECT_TRUE(checkPlan(in, r.plan).empty()) << in.name;
  }
}
