#include <gtest/gtest.h>

#include <cstdlib>

#include "mrmp/verifier.hpp"

using namespace mrmp;
using geom::ArcSeg;

namespace {

const std::vector<Point> kRect{{0, 0}, {20, 0}, {20, 10}, {0, 10}};

// Two 8x8 rooms joined by a neck of the given width.
std::vector<Point> twoRooms(double neck) {
  const double lo = 4 - neck / 2, hi = 4 + neck / 2;
  return {{0, 0}, {8, 0}, {8, lo}, {10, lo}, {10, 0}, {18, 0}, {18, 8}, {10, 8}, {10, hi}, {8, hi}, {8, 8}, {0, 8}};
}

bool has(const std::vector<Violation>& v, ViolationKind k) {
  for (const auto& x : v)
    if (x.kind == k) return true;
  return false;
}

Move straight(Point a, Point b) { return {a, b, {ArcSeg::segment(a, b)}}; }

}  // namespace

TEST(CheckInstance, ValidRectangle) {
  EXPECT_TRUE(checkInstance({kRect, {{3, 3}, {10, 3}}, {{3, 7}, {10, 7}}, "", {}}).empty());
}

TEST(CheckInstance, MuViolationReportsDistance) {
  const auto v = checkInstance({kRect, {{3, 3}, {6.9, 3}}, {{3, 7}, {10, 7}}, "", {}});
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].kind, ViolationKind::Mu);
  EXPECT_NEAR(v[0].value, 3.9, 1e-12);
  EXPECT_EQ(v[0].indices, (std::vector<std::size_t>{0, 1}));
}

TEST(CheckInstance, BetaOnlyWithSeveralComponents) {
  // Same start-target distance 2.5: fine in one component, a violation once
  // the neck is too narrow and the free space splits.
  const Instance one{twoRooms(4), {{3, 4}, {13, 4}}, {{5.5, 4}, {15.5, 4}}, "", {}};
  EXPECT_TRUE(checkInstance(one).empty());
  const Instance two{twoRooms(1.5), {{3, 4}, {13, 4}}, {{5.5, 4}, {15.5, 4}}, "", {}};
  const auto v = checkInstance(two);
  ASSERT_FALSE(v.empty());
  EXPECT_TRUE(has(v, ViolationKind::Beta));
  EXPECT_FALSE(has(v, ViolationKind::Charge));
}

TEST(CheckInstance, ChargePerComponent) {
  const Instance bad{twoRooms(1.5), {{2, 2}, {6, 6}}, {{12, 2}, {2, 6}}, "", {}};
  const auto v = checkInstance(bad);
  EXPECT_TRUE(has(v, ViolationKind::Charge));
}

TEST(CheckInstance, OutsideAndMalformed) {
  EXPECT_TRUE(has(checkInstance({kRect, {{0.5, 5}}, {{10, 5}}, "", {}}), ViolationKind::OutsideFreeSpace));
  EXPECT_TRUE(has(checkInstance({kRect, {{30, 5}}, {{10, 5}}, "", {}}), ViolationKind::OutsideFreeSpace));
  const std::vector<Point> bowtie{{0, 0}, {10, 10}, {10, 0}, {0, 10}};
  EXPECT_TRUE(has(checkInstance({bowtie, {}, {}, "", {}}), ViolationKind::MalformedWorkspace));
}

TEST(CheckPlan, AcceptsValidPlan) {
  const Instance inst{kRect, {{3, 3}, {10, 3}}, {{3, 7}, {17, 7}}, "", {}};
  MotionPlan plan{{straight({10, 3}, {17, 7}), straight({3, 3}, {3, 7})}};
  EXPECT_TRUE(checkPlan(inst, plan).empty());
}

TEST(CheckPlan, DetectsEachViolation) {
  const Instance inst{kRect, {{3, 3}, {10, 3}}, {{3, 7}, {17, 7}}, "", {}};
  // Passing within distance 1 of the parked robot at (10,3).
  EXPECT_TRUE(has(checkPlan(inst, {{straight({3, 3}, {17, 3}), straight({10, 3}, {3, 7})}}),
                  ViolationKind::PathRobotCollision));
  // Hugging the wall at y = 0.5.
  MotionPlan wall{{{{3, 3}, {3, 7}, {ArcSeg::segment({3, 3}, {5, 0.5}), ArcSeg::segment({5, 0.5}, {3, 7})}},
                   straight({10, 3}, {17, 7})}};
  EXPECT_TRUE(has(checkPlan(inst, wall), ViolationKind::PathObstacleCollision));
  MotionPlan jump{{{{3, 3}, {3, 7}, {ArcSeg::segment({3, 3}, {3, 5}), ArcSeg::segment({3, 5.5}, {3, 7})}},
                   straight({10, 3}, {17, 7})}};
  EXPECT_TRUE(has(checkPlan(inst, jump), ViolationKind::Discontinuity));
  EXPECT_TRUE(has(checkPlan(inst, {{straight({3, 3}, {3, 7})}}), ViolationKind::WrongFinalSet));
  EXPECT_TRUE(has(checkPlan(inst, {{straight({5, 5}, {3, 7})}}), ViolationKind::WrongStartSet));
}

TEST(CheckPlan, SlackFromEnvironment) {
  // Clearance to the wall is exactly 1 - 1e-5.
  const Instance inst{kRect, {{5, 5}}, {{10, 5}}, "", {}};
  MotionPlan plan{{{{5, 5}, {10, 5}, {ArcSeg::segment({5, 5}, {7, 1 - 1e-5}), ArcSeg::segment({7, 1 - 1e-5}, {10, 5})}}}};
  ::unsetenv("MRMP_EPS");
  EXPECT_DOUBLE_EQ(verificationSlack(), 1e-6);
  EXPECT_TRUE(has(checkPlan(inst, plan), ViolationKind::PathObstacleCollision));
  ::setenv("MRMP_EPS", "1e-4", 1);
  EXPECT_DOUBLE_EQ(verificationSlack(), 1e-4);
  EXPECT_TRUE(checkPlan(inst, plan).empty());
  ::setenv("MRMP_EPS", "junk", 1);
  EXPECT_DOUBLE_EQ(verificationSlack(), 1e-6);
  ::unsetenv("MRMP_EPS");
}

TEST(Oracle, SingleRobot) {
  EXPECT_EQ(bruteForceOracle({twoRooms(4), {{3, 4}}, {{15, 4}}, "", {}}), OracleResult::Solvable);
  EXPECT_EQ(bruteForceOracle({twoRooms(1.2), {{3, 4}}, {{15, 4}}, "", {}}), OracleResult::Unsolvable);
}

TEST(Oracle, TwoRobotsAndLimits) {
  const std::vector<Point> W{{0, 0}, {12, 0}, {12, 8}, {0, 8}};
  EXPECT_EQ(bruteForceOracle({W, {{2, 2}, {6, 2}}, {{10, 6}, {6, 6}}, "", {}}), OracleResult::Solvable);
  // A 2-wide corridor: robots cannot pass each other, but unlabeled targets
  // in order are reachable.
  const std::vector<Point> corridor{{0, 0}, {18, 0}, {18, 2}, {0, 2}};
  EXPECT_EQ(bruteForceOracle({corridor, {{1.5, 1}, {6, 1}}, {{12, 1}, {16.5, 1}}, "", {}}), OracleResult::Solvable);
  // Too many robots or too large a box: no answer.
  EXPECT_EQ(bruteForceOracle({W, {{2, 2}, {6, 2}, {10, 2}}, {{2, 6}, {6, 6}, {10, 6}}, "", {}}), OracleResult::Unknown);
  EXPECT_EQ(bruteForceOracle({kRect, {{3, 3}}, {{3, 3}}, "", {}}), OracleResult::Solvable);
  const std::vector<Point> big{{0, 0}, {30, 0}, {30, 8}, {0, 8}};
  EXPECT_EQ(bruteForceOracle({big, {{3, 3}}, {{20, 3}}, "", {}}), OracleResult::Unknown);
}
