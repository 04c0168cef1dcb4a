#pragma once

// Independent checks of instances and plans. Plan checking simulates the moves
// against the polygon and the parked robots using only kernel primitives.

#include <string>
#include <vector>

#include "mrmp/instance.hpp"
#include "mrmp/plan.hpp"

namespace mrmp {

enum class ViolationKind {
  Mu,
  Beta,
  Charge,
  OutsideFreeSpace,
  PathObstacleCollision,
  PathRobotCollision,
  Discontinuity,
  WrongFinalSet,
  WrongStartSet,
  MalformedWorkspace,
  InterferenceCycle,
};

const char* violationName(ViolationKind k);

struct Violation {
  ViolationKind kind;
  std::string message;
  std::vector<std::size_t> indices;  // positions, moves or components involved
  std::vector<Point> points;
  double value = 0.0;  // distance or charge
};

/// Verification slack; MRMP_EPS overrides the default 1e-6.
double verificationSlack();

/// Separation thresholds used by checkInstance. β = 3 applies only when the
/// free space has more than one component.
struct Separation {
  double mu = 4.0;
  double betaMulti = 3.0;
};

std::vector<Violation> checkInstance(const Instance& inst, Separation sep = {});
std::vector<Violation> checkPlan(const Instance& inst, const MotionPlan& plan);

enum class OracleResult { Solvable, Unsolvable, Unknown };
const char* oracleName(OracleResult r);

/// Grid search over sequential moves for m ≤ 2. "Solvable" is backed by an
/// explicit plan at the true clearances, "unsolvable" by failure with relaxed
/// clearances; anything else, or an exhausted state budget, is "unknown".
OracleResult bruteForceOracle(const Instance& inst, double gridStep = 0.25);

}  // namespace mrmp
