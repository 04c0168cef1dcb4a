#pragma once

// Several free-space components: which positions of one component can block
// another, the order in which components are solved, and detours of paths
// around robots parked in other components.

#include <span>
#include <stdexcept>
#include <vector>

#include "mrmp/freespace.hpp"
#include "mrmp/instance.hpp"
#include "mrmp/plan.hpp"

namespace mrmp {

class CycleDetected : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DetourImpossible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct InterferenceRecord {
  Point source;
  bool isStart = false;
  std::size_t index = 0;  // into starts or targets
  std::size_t sourceComponent = 0, targetComponent = 0;
  bool isRemoteBlocker = false;  // aura meets the other component's boundary in ≥ 2 chains
};

/// Every position whose open aura meets another component.
std::vector<InterferenceRecord> interferenceSets(const FreeSpace& fs, std::span<const Point> S,
                                                 std::span<const Point> T);

struct InterferenceForest {
  std::size_t nodeCount = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // (solve first, solve later)
};

InterferenceForest interferenceForest(std::span<const InterferenceRecord> records, std::size_t componentCount);

/// Topological order, lowest index first among ready components.
std::vector<std::size_t> buildOrder(const InterferenceForest& forest);

/// Replaces the parts of the path inside the aura of a parked position by an
/// arc of the aura boundary inside `Fcur`, falling back to a fresh route that
/// keeps distance 2 from the parked and `avoid` positions.
Move detourAroundAuras(const Move& move, std::span<const Point> parked, const Region& Fcur,
                       std::span<const Point> avoid = {});

struct MultiPlan {
  MotionPlan plan;
  std::vector<std::size_t> order;  // component indices in solving order
  std::vector<InterferenceRecord> records;
  FreeSpace freeSpace;
};

/// Plans the whole instance. Throws PreconditionViolation.
MultiPlan solveAllDetailed(const Instance& inst);
MotionPlan solveAll(const Instance& inst);

}  // namespace mrmp
