#pragma once

// Single-component planner: divide and conquer over the residual tree,
// filling sink components first, plus the settlement of start-target pairs
// closer than 2.

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "mrmp/motiongraph.hpp"
#include "mrmp/plan.hpp"
#include "mrmp/verifier.hpp"

namespace mrmp {

class PreconditionViolation : public std::runtime_error {
 public:
  explicit PreconditionViolation(std::vector<Violation> v);
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

/// The planner got stuck; indicates a construction gap, never bad input.
class PlanningFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// μ within S and within T, equal counts, every position in Fi.
std::vector<Violation> validateSingleComponent(const Region& Fi, std::span<const Point> S,
                                               std::span<const Point> T);

struct ClosePairs {
  std::vector<std::optional<std::size_t>> targetOf;  // per start
  std::vector<std::size_t> keptTargets;              // targets not paired
};

/// Pairs every start with the target inside its aura, if any.
ClosePairs mergeClosePairs(std::span<const Point> S, std::span<const Point> T);

/// Residual tree with a charge per node; the planner works on node subsets.
struct ChargedTree {
  std::vector<std::size_t> nodes;                          // residual node ids
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // (u, v) over residual ids
  std::vector<int> charge;                                 // indexed by residual id
};

/// Removes every edge whose removal leaves two zero-charge parts.
std::vector<ChargedTree> cutZeroChargeEdges(const ChargedTree& t);

/// Node whose incident edges all point inward when each edge is oriented
/// from its positive side to its negative side; lowest id wins.
std::size_t findSink(const ChargedTree& t);

/// Occupancy of motion-graph nodes during planning.
struct Occupancy {
  std::vector<char> occupied;
  bool free(std::size_t n) const { return !occupied[n]; }
};

/// Shifts robots along a graph path so `from` becomes free and `to` occupied.
/// Robots move farthest first; consecutive edges through free nodes merge into
/// one move. `allow` restricts the edges (all kinds); an edge is also usable
/// only while its blockers are free. Throws NoPath when no usable path exists.
std::vector<Move> chainMove(const MotionGraph& g, Occupancy& occ, std::size_t from, std::size_t to,
                            const BlockerPredicate& allow);

/// Path of graph edges (as node sequence) concatenated into one move path.
std::vector<ArcSeg> concatEdgePaths(const MotionGraph& g, std::span<const std::size_t> nodes);

/// Plan for one free-space component. Throws PreconditionViolation.
MotionPlan solveComponent(const Region& Fi, std::span<const Point> S, std::span<const Point> T);

}  // namespace mrmp
