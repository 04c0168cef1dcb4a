#pragma once

// Motion graph on the start and target positions of one free-space component:
// guaranteed edges between positions that are consecutive along residual
// boundaries, blockable edges across blocking areas, each with a realized path.

#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "mrmp/freespace.hpp"

namespace mrmp {

class NoPath : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class NodeKind { Start, Target, Merged };

struct MotionNode {
  Point position;
  NodeKind kind = NodeKind::Start;
  std::size_t index = 0;  // into the component's starts or targets
  std::optional<Point> pairedTarget;  // merged nodes only
};

enum class EdgeKind { Guaranteed, Blockable };

struct MotionEdge {
  std::size_t u = 0, v = 0;
  EdgeKind kind = EdgeKind::Guaranteed;
  std::vector<std::size_t> blockers;  // node ids of blocker targets
  std::vector<ArcSeg> path;           // from u to v

  std::size_t other(std::size_t w) const { return w == u ? v : u; }
};

struct LambdaEntry {
  Point rep;
  std::size_t node = 0;
  double coord = 0.0;  // arc length along the outer loop
};

struct LambdaList {
  std::size_t face = 0;  // face of the F* region
  std::vector<LambdaEntry> entries;
};

struct MotionGraph {
  std::vector<MotionNode> nodes;
  std::vector<MotionEdge> edges;
  std::vector<LambdaList> lambdas;
  std::vector<std::vector<std::size_t>> incident;  // edge ids per node
  std::size_t droppedEdges = 0;  // candidate edges whose endpoints could not be joined

  std::size_t startNode(std::size_t i) const { return i; }
  std::size_t targetNode(std::size_t i) const { return startCount + i; }
  std::size_t startCount = 0;

  bool connected() const;
};

using BlockerPredicate = std::function<bool(const MotionEdge&)>;

/// Node ids are starts first, then targets, in component order. `merged`
/// gives the paired target of each start, if any.
MotionGraph buildMotionGraph(const ComponentAnalysis& ca,
                             std::span<const std::optional<Point>> merged = {});

/// Λ list of one F* face plus direct edges (pairs of node ids) found while
/// building it.
struct LambdaBuild {
  LambdaList list;
  std::vector<std::pair<std::size_t, std::size_t>> direct;
  /// Start whose every connector into the face crosses target auras: joined
  /// to its Λ neighbours, usable while those targets are free.
  struct Bridge {
    std::size_t start;
    double coord;
    std::vector<std::size_t> blockers;
  };
  std::vector<Bridge> bridges;
};
LambdaBuild buildLambda(const ComponentAnalysis& ca, std::size_t fstarFace);

/// Pairs of consecutive distinct nodes in a circular Λ list.
std::vector<std::pair<std::size_t, std::size_t>> guaranteedPairs(const LambdaList& lambda);

/// Path in the component from position a to b that stays at distance ≥ 2
/// from every position in `avoid`.
std::optional<std::vector<ArcSeg>> clearPath(const Region& Fi, Point a, Point b,
                                             std::span<const Point> avoid);

/// Edge ids of a breadth-first path; blockable edges only when `allow` accepts
/// them. Throws NoPath.
std::vector<std::size_t> graphPath(const MotionGraph& g, std::size_t from, std::size_t to,
                                   const BlockerPredicate& allow);

}  // namespace mrmp
