#pragma once

// Free space of a unit disc in a simple polygon, and the decomposition of one
// free-space component into remote components, blocking areas and residual
// components.

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "mrmp/geom.hpp"

namespace mrmp {

using geom::ArcSeg;
using geom::Point;
using geom::Region;

inline constexpr double kRobotRadius = 1.0;
inline constexpr double kAuraRadius = 2.0;

class MalformedPolygon : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EmptyFreeSpace : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotATree : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Empty string when the polygon is simple, otherwise a description.
std::string polygonDefect(std::span<const Point> polygon);

struct FreeSpace {
  Region region;
  std::vector<Region> components;  // one face each, no holes

  /// Component containing p (inside or within the boundary band).
  std::optional<std::size_t> componentOf(Point p, double band = geom::kEps) const;
};

/// Points of the polygon at distance ≥ 1 from its complement. Accepts either
/// orientation.
FreeSpace computeFreeSpace(std::span<const Point> workspace);

Region auraUnion(std::span<const Point> positions);

enum class BoundaryKind { Free, OwnerAura, StartAura };

/// Maximal run of a remote component's boundary lying on ∂F, from x to y.
struct FreeChain {
  std::vector<ArcSeg> elements;
  Point x, y;
  BoundaryKind beforeX = BoundaryKind::Free;
  BoundaryKind afterY = BoundaryKind::Free;
  std::size_t startBeforeX = 0;  // start index when beforeX is StartAura
  std::size_t startAfterY = 0;
};

struct RemoteComponent {
  Region region;
  std::size_t owner = 0;  // target index
  bool blocking = false;
  std::vector<FreeChain> freeBoundary;
};

/// Classifies an element of a remote component's boundary of owner t.
BoundaryKind classifyElement(const ArcSeg& e, Point owner, std::span<const Point> starts,
                             std::size_t* startIndex = nullptr);

/// Faces of (D2(t) ∩ Fi) \ A(starts) not containing t.
std::vector<RemoteComponent> remoteComponents(std::size_t owner, std::span<const Point> targets,
                                              std::span<const Point> starts, const Region& Fi);

/// Sets `blocking` (Fi minus the piece falls apart) and fills free chains.
void classifyBlockingAreas(std::vector<RemoteComponent>& remotes, const Region& Fi,
                           std::span<const Point> targets, std::span<const Point> starts);

struct Residual {
  Region fbar;                       // faces = residual components
  Region fstar;                      // fbar minus start auras
  std::vector<std::size_t> fstarParent;  // fbar face of each fstar face
};

Residual residualDecomposition(const Region& Fi, std::span<const RemoteComponent> remotes,
                               std::span<const Point> starts);

/// Residual component containing p; positions on a residual boundary go to
/// the face containing a small inward probe.
std::optional<std::size_t> residualOf(const Residual& r, Point p);

struct ResidualEdge {
  std::size_t u = 0, v = 0;
  std::size_t area = 0;     // index into the remote component list
  std::size_t blocker = 0;  // target index
};

struct ResidualGraph {
  std::size_t nodeCount = 0;
  std::vector<ResidualEdge> edges;
  std::vector<std::size_t> startNode, targetNode;
  std::vector<std::vector<std::size_t>> startsIn, targetsIn;
  std::vector<int> charge;
  /// Residual components sharing boundary with each remote component.
  std::vector<std::vector<std::size_t>> adjacent;

  bool isTree() const;
};

/// Throws NotATree when the construction does not yield a tree.
ResidualGraph buildResidualGraph(const Residual& res, std::span<const RemoteComponent> remotes,
                                 std::span<const Point> starts, std::span<const Point> targets);

/// Everything computed for one free-space component.
struct ComponentAnalysis {
  Region Fi;
  std::vector<Point> starts, targets;
  std::vector<RemoteComponent> remotes;
  Residual residual;
  ResidualGraph H;
};

ComponentAnalysis analyzeComponent(const Region& Fi, std::span<const Point> starts,
                                   std::span<const Point> targets);

}  // namespace mrmp
