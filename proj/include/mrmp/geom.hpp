#pragma once

// Planar kernel: points, straight segments, circular arcs, and regions whose
// boundaries are closed chains of both. Everything is double precision with a
// single identification tolerance kEps.

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mrmp::geom {

/// Points closer than this are the same point; also the boundary band width.
inline constexpr double kEps = 1e-9;
inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend Point operator*(Point a, double s) { return {a.x * s, a.y * s}; }
  friend Point operator*(double s, Point a) { return {a.x * s, a.y * s}; }
  friend Point operator/(Point a, double s) { return {a.x / s, a.y / s}; }
  friend bool operator==(Point a, Point b) = default;
};

inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }
inline double dist(Point p, Point q) { return std::hypot(p.x - q.x, p.y - q.y); }
inline double dist2(Point p, Point q) {
  const double dx = p.x - q.x;
  const double dy = p.y - q.y;
  return dx * dx + dy * dy;
}
inline Point perpLeft(Point a) { return {-a.y, a.x}; }
inline Point unit(Point a) {
  const double n = norm(a);
  return n > 0.0 ? a / n : Point{};
}
inline Point polar(Point c, double r, double theta) {
  return {c.x + r * std::cos(theta), c.y + r * std::sin(theta)};
}
inline bool near(Point a, Point b, double tol = kEps) { return dist2(a, b) <= tol * tol; }

/// Angle normalised into [0, 2π).
double normAngle(double a);

struct Box {
  double xmin = 0, ymin = 0, xmax = 0, ymax = 0;

  bool overlaps(const Box& o, double pad = 0.0) const {
    return xmin <= o.xmax + pad && o.xmin <= xmax + pad && ymin <= o.ymax + pad &&
           o.ymin <= ymax + pad;
  }
  void expand(const Box& o);
  void expand(Point p);
  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
};

/// Bounding box of a non-empty point set.
Box boundsOf(std::span<const Point> pts);

enum class Orientation : std::uint8_t { Ccw, Cw };

/// One boundary element: a straight segment a→b, or a circular arc from a to b
/// around `center` starting at `start_angle` and sweeping `sweep` radians
/// (positive sweep is counter-clockwise). Endpoints are stored explicitly so
/// that chains share bit-identical vertices.
struct ArcSeg {
  enum class Kind : std::uint8_t { Segment, Arc };

  Kind kind = Kind::Segment;
  Point a;
  Point b;
  Point center;
  double radius = 0.0;
  double start_angle = 0.0;
  double sweep = 0.0;

  static ArcSeg segment(Point a, Point b);
  static ArcSeg arc(Point center, double radius, double start_angle, double sweep);
  /// Arc on circle(center, radius) from a to b. The sweep is the representative
  /// of the angular difference closest to `approx_sweep`.
  static ArcSeg arcBetween(Point center, double radius, Point a, Point b, double approx_sweep);
  static ArcSeg circle(Point center, double radius);

  bool isArc() const { return kind == Kind::Arc; }
  bool isSegment() const { return kind == Kind::Segment; }
  double endAngle() const { return start_angle + sweep; }
  Orientation orientation() const { return sweep >= 0 ? Orientation::Ccw : Orientation::Cw; }
  bool isFullCircle() const { return isArc() && std::abs(std::abs(sweep) - kTwoPi) < 1e-12; }

  Point at(double u) const;
  /// Unit tangent in the direction of travel.
  Point tangent(double u) const;
  /// Signed curvature: positive when the curve bends to the left.
  double curvature() const;
  double length() const;
  ArcSeg reversed() const;
  /// Piece between parameters u0 < u1 (or u0 > u1 for a reversed piece).
  ArcSeg sub(double u0, double u1) const;
  /// Parameter of the point of this element closest to p.
  double project(Point p) const;
  double distanceTo(Point p) const;
  /// Parameter of p if p is on the carrier within tolerance and inside the extent.
  std::optional<double> paramOf(Point p, double tol = kEps) const;
  Box bbox() const;
  Point mid() const { return at(0.5); }
  /// True when both elements lie on the same line or circle.
  bool sameCarrier(const ArcSeg& o, double tol = 1e-9) const;
};

struct Hit {
  double ua = 0.0;
  double ub = 0.0;
  Point p;
};

/// Transversal intersection points of two elements. Tangential contacts are not
/// reported (open-set semantics); coincident carriers report nothing.
std::vector<Hit> intersect(const ArcSeg& a, const ArcSeg& b);

/// Minimum distance between two elements.
double distance(const ArcSeg& a, const ArcSeg& b);

struct Loop {
  std::vector<ArcSeg> elements;

  double signedArea() const;
  double perimeter() const;
  bool isHole() const { return signedArea() < 0.0; }
  Box bbox() const;
  Loop reversed() const;
  /// Winding contribution of this loop at p (ray towards +x).
  int winding(Point p) const;
  double distanceTo(Point p) const;
};

struct Face {
  Loop outer;
  std::vector<Loop> holes;

  double area() const;
  Box bbox() const { return outer.bbox(); }
};

struct Region {
  std::vector<Face> faces;

  bool empty() const { return faces.empty(); }
  double area() const;
  std::size_t elementCount() const;
  Box bbox() const;
  /// Every element of every loop, in order.
  void forEachElement(const std::function<void(const ArcSeg&)>& fn) const;
};

enum class Where : std::uint8_t { Inside, Boundary, Outside };

Where locate(Point p, const Face& f, double band = kEps);
Where pointInRegion(Point p, const Region& r, double band = kEps);
/// Index of the face containing p (inside or on its boundary), if any.
std::optional<std::size_t> faceOf(Point p, const Region& r, double band = kEps);
/// Face with p in its interior; for points on a boundary, the face holding
/// most of a ring of probes at distance `probe` around p.
std::optional<std::size_t> faceByProbe(Point p, const Region& r, double probe = 1e-6);

// Region constructors (all loops counter-clockwise).
Region disc(Point c, double r);
Region polygonRegion(std::span<const Point> ccw_vertices);
/// Minkowski sum of segment ab with a disc of radius r.
Region capsule(Point a, Point b, double r);

enum class BoolOp : std::uint8_t { Union, Difference, Intersection };

/// General overlay: the result is the closure of the set of points whose
/// membership vector over `operands` satisfies `keep`.
Region overlay(std::span<const Region* const> operands,
               const std::function<bool(std::span<const bool>)>& keep);
Region regionBoolean(const Region& a, const Region& b, BoolOp op);
Region unionAll(std::span<const Region> parts);

std::vector<Region> connectedFaces(const Region& r);

/// A maximal piece of region boundary: a chain of elements and whether it is
/// a whole closed loop.
struct Chain {
  std::vector<ArcSeg> elements;
  bool closed = false;
  Point front() const { return elements.front().a; }
  Point back() const { return elements.back().b; }
  double length() const;
};

/// Maximal connected pieces of ∂r strictly inside the open disc D_rad(c).
std::vector<Chain> boundaryComponentsInDisc(const Region& r, Point c, double rad);

/// Minimum distance from p to any point of the path.
double pathClearance(std::span<const ArcSeg> path, Point p);
double pathLength(std::span<const ArcSeg> path);

// ---------------------------------------------------------------------------
// Loop coordinates: a position on a loop given by element index and parameter,
// plus arc-length helpers used when walking along boundaries.

struct LoopPos {
  std::size_t elem = 0;
  double u = 0.0;
};

class LoopMetric {
 public:
  explicit LoopMetric(const Loop& loop);

  double perimeter() const { return cumulative_.back(); }
  double coord(LoopPos pos) const;
  LoopPos posAt(double s) const;
  Point pointAt(double s) const;
  /// Projection of p onto the loop (closest element).
  LoopPos project(Point p) const;
  /// Chain from coordinate s0 to s1 walking forward (increasing s, wrapping).
  std::vector<ArcSeg> forward(double s0, double s1) const;
  /// Chain from s0 to s1 using the shorter direction around the loop.
  std::vector<ArcSeg> shortest(double s0, double s1) const;
  const Loop& loop() const { return *loop_; }

 private:
  const Loop* loop_;
  std::vector<double> cumulative_;
};

/// Pieces of a loop inside the open disc D_r(c), as forward coordinate
/// intervals [s0, s1] (s1 may wrap past the perimeter). A loop entirely inside
/// the disc yields a single interval of full length.
struct LoopInterval {
  double s0 = 0.0;
  double s1 = 0.0;
  bool whole = false;
};
std::vector<LoopInterval> loopIntervalsInDisc(const Loop& loop, Point c, double r);

// ---------------------------------------------------------------------------
// Rays and routing inside regions.

struct RayHit {
  double t = 0.0;
  std::size_t face = 0;
  std::size_t loop = 0;  ///< 0 = outer, k>0 = holes[k-1]
  LoopPos pos;
  Point p;
};

/// All hits of the ray origin + t·dir (t > tmin) with the boundary of face f,
/// sorted by t. `dir` must be a unit vector.
std::vector<RayHit> rayHits(const Face& f, Point origin, Point dir, double tmin = kEps);

const Loop& loopOf(const Face& f, std::size_t loop_index);

/// True when the straight segment pq stays inside the closed face.
bool segmentInFace(Point p, Point q, const Face& f);

/// A continuous path inside the closed face from `from` to `to`: the straight
/// segment when possible, otherwise vertical rays onto the boundary and walks
/// along boundary loops. Returns nullopt when the points are in different
/// faces (or outside the region).
std::optional<std::vector<ArcSeg>> routeInRegion(const Region& r, Point from, Point to);
std::optional<std::vector<ArcSeg>> routeInFace(const Face& f, Point from, Point to);

/// Drops zero-length pieces and merges consecutive pieces on the same carrier.
std::vector<ArcSeg> simplifyPath(std::vector<ArcSeg> path);

}  // namespace mrmp::geom
