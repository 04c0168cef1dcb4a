#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "mrmp/geom.hpp"

namespace mrmp::geom {

double normAngle(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r -= kTwoPi;
  return r;
}

void Box::expand(const Box& o) {
  xmin = std::min(xmin, o.xmin);
  ymin = std::min(ymin, o.ymin);
  xmax = std::max(xmax, o.xmax);
  ymax = std::max(ymax, o.ymax);
}

void Box::expand(Point p) {
  xmin = std::min(xmin, p.x);
  ymin = std::min(ymin, p.y);
  xmax = std::max(xmax, p.x);
  ymax = std::max(ymax, p.y);
}

Box boundsOf(std::span<const Point> pts) {
  Box b{pts[0].x, pts[0].y, pts[0].x, pts[0].y};
  for (const Point& p : pts) b.expand(p);
  return b;
}

namespace {

double clamp01(double u) { return std::clamp(u, 0.0, 1.0); }

// Angular offset of direction theta from the arc start, measured along the
// sweep direction, in [0, 2π).
double sweepOffset(const ArcSeg& s, double theta) {
  return s.sweep >= 0 ? normAngle(theta - s.start_angle) : normAngle(s.start_angle - theta);
}

// Parameter of angle theta on the arc, or nullopt when outside the extent.
// `tol` is a distance tolerance converted to an angle via the radius.
std::optional<double> arcParamOfAngle(const ArcSeg& s, double theta, double tol) {
  const double span = std::abs(s.sweep);
  const double off = sweepOffset(s, theta);
  const double atol = tol / s.radius;
  if (off <= span) return off / span;
  if (off - span <= atol) return 1.0;
  if (kTwoPi - off <= atol) return 0.0;
  return std::nullopt;
}

double pointSegmentDistance(Point p, Point a, Point b) {
  const Point d = b - a;
  const double len2 = dot(d, d);
  if (len2 == 0.0) return dist(p, a);
  const double u = clamp01(dot(p - a, d) / len2);
  return dist(p, a + d * u);
}

}  // namespace

ArcSeg ArcSeg::segment(Point a, Point b) {
  ArcSeg s;
  s.kind = Kind::Segment;
  s.a = a;
  s.b = b;
  return s;
}

ArcSeg ArcSeg::arc(Point center, double radius, double start_angle, double sweep) {
  ArcSeg s;
  s.kind = Kind::Arc;
  s.center = center;
  s.radius = radius;
  s.start_angle = start_angle;
  s.sweep = sweep;
  s.a = polar(center, radius, start_angle);
  s.b = std::abs(std::abs(sweep) - kTwoPi) < 1e-12 ? s.a : polar(center, radius, start_angle + sweep);
  return s;
}

ArcSeg ArcSeg::arcBetween(Point center, double radius, Point a, Point b, double approx_sweep) {
  ArcSeg s;
  s.kind = Kind::Arc;
  s.center = center;
  s.radius = radius;
  s.start_angle = std::atan2(a.y - center.y, a.x - center.x);
  const double end = std::atan2(b.y - center.y, b.x - center.x);
  double diff = end - s.start_angle;
  // Representative of diff (mod 2π) closest to the requested sweep.
  diff += kTwoPi * std::round((approx_sweep - diff) / kTwoPi);
  s.sweep = diff;
  s.a = a;
  s.b = b;
  return s;
}

ArcSeg ArcSeg::circle(Point center, double radius) { return arc(center, radius, 0.0, kTwoPi); }

Point ArcSeg::at(double u) const {
  if (u <= 0.0) return a;
  if (u >= 1.0) return b;
  if (kind == Kind::Segment) return a + (b - a) * u;
  return polar(center, radius, start_angle + u * sweep);
}

Point ArcSeg::tangent(double u) const {
  if (kind == Kind::Segment) return unit(b - a);
  const double th = start_angle + clamp01(u) * sweep;
  const double sgn = sweep >= 0 ? 1.0 : -1.0;
  return Point{-std::sin(th), std::cos(th)} * sgn;
}

double ArcSeg::curvature() const {
  if (kind == Kind::Segment) return 0.0;
  return (sweep >= 0 ? 1.0 : -1.0) / radius;
}

double ArcSeg::length() const {
  if (kind == Kind::Segment) return dist(a, b);
  return radius * std::abs(sweep);
}

ArcSeg ArcSeg::reversed() const {
  ArcSeg r = *this;
  std::swap(r.a, r.b);
  if (kind == Kind::Arc) {
    r.start_angle = start_angle + sweep;
    r.sweep = -sweep;
  }
  return r;
}

ArcSeg ArcSeg::sub(double u0, double u1) const {
  const Point p0 = at(u0);
  const Point p1 = at(u1);
  if (kind == Kind::Segment) return segment(p0, p1);
  ArcSeg r = *this;
  r.start_angle = start_angle + std::clamp(u0, 0.0, 1.0) * sweep;
  r.sweep = (std::clamp(u1, 0.0, 1.0) - std::clamp(u0, 0.0, 1.0)) * sweep;
  r.a = p0;
  r.b = p1;
  return r;
}

double ArcSeg::project(Point p) const {
  if (kind == Kind::Segment) {
    const Point d = b - a;
    const double len2 = dot(d, d);
    if (len2 == 0.0) return 0.0;
    return clamp01(dot(p - a, d) / len2);
  }
  if (near(p, center, 1e-15)) return 0.0;
  const double theta = std::atan2(p.y - center.y, p.x - center.x);
  const double span = std::abs(sweep);
  const double off = sweepOffset(*this, theta);
  if (off <= span) return off / span;
  // Outside the angular extent: the nearer endpoint wins.
  return dist2(p, a) <= dist2(p, b) ? 0.0 : 1.0;
}

double ArcSeg::distanceTo(Point p) const {
  if (kind == Kind::Segment) return pointSegmentDistance(p, a, b);
  const double theta = std::atan2(p.y - center.y, p.x - center.x);
  if (sweepOffset(*this, theta) <= std::abs(sweep)) return std::abs(dist(p, center) - radius);
  return std::min(dist(p, a), dist(p, b));
}

std::optional<double> ArcSeg::paramOf(Point p, double tol) const {
  if (distanceTo(p) > tol) return std::nullopt;
  return project(p);
}

Box ArcSeg::bbox() const {
  Box bx{std::min(a.x, b.x), std::min(a.y, b.y), std::max(a.x, b.x), std::max(a.y, b.y)};
  if (kind == Kind::Arc) {
    for (int k = 0; k < 4; ++k) {
      const double th = k * kPi / 2.0;
      if (sweepOffset(*this, th) <= std::abs(sweep)) bx.expand(polar(center, radius, th));
    }
  }
  return bx;
}

bool ArcSeg::sameCarrier(const ArcSeg& o, double tol) const {
  if (kind != o.kind) return false;
  if (kind == Kind::Arc) return near(center, o.center, tol) && std::abs(radius - o.radius) <= tol;
  const Point d = b - a;
  const double len = norm(d);
  if (len == 0.0) return false;
  return std::abs(cross(d, o.a - a)) / len <= tol && std::abs(cross(d, o.b - a)) / len <= tol;
}

namespace {

std::vector<Hit> segSeg(const ArcSeg& s, const ArcSeg& t) {
  std::vector<Hit> out;
  const Point r = s.b - s.a;
  const Point q = t.b - t.a;
  const double lr = norm(r);
  const double lq = norm(q);
  if (lr == 0.0 || lq == 0.0) return out;
  const double den = cross(r, q);
  if (std::abs(den) <= 1e-14 * lr * lq) return out;  // parallel
  const Point w = t.a - s.a;
  const double u = cross(w, q) / den;
  const double v = cross(w, r) / den;
  const double tu = kEps / lr;
  const double tv = kEps / lq;
  if (u < -tu || u > 1.0 + tu || v < -tv || v > 1.0 + tv) return out;
  const double uc = clamp01(u);
  out.push_back({uc, clamp01(v), s.a + r * uc});
  return out;
}

std::vector<Hit> segArc(const ArcSeg& s, const ArcSeg& c) {
  std::vector<Hit> out;
  const Point d = s.b - s.a;
  const double len = norm(d);
  if (len == 0.0) return out;
  const Point e = d / len;
  const Point w = s.a - c.center;
  const double proj = dot(w, e);
  const double h = std::abs(cross(e, w));
  if (h >= c.radius - kEps) return out;  // miss or tangent
  const double root = std::sqrt(c.radius * c.radius - h * h);
  for (double tau : {-proj - root, -proj + root}) {
    const double u = tau / len;
    const double tol = kEps / len;
    if (u < -tol || u > 1.0 + tol) continue;
    const Point p = s.a + e * tau;
    const double theta = std::atan2(p.y - c.center.y, p.x - c.center.x);
    auto v = arcParamOfAngle(c, theta, kEps);
    if (!v) continue;
    out.push_back({clamp01(u), *v, p});
  }
  return out;
}

std::vector<Hit> arcArc(const ArcSeg& s, const ArcSeg& t) {
  std::vector<Hit> out;
  const double d = dist(s.center, t.center);
  const double r1 = s.radius;
  const double r2 = t.radius;
  if (d <= kEps) return out;  // concentric: coincident or disjoint
  if (d >= r1 + r2 - kEps) return out;
  if (d <= std::abs(r1 - r2) + kEps) return out;
  const double along = (r1 * r1 - r2 * r2 + d * d) / (2.0 * d);
  const double h = std::sqrt(std::max(0.0, r1 * r1 - along * along));
  const Point ex = (t.center - s.center) / d;
  const Point base = s.center + ex * along;
  const Point off = perpLeft(ex) * h;
  for (Point p : {base + off, base - off}) {
    auto u = arcParamOfAngle(s, std::atan2(p.y - s.center.y, p.x - s.center.x), kEps);
    if (!u) continue;
    auto v = arcParamOfAngle(t, std::atan2(p.y - t.center.y, p.x - t.center.x), kEps);
    if (!v) continue;
    out.push_back({*u, *v, p});
  }
  return out;
}

}  // namespace

std::vector<Hit> intersect(const ArcSeg& a, const ArcSeg& b) {
  if (a.isSegment() && b.isSegment()) return segSeg(a, b);
  if (a.isSegment() && b.isArc()) return segArc(a, b);
  if (a.isArc() && b.isSegment()) {
    auto hits = segArc(b, a);
    for (auto& h : hits) std::swap(h.ua, h.ub);
    return hits;
  }
  return arcArc(a, b);
}

double distance(const ArcSeg& a, const ArcSeg& b) {
  if (!intersect(a, b).empty()) return 0.0;
  double best = std::min({b.distanceTo(a.a), b.distanceTo(a.b), a.distanceTo(b.a), a.distanceTo(b.b)});
  auto onArc = [](const ArcSeg& arc, Point p) {
    return sweepOffset(arc, std::atan2(p.y - arc.center.y, p.x - arc.center.x)) <= std::abs(arc.sweep);
  };
  if (a.isSegment() && b.isSegment()) return best;
  if (a.isArc() && b.isArc()) {
    const double d = dist(a.center, b.center);
    if (d <= 1e-15) {
      // Concentric: radial gap if the angular extents overlap.
      const double ta = std::atan2(b.a.y - a.center.y, b.a.x - a.center.x);
      const double tb = std::atan2(a.a.y - b.center.y, a.a.x - b.center.x);
      if (onArc(a, b.a) || onArc(b, a.a) || arcParamOfAngle(a, ta, 0.0) || arcParamOfAngle(b, tb, 0.0))
        best = std::min(best, std::abs(a.radius - b.radius));
      return best;
    }
    const Point ex = (b.center - a.center) / d;
    for (double sgn : {1.0, -1.0}) {
      const Point pa = a.center + ex * (sgn * a.radius);
      if (onArc(a, pa)) best = std::min(best, b.distanceTo(pa));
      const Point pb = b.center + ex * (sgn * b.radius);
      if (onArc(b, pb)) best = std::min(best, a.distanceTo(pb));
    }
    return best;
  }
  const ArcSeg& seg = a.isSegment() ? a : b;
  const ArcSeg& arc = a.isSegment() ? b : a;
  const Point n = perpLeft(unit(seg.b - seg.a));
  for (double sgn : {1.0, -1.0}) {
    const Point p = arc.center + n * (sgn * arc.radius);
    if (onArc(arc, p)) best = std::min(best, seg.distanceTo(p));
  }
  return best;
}

// ---------------------------------------------------------------------------

double Loop::signedArea() const {
  double area = 0.0;
  for (const auto& e : elements) {
    area += 0.5 * cross(e.a, e.b);
    if (e.isArc()) area += 0.5 * e.radius * e.radius * (e.sweep - std::sin(e.sweep));
  }
  return area;
}

double Loop::perimeter() const {
  double p = 0.0;
  for (const auto& e : elements) p += e.length();
  return p;
}

Box Loop::bbox() const {
  Box bx = elements.front().bbox();
  for (const auto& e : elements) bx.expand(e.bbox());
  return bx;
}

Loop Loop::reversed() const {
  Loop r;
  r.elements.reserve(elements.size());
  for (auto it = elements.rbegin(); it != elements.rend(); ++it) r.elements.push_back(it->reversed());
  return r;
}

namespace {

// Winding contribution of a y-monotone piece from p0 to p1 (ray towards +x).
// xAt computes the x coordinate of the piece at height y.
template <typename XAt>
int monotoneCrossing(Point p, Point p0, Point p1, XAt xAt) {
  if (p0.y <= p.y && p.y < p1.y) {
    if (xAt(p.y) > p.x) return 1;
  } else if (p1.y <= p.y && p.y < p0.y) {
    if (xAt(p.y) > p.x) return -1;
  }
  return 0;
}

int elementWinding(const ArcSeg& e, Point p) {
  if (e.isArc() && (p.y < e.center.y - e.radius || p.y > e.center.y + e.radius ||
                    p.x >= e.center.x + e.radius))
    return 0;
  if (e.isSegment()) {
    return monotoneCrossing(p, e.a, e.b, [&](double y) {
      return e.a.x + (e.b.x - e.a.x) * (y - e.a.y) / (e.b.y - e.a.y);
    });
  }
  // Split the arc at the top/bottom of its circle into y-monotone pieces.
  std::array<double, 4> cuts{0.0};
  std::size_t nc = 1;
  const double span = std::abs(e.sweep);
  for (double th : {kPi / 2.0, 3.0 * kPi / 2.0}) {
    const double off = sweepOffset(e, th);
    if (off > 0.0 && off < span) cuts[nc++] = off / span;
  }
  cuts[nc++] = 1.0;
  std::sort(cuts.begin(), cuts.begin() + nc);
  auto pointAt = [&](double u) -> Point {
    if (u <= 0.0) return e.a;
    if (u >= 1.0) return e.b;
    const double th = normAngle(e.start_angle + u * e.sweep);
    // Extremes are placed exactly so adjacent pieces agree.
    if (std::abs(th - kPi / 2.0) < 1e-12) return {e.center.x, e.center.y + e.radius};
    if (std::abs(th - 3.0 * kPi / 2.0) < 1e-12) return {e.center.x, e.center.y - e.radius};
    return polar(e.center, e.radius, th);
  };
  int w = 0;
  for (std::size_t k = 0; k + 1 < nc; ++k) {
    const Point p0 = pointAt(cuts[k]);
    const Point p1 = pointAt(cuts[k + 1]);
    const double thMid = e.start_angle + 0.5 * (cuts[k] + cuts[k + 1]) * e.sweep;
    const double side = std::cos(thMid) >= 0.0 ? 1.0 : -1.0;
    w += monotoneCrossing(p, p0, p1, [&](double y) {
      const double dy = y - e.center.y;
      return e.center.x + side * std::sqrt(std::max(0.0, e.radius * e.radius - dy * dy));
    });
  }
  return w;
}

}  // namespace

int Loop::winding(Point p) const {
  int w = 0;
  for (const auto& e : elements) w += elementWinding(e, p);
  return w;
}

double Loop::distanceTo(Point p) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& e : elements) best = std::min(best, e.distanceTo(p));
  return best;
}

double Face::area() const {
  double a = outer.signedArea();
  for (const auto& h : holes) a += h.signedArea();
  return a;
}

double Region::area() const {
  double a = 0.0;
  for (const auto& f : faces) a += f.area();
  return a;
}

std::size_t Region::elementCount() const {
  std::size_t n = 0;
  for (const auto& f : faces) {
    n += f.outer.elements.size();
    for (const auto& h : f.holes) n += h.elements.size();
  }
  return n;
}

Box Region::bbox() const {
  Box bx = faces.front().bbox();
  for (const auto& f : faces) bx.expand(f.bbox());
  return bx;
}

void Region::forEachElement(const std::function<void(const ArcSeg&)>& fn) const {
  for (const auto& f : faces) {
    for (const auto& e : f.outer.elements) fn(e);
    for (const auto& h : f.holes)
      for (const auto& e : h.elements) fn(e);
  }
}

namespace {

bool withinBand(const ArcSeg& e, Point p, double band) {
  if (e.isArc() && std::abs(dist(p, e.center) - e.radius) > band) return false;
  if (e.isSegment() && (p.x < std::min(e.a.x, e.b.x) - band || p.x > std::max(e.a.x, e.b.x) + band ||
                        p.y < std::min(e.a.y, e.b.y) - band || p.y > std::max(e.a.y, e.b.y) + band))
    return false;
  return e.distanceTo(p) <= band;
}

bool loopWithinBand(const Loop& l, Point p, double band) {
  for (const auto& e : l.elements)
    if (withinBand(e, p, band)) return true;
  return false;
}

}  // namespace

Where locate(Point p, const Face& f, double band) {
  if (loopWithinBand(f.outer, p, band)) return Where::Boundary;
  for (const auto& h : f.holes)
    if (loopWithinBand(h, p, band)) return Where::Boundary;
  int w = f.outer.winding(p);
  for (const auto& h : f.holes) w += h.winding(p);
  return w != 0 ? Where::Inside : Where::Outside;
}

Where pointInRegion(Point p, const Region& r, double band) {
  Where best = Where::Outside;
  for (const auto& f : r.faces) {
    const Where w = locate(p, f, band);
    if (w == Where::Boundary) return w;
    if (w == Where::Inside) best = w;
  }
  return best;
}

std::optional<std::size_t> faceOf(Point p, const Region& r, double band) {
  std::optional<std::size_t> boundary;
  for (std::size_t i = 0; i < r.faces.size(); ++i) {
    const Where w = locate(p, r.faces[i], band);
    if (w == Where::Inside) return i;
    if (w == Where::Boundary && !boundary) boundary = i;
  }
  return boundary;
}

std::optional<std::size_t> faceByProbe(Point p, const Region& r, double probe) {
  auto inside = [&](Point q) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < r.faces.size(); ++i)
      if (locate(q, r.faces[i]) == Where::Inside) return i;
    return std::nullopt;
  };
  if (auto f = inside(p)) return f;
  std::vector<int> votes(r.faces.size(), 0);
  bool any = false;
  for (int k = 0; k < 16; ++k) {
    if (auto f = inside(polar(p, probe, k * kTwoPi / 16 + 0.1))) {
      ++votes[*f];
      any = true;
    }
  }
  if (!any) return faceOf(p, r);
  return static_cast<std::size_t>(std::max_element(votes.begin(), votes.end()) - votes.begin());
}

Region disc(Point c, double r) {
  Region reg;
  Face f;
  f.outer.elements.push_back(ArcSeg::circle(c, r));
  reg.faces.push_back(std::move(f));
  return reg;
}

Region polygonRegion(std::span<const Point> vertices) {
  if (vertices.size() < 3) throw GeometryError("polygon needs at least 3 vertices");
  Loop loop;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const Point a = vertices[i];
    const Point b = vertices[(i + 1) % vertices.size()];
    if (near(a, b, 1e-15)) continue;
    loop.elements.push_back(ArcSeg::segment(a, b));
  }
  if (loop.signedArea() < 0.0) loop = loop.reversed();
  Region reg;
  reg.faces.push_back(Face{std::move(loop), {}});
  return reg;
}

Region capsule(Point a, Point b, double r) {
  if (dist(a, b) <= kEps) return disc(a, r);
  const Point n = perpLeft(unit(b - a)) * r;
  const Point a0 = a - n;
  const Point b0 = b - n;
  const Point b1 = b + n;
  const Point a1 = a + n;
  Loop loop;
  loop.elements.push_back(ArcSeg::segment(a0, b0));
  loop.elements.push_back(ArcSeg::arcBetween(b, r, b0, b1, kPi));
  loop.elements.push_back(ArcSeg::segment(b1, a1));
  loop.elements.push_back(ArcSeg::arcBetween(a, r, a1, a0, kPi));
  Region reg;
  reg.faces.push_back(Face{std::move(loop), {}});
  return reg;
}

double Chain::length() const { return pathLength(elements); }

double pathClearance(std::span<const ArcSeg> path, Point p) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& e : path) best = std::min(best, e.distanceTo(p));
  return best;
}

double pathLength(std::span<const ArcSeg> path) {
  double len = 0.0;
  for (const auto& e : path) len += e.length();
  return len;
}

}  // namespace mrmp::geom
