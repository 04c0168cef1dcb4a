#include <algorithm>
#include <cmath>
#include <limits>

#include "mrmp/geom.hpp"

namespace mrmp::geom {

const Loop& loopOf(const Face& f, std::size_t loop_index) {
  return loop_index == 0 ? f.outer : f.holes.at(loop_index - 1);
}

std::vector<RayHit> rayHits(const Face& f, Point origin, Point dir, double tmin) {
  const Box bx = f.bbox();
  const double reach = dist(origin, {bx.xmin, bx.ymin}) + dist(origin, {bx.xmax, bx.ymax}) +
                       bx.width() + bx.height() + 1.0;
  const ArcSeg ray = ArcSeg::segment(origin, origin + dir * reach);
  std::vector<RayHit> out;
  for (std::size_t li = 0; li <= f.holes.size(); ++li) {
    const Loop& loop = loopOf(f, li);
    for (std::size_t i = 0; i < loop.elements.size(); ++i) {
      const ArcSeg& e = loop.elements[i];
      std::vector<Hit> hits = intersect(ray, e);
      // Vertices lying on the ray (e.g. collinear or grazing elements).
      if (hits.empty()) {
        for (double u : {0.0, 1.0}) {
          const Point p = e.at(u);
          if (ray.distanceTo(p) <= 1e-12) hits.push_back({ray.project(p), u, p});
        }
      }
      for (const Hit& h : hits) {
        const double t = h.ua * reach;
        if (t <= tmin) continue;
        out.push_back({t, 0, li, {i, h.ub}, h.p});
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const RayHit& a, const RayHit& b) { return a.t < b.t; });
  return out;
}

bool segmentInFace(Point p, Point q, const Face& f) {
  if (locate(p, f) == Where::Outside || locate(q, f) == Where::Outside) return false;
  if (near(p, q, 1e-15)) return true;
  const ArcSeg s = ArcSeg::segment(p, q);
  std::vector<double> us{0.0, 1.0};
  auto scan = [&](const Loop& loop) {
    for (const auto& e : loop.elements) {
      for (const Hit& h : intersect(s, e)) us.push_back(h.ua);
      for (Point v : {e.a, e.b})
        if (auto u = s.paramOf(v, 1e-12)) us.push_back(*u);
      // Tangential touches of arcs: add the closest approach.
      if (e.isArc()) {
        const double u = s.project(e.center);
        if (u > 0 && u < 1) us.push_back(u);
      }
    }
  };
  scan(f.outer);
  for (const auto& h : f.holes) scan(h);
  std::sort(us.begin(), us.end());
  for (std::size_t k = 0; k + 1 < us.size(); ++k) {
    if (us[k + 1] - us[k] < 1e-13) continue;
    if (locate(s.at(0.5 * (us[k] + us[k + 1])), f) == Where::Outside) return false;
  }
  return true;
}

namespace {

struct Step {
  std::size_t loop;
  double s;
  std::vector<ArcSeg> path;  // from the start point to this loop position
};

// Coordinate of the topmost point of a loop.
double topCoord(const Loop& loop, const LoopMetric& metric) {
  double bestY = -std::numeric_limits<double>::infinity();
  LoopPos best;
  for (std::size_t i = 0; i < loop.elements.size(); ++i) {
    const ArcSeg& e = loop.elements[i];
    auto consider = [&](double u, Point p) {
      if (p.y > bestY) {
        bestY = p.y;
        best = {i, u};
      }
    };
    consider(0.0, e.a);
    consider(1.0, e.b);
    if (e.isArc()) {
      const Point top{e.center.x, e.center.y + e.radius};
      if (auto u = e.paramOf(top, 1e-12)) consider(*u, top);
    }
  }
  return metric.coord(best);
}

std::optional<std::vector<Step>> climb(const Face& f, Point x) {
  std::vector<Step> steps;
  std::vector<ArcSeg> path;
  std::size_t loop = 0;
  double s = 0.0;
  bool anchored = false;
  for (std::size_t li = 0; li <= f.holes.size() && !anchored; ++li) {
    const Loop& l = loopOf(f, li);
    if (l.distanceTo(x) <= kEps) {
      const LoopMetric m(l);
      loop = li;
      s = m.coord(m.project(x));
      anchored = true;
    }
  }
  if (!anchored) {
    const auto hits = rayHits(f, x, {0.0, 1.0}, 0.0);
    if (hits.empty()) return std::nullopt;
    const RayHit& h = hits.front();
    path.push_back(ArcSeg::segment(x, h.p));
    loop = h.loop;
    s = LoopMetric(loopOf(f, loop)).coord(h.pos);
  }
  steps.push_back({loop, s, path});
  std::size_t guard = 0;
  while (loop != 0) {
    if (guard++ > f.holes.size() + 1) return std::nullopt;
    const Loop& l = loopOf(f, loop);
    const LoopMetric m(l);
    const double st = topCoord(l, m);
    for (auto& e : m.shortest(s, st)) path.push_back(e);
    const Point top = m.pointAt(st);
    auto hits = rayHits(f, top, {0.0, 1.0}, 1e-12);
    hits.erase(std::remove_if(hits.begin(), hits.end(), [&](const RayHit& h) { return h.loop == loop; }),
               hits.end());
    if (hits.empty()) return std::nullopt;
    const RayHit& h = hits.front();
    if (h.t > 1e-12) path.push_back(ArcSeg::segment(top, h.p));
    loop = h.loop;
    s = LoopMetric(loopOf(f, loop)).coord(h.pos);
    steps.push_back({loop, s, path});
  }
  return steps;
}

std::vector<ArcSeg> reversedPath(const std::vector<ArcSeg>& p) {
  std::vector<ArcSeg> out;
  for (auto it = p.rbegin(); it != p.rend(); ++it) out.push_back(it->reversed());
  return out;
}

}  // namespace

std::optional<std::vector<ArcSeg>> routeInFace(const Face& f, Point from, Point to) {
  if (locate(from, f) == Where::Outside || locate(to, f) == Where::Outside) return std::nullopt;
  if (segmentInFace(from, to, f)) return std::vector<ArcSeg>{ArcSeg::segment(from, to)};
  auto a = climb(f, from);
  auto b = climb(f, to);
  if (!a || !b) return std::nullopt;
  for (const Step& sa : *a) {
    for (const Step& sb : *b) {
      if (sa.loop != sb.loop) continue;
      const LoopMetric m(loopOf(f, sa.loop));
      std::vector<ArcSeg> path = sa.path;
      for (auto& e : m.shortest(sa.s, sb.s)) path.push_back(e);
      for (auto& e : reversedPath(sb.path)) path.push_back(e);
      path = simplifyPath(std::move(path));
      if (path.empty()) path.push_back(ArcSeg::segment(from, to));
      // Pin exact endpoints.
      path.front().a = from;
      path.back().b = to;
      return path;
    }
  }
  return std::nullopt;
}

std::optional<std::vector<ArcSeg>> routeInRegion(const Region& r, Point from, Point to) {
  for (const auto& f : r.faces) {
    if (locate(from, f) == Where::Outside) continue;
    if (locate(to, f) == Where::Outside) continue;
    if (auto p = routeInFace(f, from, to)) return p;
  }
  return std::nullopt;
}

std::vector<ArcSeg> simplifyPath(std::vector<ArcSeg> path) {
  std::vector<ArcSeg> out;
  for (auto& e : path) {
    if (e.length() < 1e-12) {
      if (!out.empty()) out.back().b = e.b;
      continue;
    }
    if (!out.empty()) {
      ArcSeg& p = out.back();
      if (p.isSegment() && e.isSegment() && std::abs(cross(unit(p.b - p.a), unit(e.b - e.a))) < 1e-12 &&
          dot(p.b - p.a, e.b - e.a) > 0) {
        p = ArcSeg::segment(p.a, e.b);
        continue;
      }
      if (p.isArc() && e.isArc() && near(p.center, e.center, 1e-12) &&
          std::abs(p.radius - e.radius) < 1e-12 && (p.sweep > 0) == (e.sweep > 0) &&
          std::abs(p.sweep + e.sweep) < kTwoPi - 1e-9) {
        p.sweep += e.sweep;
        p.b = e.b;
        continue;
      }
    }
    out.push_back(e);
  }
  return out;
}

}  // namespace mrmp::geom
