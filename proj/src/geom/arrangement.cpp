// Overlay of regions bounded by segments and arcs.
//
// All operand boundary curves are split at mutual intersections, snapped into a
// shared vertex set, deduplicated, and each piece is kept when the membership
// predicate differs on its two sides. Kept pieces are linked into loops by a
// leftmost-turn walk and loops are assembled into faces.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <unordered_map>

#include "mrmp/geom.hpp"

namespace mrmp::geom {

namespace {

class VertexSnapper {
 public:
  explicit VertexSnapper(double tol) : tol_(tol) {}

  std::size_t insert(Point p) {
    const auto cx = static_cast<std::int64_t>(std::floor(p.x / tol_));
    const auto cy = static_cast<std::int64_t>(std::floor(p.y / tol_));
    std::size_t best = kNone;
    double bestD = tol_ * tol_;
    for (std::int64_t dx = -1; dx <= 1; ++dx)
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        auto it = grid_.find(key(cx + dx, cy + dy));
        if (it == grid_.end()) continue;
        for (std::size_t id : it->second) {
          const double d = dist2(points_[id], p);
          if (d <= bestD) {
            bestD = d;
            best = id;
          }
        }
      }
    if (best != kNone) return best;
    points_.push_back(p);
    grid_[key(cx, cy)].push_back(points_.size() - 1);
    return points_.size() - 1;
  }

  const Point& operator[](std::size_t i) const { return points_[i]; }

 private:
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  static std::uint64_t key(std::int64_t x, std::int64_t y) {
    return (static_cast<std::uint64_t>(x) * 0x9E3779B97F4A7C15ull) ^ static_cast<std::uint64_t>(y);
  }

  double tol_;
  std::vector<Point> points_;
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> grid_;
};

struct Source {
  ArcSeg curve;
  std::size_t operand;
  Box box;
};

struct Piece {
  std::size_t va, vb;
  ArcSeg geom;
  // operand index and whether the operand's curve runs in the same direction
  std::vector<std::pair<std::size_t, bool>> owners;
};

ArcSeg pieceGeometry(const ArcSeg& src, const VertexSnapper& vs, std::size_t va, std::size_t vb,
                     double u0, double u1) {
  if (src.isSegment()) return ArcSeg::segment(vs[va], vs[vb]);
  return ArcSeg::arcBetween(src.center, src.radius, vs[va], vs[vb], (u1 - u0) * src.sweep);
}

// Membership of p in operand r, resolving points on the boundary band by
// sampling alternatives along the piece.
bool memberAlong(const Region& r, const ArcSeg& piece) {
  for (double u : {0.5, 0.3, 0.7, 0.15, 0.85}) {
    const Where w = pointInRegion(piece.at(u), r);
    if (w != Where::Boundary) return w == Where::Inside;
  }
  return pointInRegion(piece.at(0.5), r, 0.0) != Where::Outside;
}

struct TurnKey {
  double angle;
  double curvature;
};

TurnKey makeKey(Point dir, double curvature) {
  double ang = std::atan2(dir.y, dir.x);
  if (ang < 0) ang += kTwoPi;
  if (ang >= kTwoPi - 1e-9) ang = 0.0;
  return {ang, curvature};
}

bool keyLess(const TurnKey& a, const TurnKey& b) {
  if (std::abs(a.angle - b.angle) > 1e-9) return a.angle < b.angle;
  return a.curvature < b.curvature;
}

bool mergeable(const ArcSeg& p, const ArcSeg& q) {
  if (p.kind != q.kind || !near(p.b, q.a, 1e-12)) return false;
  if (p.isSegment()) {
    const Point d1 = p.b - p.a;
    const Point d2 = q.b - q.a;
    return std::abs(cross(unit(d1), unit(d2))) < 1e-12 && dot(d1, d2) > 0;
  }
  return near(p.center, q.center, 1e-12) && std::abs(p.radius - q.radius) < 1e-12 &&
         (p.sweep > 0) == (q.sweep > 0) && std::abs(p.sweep + q.sweep) < kTwoPi - 1e-9;
}

ArcSeg merge(const ArcSeg& p, const ArcSeg& q) {
  if (p.isSegment()) return ArcSeg::segment(p.a, q.b);
  ArcSeg r = p;
  r.sweep = p.sweep + q.sweep;
  r.b = q.b;
  return r;
}

Loop mergeLoop(std::vector<ArcSeg> els) {
  std::vector<ArcSeg> out;
  for (auto& e : els) {
    if (!out.empty() && mergeable(out.back(), e))
      out.back() = merge(out.back(), e);
    else
      out.push_back(e);
  }
  while (out.size() > 1 && mergeable(out.back(), out.front())) {
    out.front() = merge(out.back(), out.front());
    out.pop_back();
  }
  // A lone arc that closes on itself is a full circle.
  if (out.size() == 1 && out[0].isArc() && near(out[0].a, out[0].b, 1e-12)) {
    out[0].b = out[0].a;
    out[0].sweep = out[0].sweep > 0 ? kTwoPi : -kTwoPi;
  }
  return Loop{std::move(out)};
}

Point interiorSample(const Loop& loop) {
  // A point just left of the first element's midpoint.
  const ArcSeg& e = loop.elements.front();
  return e.mid() + perpLeft(e.tangent(0.5)) * 1e-7;
}

bool lessPoint(Point a, Point b) {
  if (a.x != b.x) return a.x < b.x;
  return a.y < b.y;
}

// Rotate the loop so that it starts at its lexicographically smallest vertex.
void canonicalStart(Loop& loop) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < loop.elements.size(); ++i)
    if (lessPoint(loop.elements[i].a, loop.elements[best].a)) best = i;
  std::rotate(loop.elements.begin(), loop.elements.begin() + static_cast<std::ptrdiff_t>(best),
              loop.elements.end());
}

Point minVertex(const Loop& loop) { return loop.elements.front().a; }

}  // namespace

Region overlay(std::span<const Region* const> operands,
               const std::function<bool(std::span<const bool>)>& keep) {
  const std::size_t K = operands.size();
  std::vector<Source> src;
  for (std::size_t k = 0; k < K; ++k)
    operands[k]->forEachElement([&](const ArcSeg& e) {
      if (e.length() > 1e-13) src.push_back({e, k, e.bbox()});
    });

  const std::size_t n = src.size();
  std::vector<std::vector<double>> params(n);
  for (std::size_t i = 0; i < n; ++i) {
    params[i] = {0.0, 1.0};
    if (src[i].curve.isFullCircle()) params[i].push_back(0.5);
  }

  // Sweep by xmin to limit pairwise checks.
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return src[a].box.xmin < src[b].box.xmin; });
  for (std::size_t oi = 0; oi < n; ++oi) {
    const std::size_t i = order[oi];
    const ArcSeg& ci = src[i].curve;
    for (std::size_t oj = oi + 1; oj < n; ++oj) {
      const std::size_t j = order[oj];
      if (src[j].box.xmin > src[i].box.xmax + kEps) break;
      if (!src[i].box.overlaps(src[j].box, kEps)) continue;
      const ArcSeg& cj = src[j].curve;
      for (Point p : {cj.a, cj.b})
        if (auto u = ci.paramOf(p)) params[i].push_back(*u);
      for (Point p : {ci.a, ci.b})
        if (auto u = cj.paramOf(p)) params[j].push_back(*u);
      if (ci.sameCarrier(cj)) continue;
      for (const Hit& h : intersect(ci, cj)) {
        params[i].push_back(h.ua);
        params[j].push_back(h.ub);
      }
    }
  }

  VertexSnapper vs(kEps);
  for (const auto& s : src) {
    vs.insert(s.curve.a);
    vs.insert(s.curve.b);
  }

  std::vector<Piece> pieces;
  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> byPair;
  for (std::size_t i = 0; i < n; ++i) {
    auto& ps = params[i];
    std::sort(ps.begin(), ps.end());
    ps.erase(std::unique(ps.begin(), ps.end(), [](double a, double b) { return b - a < 1e-12; }),
             ps.end());
    const ArcSeg& c = src[i].curve;
    std::size_t curV = vs.insert(c.a);
    double curU = 0.0;
    for (std::size_t k = 1; k < ps.size(); ++k) {
      const double u = ps[k];
      const std::size_t v = vs.insert(k + 1 == ps.size() ? c.b : c.at(u));
      if (v == curV) continue;
      Piece pc{curV, v, pieceGeometry(c, vs, curV, v, curU, u), {{src[i].operand, true}}};
      const auto key = std::minmax(curV, v);
      bool merged = false;
      for (std::size_t q : byPair[key]) {
        Piece& other = pieces[q];
        if (other.geom.kind != pc.geom.kind || !other.geom.sameCarrier(pc.geom, 1e-7)) continue;
        if (!near(other.geom.mid(), pc.geom.mid(), 1e-7)) continue;
        other.owners.push_back({src[i].operand, other.va == curV});
        merged = true;
        break;
      }
      if (!merged) {
        byPair[key].push_back(pieces.size());
        pieces.push_back(std::move(pc));
      }
      curV = v;
      curU = u;
    }
  }

  // Classification.
  struct Directed {
    std::size_t from, to;
    ArcSeg geom;
  };
  std::vector<Directed> kept;
  std::vector<char> owned(K), left(K), right(K);
  std::unique_ptr<bool[]> la(new bool[K]), ra(new bool[K]);
  for (const Piece& pc : pieces) {
    std::fill(owned.begin(), owned.end(), 0);
    std::fill(left.begin(), left.end(), 0);
    std::fill(right.begin(), right.end(), 0);
    for (auto [k, same] : pc.owners) {
      owned[k] = 1;
      (same ? left : right)[k] = 1;
    }
    for (std::size_t k = 0; k < K; ++k) {
      if (owned[k]) {
        la[k] = left[k];
        ra[k] = right[k];
      } else {
        la[k] = ra[k] = memberAlong(*operands[k], pc.geom);
      }
    }
    const bool kl = keep(std::span<const bool>(la.get(), K));
    const bool kr = keep(std::span<const bool>(ra.get(), K));
    if (kl == kr) continue;
    if (kl)
      kept.push_back({pc.va, pc.vb, pc.geom});
    else
      kept.push_back({pc.vb, pc.va, pc.geom.reversed()});
  }

  // Linking.
  std::unordered_map<std::size_t, std::vector<std::size_t>> outgoing;
  std::vector<TurnKey> outKey(kept.size());
  for (std::size_t e = 0; e < kept.size(); ++e) {
    outgoing[kept[e].from].push_back(e);
    outKey[e] = makeKey(kept[e].geom.tangent(0.0), kept[e].geom.curvature());
  }
  auto nextEdge = [&](std::size_t e) -> std::optional<std::size_t> {
    const auto it = outgoing.find(kept[e].to);
    if (it == outgoing.end()) return std::nullopt;
    const TurnKey rev = makeKey(kept[e].geom.tangent(1.0) * -1.0, -kept[e].geom.curvature());
    std::optional<std::size_t> below, top;
    for (std::size_t c : it->second) {
      if (keyLess(outKey[c], rev)) {
        if (!below || keyLess(outKey[*below], outKey[c])) below = c;
      }
      if (!top || keyLess(outKey[*top], outKey[c])) top = c;
    }
    return below ? below : top;
  };

  std::vector<char> used(kept.size(), 0);
  std::vector<Loop> outers, holes;
  for (std::size_t s = 0; s < kept.size(); ++s) {
    if (used[s]) continue;
    std::vector<std::size_t> cyc{s};
    used[s] = 1;
    std::size_t cur = s;
    bool ok = false;
    for (std::size_t step = 0; step <= kept.size(); ++step) {
      auto nx = nextEdge(cur);
      if (!nx) break;
      if (*nx == s) {
        ok = true;
        break;
      }
      if (used[*nx]) break;
      used[*nx] = 1;
      cyc.push_back(*nx);
      cur = *nx;
    }
    if (!ok) continue;
    std::vector<ArcSeg> els;
    for (std::size_t e : cyc) els.push_back(kept[e].geom);
    Loop loop = mergeLoop(std::move(els));
    const double area = loop.signedArea();
    if (std::abs(area) < 1e-11) continue;
    canonicalStart(loop);
    (area > 0 ? outers : holes).push_back(std::move(loop));
  }

  auto byMin = [](const Loop& a, const Loop& b) { return lessPoint(minVertex(a), minVertex(b)); };
  std::sort(outers.begin(), outers.end(), byMin);
  std::sort(holes.begin(), holes.end(), byMin);

  Region out;
  std::vector<double> outerArea;
  for (auto& o : outers) {
    outerArea.push_back(o.signedArea());
    out.faces.push_back(Face{std::move(o), {}});
  }
  for (auto& h : holes) {
    const Point p = interiorSample(h.reversed());
    std::optional<std::size_t> best;
    for (std::size_t f = 0; f < out.faces.size(); ++f) {
      const Loop& o = out.faces[f].outer;
      if (o.winding(p) == 0) continue;
      if (!best || outerArea[f] < outerArea[*best]) best = f;
    }
    if (best) out.faces[*best].holes.push_back(std::move(h));
  }
  return out;
}

Region regionBoolean(const Region& a, const Region& b, BoolOp op) {
  const Region* ops[] = {&a, &b};
  switch (op) {
    case BoolOp::Union:
      return overlay(ops, [](std::span<const bool> m) { return m[0] || m[1]; });
    case BoolOp::Difference:
      return overlay(ops, [](std::span<const bool> m) { return m[0] && !m[1]; });
    case BoolOp::Intersection:
      return overlay(ops, [](std::span<const bool> m) { return m[0] && m[1]; });
  }
  return {};
}

Region unionAll(std::span<const Region> parts) {
  std::vector<const Region*> ops;
  for (const auto& p : parts) ops.push_back(&p);
  return overlay(ops, [](std::span<const bool> m) {
    return std::any_of(m.begin(), m.end(), [](bool b) { return b; });
  });
}

std::vector<Region> connectedFaces(const Region& r) {
  std::vector<Region> out;
  for (const auto& f : r.faces) out.push_back(Region{{f}});
  return out;
}

}  // namespace mrmp::geom
