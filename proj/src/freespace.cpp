#include "mrmp/freespace.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace mrmp {

using geom::Face;
using geom::Loop;
using geom::Where;

namespace {

bool anyOf(std::span<const bool> m, std::size_t from) {
  for (std::size_t k = from; k < m.size(); ++k)
    if (m[k]) return true;
  return false;
}

Point interiorProbe(const Loop& loop, double delta) {
  // Left of the midpoint of the longest element.
  std::size_t best = 0;
  for (std::size_t i = 1; i < loop.elements.size(); ++i)
    if (loop.elements[i].length() > loop.elements[best].length()) best = i;
  const ArcSeg& e = loop.elements[best];
  return e.mid() + geom::perpLeft(e.tangent(0.5)) * delta;
}

std::optional<std::size_t> insideFace(const Region& r, Point p) {
  for (std::size_t i = 0; i < r.faces.size(); ++i)
    if (geom::locate(p, r.faces[i]) == Where::Inside) return i;
  return std::nullopt;
}

}  // namespace

std::string polygonDefect(std::span<const Point> poly) {
  const std::size_t n = poly.size();
  if (n < 3) return "polygon has fewer than 3 vertices";
  for (const Point& p : poly)
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) return "non-finite vertex coordinate";
  auto edge = [&](std::size_t i) { return ArcSeg::segment(poly[i], poly[(i + 1) % n]); };
  for (std::size_t i = 0; i < n; ++i)
    if (geom::near(poly[i], poly[(i + 1) % n], geom::kEps)) {
      std::ostringstream os;
      os << "repeated vertex " << i;
      return os.str();
    }
  for (std::size_t i = 0; i < n; ++i) {
    const ArcSeg ei = edge(i);
    // Adjacent edge folding back onto this one.
    const ArcSeg en = edge((i + 1) % n);
    const Point d1 = ei.b - ei.a, d2 = en.b - en.a;
    if (std::abs(geom::cross(geom::unit(d1), geom::unit(d2))) < 1e-12 && geom::dot(d1, d2) < 0) {
      std::ostringstream os;
      os << "edges " << i << " and " << (i + 1) % n << " overlap";
      return os.str();
    }
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      const ArcSeg ej = edge(j);
      if (geom::distance(ei, ej) <= geom::kEps) {
        std::ostringstream os;
        os << "edges " << i << " and " << j << " intersect";
        return os.str();
      }
    }
  }
  return {};
}

std::optional<std::size_t> FreeSpace::componentOf(Point p, double band) const {
  for (std::size_t i = 0; i < components.size(); ++i)
    if (geom::pointInRegion(p, components[i], band) != Where::Outside) return i;
  return std::nullopt;
}

FreeSpace computeFreeSpace(std::span<const Point> workspace) {
  if (auto defect = polygonDefect(workspace); !defect.empty()) throw MalformedPolygon(defect);
  const Region W = geom::polygonRegion(workspace);
  std::vector<Region> caps;
  const std::size_t n = workspace.size();
  caps.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    caps.push_back(geom::capsule(workspace[i], workspace[(i + 1) % n], kRobotRadius));
  std::vector<const Region*> ops{&W};
  for (const auto& c : caps) ops.push_back(&c);
  FreeSpace fs;
  fs.region = geom::overlay(ops, [](std::span<const bool> m) { return m[0] && !anyOf(m, 1); });
  if (fs.region.empty()) throw EmptyFreeSpace("no point of the workspace has clearance 1");
  for (const auto& f : fs.region.faces)
    if (!f.holes.empty()) throw geom::GeometryError("free-space component with a hole");
  fs.components = geom::connectedFaces(fs.region);
  return fs;
}

Region auraUnion(std::span<const Point> positions) {
  std::vector<Region> discs;
  for (const Point& p : positions) discs.push_back(geom::disc(p, kAuraRadius));
  if (discs.empty()) return {};
  return geom::unionAll(discs);
}

BoundaryKind classifyElement(const ArcSeg& e, Point owner, std::span<const Point> starts,
                             std::size_t* startIndex) {
  if (!e.isArc() || std::abs(e.radius - kAuraRadius) > 1e-7) return BoundaryKind::Free;
  if (geom::near(e.center, owner, 1e-7)) return BoundaryKind::OwnerAura;
  for (std::size_t i = 0; i < starts.size(); ++i)
    if (geom::near(e.center, starts[i], 1e-7)) {
      if (startIndex) *startIndex = i;
      return BoundaryKind::StartAura;
    }
  return BoundaryKind::Free;
}

std::vector<RemoteComponent> remoteComponents(std::size_t owner, std::span<const Point> targets,
                                              std::span<const Point> starts, const Region& Fi) {
  const Point t = targets[owner];
  const Region aura = geom::disc(t, kAuraRadius);
  std::vector<Region> blockers;
  for (const Point& s : starts)
    if (geom::dist(s, t) < 2 * kAuraRadius - 1e-12) blockers.push_back(geom::disc(s, kAuraRadius));
  std::vector<const Region*> ops{&aura, &Fi};
  for (const auto& b : blockers) ops.push_back(&b);
  const Region piece =
      geom::overlay(ops, [](std::span<const bool> m) { return m[0] && m[1] && !anyOf(m, 2); });
  std::vector<RemoteComponent> out;
  for (const auto& f : piece.faces) {
    if (geom::locate(t, f) != Where::Outside) continue;
    RemoteComponent rc;
    rc.region.faces.push_back(f);
    rc.owner = owner;
    out.push_back(std::move(rc));
  }
  return out;
}

namespace {

std::vector<FreeChain> freeChains(const Region& r, Point owner, std::span<const Point> starts) {
  std::vector<FreeChain> out;
  auto handle = [&](const Loop& loop) {
    const std::size_t n = loop.elements.size();
    std::vector<BoundaryKind> cls(n);
    std::vector<std::size_t> sidx(n, 0);
    for (std::size_t i = 0; i < n; ++i) cls[i] = classifyElement(loop.elements[i], owner, starts, &sidx[i]);
    std::size_t anchor = n;
    for (std::size_t i = 0; i < n; ++i)
      if (cls[i] != BoundaryKind::Free) {
        anchor = i;
        break;
      }
    if (anchor == n) return;  // no aura pieces at all
    std::size_t k = 0;
    while (k < n) {
      const std::size_t i = (anchor + 1 + k) % n;
      if (cls[i] != BoundaryKind::Free) {
        ++k;
        continue;
      }
      FreeChain ch;
      const std::size_t prev = (i + n - 1) % n;
      ch.beforeX = cls[prev];
      ch.startBeforeX = sidx[prev];
      std::size_t j = i;
      while (cls[j] == BoundaryKind::Free) {
        ch.elements.push_back(loop.elements[j]);
        ++k;
        j = (j + 1) % n;
      }
      ch.afterY = cls[j];
      ch.startAfterY = sidx[j];
      ch.x = ch.elements.front().a;
      ch.y = ch.elements.back().b;
      out.push_back(std::move(ch));
    }
  };
  for (const auto& f : r.faces) {
    handle(f.outer);
    for (const auto& h : f.holes) handle(h);
  }
  return out;
}

}  // namespace

void classifyBlockingAreas(std::vector<RemoteComponent>& remotes, const Region& Fi,
                           std::span<const Point> targets, std::span<const Point> starts) {
  for (auto& rc : remotes) {
    const Region rest = geom::regionBoolean(Fi, rc.region, geom::BoolOp::Difference);
    rc.blocking = rest.faces.size() >= 2;
    rc.freeBoundary = freeChains(rc.region, targets[rc.owner], starts);
  }
}

Residual residualDecomposition(const Region& Fi, std::span<const RemoteComponent> remotes,
                               std::span<const Point> starts) {
  Residual res;
  {
    std::vector<const Region*> ops{&Fi};
    for (const auto& r : remotes) ops.push_back(&r.region);
    res.fbar = remotes.empty() ? Fi
                               : geom::overlay(ops, [](std::span<const bool> m) {
                                   return m[0] && !anyOf(m, 1);
                                 });
  }
  std::vector<Region> auras;
  const geom::Box bx = Fi.bbox();
  for (const Point& s : starts)
    if (bx.overlaps(geom::Box{s.x - 2, s.y - 2, s.x + 2, s.y + 2}))
      auras.push_back(geom::disc(s, kAuraRadius));
  std::vector<const Region*> ops{&res.fbar};
  for (const auto& a : auras) ops.push_back(&a);
  res.fstar = auras.empty() ? res.fbar
                            : geom::overlay(ops, [](std::span<const bool> m) {
                                return m[0] && !anyOf(m, 1);
                              });
  for (const auto& f : res.fstar.faces) {
    auto parent = insideFace(res.fbar, interiorProbe(f.outer, 1e-7));
    if (!parent) parent = geom::faceOf(interiorProbe(f.outer, 1e-7), res.fbar);
    res.fstarParent.push_back(parent.value_or(0));
  }
  return res;
}

std::optional<std::size_t> residualOf(const Residual& r, Point p) {
  return geom::faceByProbe(p, r.fbar);
}

bool ResidualGraph::isTree() const {
  if (nodeCount == 0) return false;
  if (edges.size() != nodeCount - 1) return false;
  std::vector<std::size_t> parent(nodeCount);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::size_t comps = nodeCount;
  for (const auto& e : edges) {
    const auto a = find(e.u), b = find(e.v);
    if (a == b) return false;
    parent[a] = b;
    --comps;
  }
  return comps == 1;
}

ResidualGraph buildResidualGraph(const Residual& res, std::span<const RemoteComponent> remotes,
                                 std::span<const Point> starts, std::span<const Point> targets) {
  ResidualGraph H;
  H.nodeCount = res.fbar.faces.size();
  H.startsIn.assign(H.nodeCount, {});
  H.targetsIn.assign(H.nodeCount, {});
  auto place = [&](Point p, const char* what, std::size_t i) {
    auto f = residualOf(res, p);
    if (!f) {
      std::ostringstream os;
      os << what << " " << i << " lies in no residual component";
      throw NotATree(os.str());
    }
    return *f;
  };
  for (std::size_t i = 0; i < starts.size(); ++i) {
    H.startNode.push_back(place(starts[i], "start", i));
    H.startsIn[H.startNode.back()].push_back(i);
  }
  for (std::size_t i = 0; i < targets.size(); ++i) {
    H.targetNode.push_back(place(targets[i], "target", i));
    H.targetsIn[H.targetNode.back()].push_back(i);
  }
  H.charge.resize(H.nodeCount);
  for (std::size_t v = 0; v < H.nodeCount; ++v)
    H.charge[v] = static_cast<int>(H.startsIn[v].size()) - static_cast<int>(H.targetsIn[v].size());

  H.adjacent.resize(remotes.size());
  for (std::size_t b = 0; b < remotes.size(); ++b) {
    const auto& rc = remotes[b];
    std::vector<std::size_t>& adj = H.adjacent[b];
    rc.region.forEachElement([&](const ArcSeg& e) {
      if (classifyElement(e, targets[rc.owner], starts) == BoundaryKind::Free) return;
      for (double u : {0.5, 0.25, 0.75}) {
        const Point out = e.at(u) - geom::perpLeft(e.tangent(u)) * 1e-6;
        if (auto f = insideFace(res.fbar, out)) adj.push_back(*f);
      }
    });
    std::sort(adj.begin(), adj.end());
    adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
  }
  for (std::size_t b = 0; b < remotes.size(); ++b) {
    if (!remotes[b].blocking) continue;
    const std::size_t t = remotes[b].owner;
    const std::size_t z = H.targetNode[t];
    const auto& adj = H.adjacent[b];
    if (!std::binary_search(adj.begin(), adj.end(), z)) {
      std::ostringstream os;
      os << "blocking area " << b << " is not adjacent to the residual component of its blocker " << t;
      throw NotATree(os.str());
    }
    for (std::size_t w : adj)
      if (w != z) H.edges.push_back({z, w, b, t});
  }
  if (!H.isTree()) {
    std::ostringstream os;
    os << "residual graph with " << H.nodeCount << " nodes and " << H.edges.size()
       << " edges is not a tree";
    throw NotATree(os.str());
  }
  return H;
}

ComponentAnalysis analyzeComponent(const Region& Fi, std::span<const Point> starts,
                                   std::span<const Point> targets) {
  ComponentAnalysis ca;
  ca.Fi = Fi;
  ca.starts.assign(starts.begin(), starts.end());
  ca.targets.assign(targets.begin(), targets.end());
  for (std::size_t t = 0; t < targets.size(); ++t) {
    auto r = remoteComponents(t, targets, starts, Fi);
    for (auto& x : r) ca.remotes.push_back(std::move(x));
  }
  classifyBlockingAreas(ca.remotes, Fi, targets, starts);
  ca.residual = residualDecomposition(Fi, ca.remotes, starts);
  ca.H = buildResidualGraph(ca.residual, ca.remotes, starts, targets);
  return ca;
}

}  // namespace mrmp
