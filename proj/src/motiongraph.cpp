#include "mrmp/motiongraph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <set>

namespace mrmp {

using geom::Face;
using geom::Loop;
using geom::LoopMetric;
using geom::Where;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool anyFrom(std::span<const bool> m, std::size_t from) {
  for (std::size_t k = from; k < m.size(); ++k)
    if (m[k]) return true;
  return false;
}

std::vector<Point> nodePositions(const ComponentAnalysis& ca) {
  std::vector<Point> p(ca.starts.begin(), ca.starts.end());
  p.insert(p.end(), ca.targets.begin(), ca.targets.end());
  return p;
}

// Start whose aura carries element e, if any.
std::optional<std::size_t> startOfArc(const ArcSeg& e, std::span<const Point> starts) {
  if (!e.isArc() || std::abs(e.radius - kAuraRadius) > 1e-7) return std::nullopt;
  for (std::size_t i = 0; i < starts.size(); ++i)
    if (geom::near(e.center, starts[i], 1e-7)) return i;
  return std::nullopt;
}

double wrap(double s, double P) {
  s = std::fmod(s, P);
  return s < 0 ? s + P : s;
}

// Parameter at which the upward ray from x enters the open aura of y.
double auraEntry(Point x, Point y) {
  const double dx = y.x - x.x;
  if (std::abs(dx) >= kAuraRadius - 1e-12) return kInf;
  const double h = std::sqrt(kAuraRadius * kAuraRadius - dx * dx);
  const double t1 = (y.y - x.y) - h, t2 = (y.y - x.y) + h;
  if (t2 <= 1e-9 || t1 < -1e-9) return kInf;
  return std::max(t1, 0.0);
}

}  // namespace

std::optional<std::vector<ArcSeg>> clearPath(const Region& Fi, Point a, Point b,
                                             std::span<const Point> avoid) {
  const geom::Box bx = Fi.bbox();
  std::vector<Region> discs;
  for (const Point& p : avoid) {
    if (p.x < bx.xmin - kAuraRadius || p.x > bx.xmax + kAuraRadius || p.y < bx.ymin - kAuraRadius ||
        p.y > bx.ymax + kAuraRadius)
      continue;
    discs.push_back(geom::disc(p, kAuraRadius));
  }
  if (discs.empty()) return geom::routeInRegion(Fi, a, b);
  std::vector<const Region*> ops{&Fi};
  for (const auto& d : discs) ops.push_back(&d);
  const Region C = geom::overlay(ops, [](std::span<const bool> m) { return m[0] && !anyFrom(m, 1); });
  return geom::routeInRegion(C, a, b);
}

LambdaBuild buildLambda(const ComponentAnalysis& ca, std::size_t j) {
  LambdaBuild out;
  out.list.face = j;
  const Region& fstar = ca.residual.fstar;
  const Face& F = fstar.faces[j];
  const Loop& L = F.outer;
  const LoopMetric M(L);
  const double P = M.perimeter();
  const std::vector<Point> pos = nodePositions(ca);
  const std::size_t ns = ca.starts.size();

  auto addDirect = [&](std::size_t a, std::size_t b) {
    if (a != b) out.direct.emplace_back(std::min(a, b), std::max(a, b));
  };

  // Vertical ray from x: a representative on the outer loop, or a direct edge
  // to the first position whose aura the ray enters.
  auto shoot = [&](std::size_t self) {
    const Point x = pos[self];
    double tL = kInf;
    geom::RayHit hitL;
    for (const auto& h : geom::rayHits(F, x, {0, 1}))
      if (h.loop == 0) {
        tL = h.t;
        hitL = h;
        break;
      }
    double tY = kInf;
    std::size_t y = self;
    for (std::size_t k = 0; k < pos.size(); ++k) {
      if (k == self) continue;
      const double t = auraEntry(x, pos[k]);
      if (t < tY) {
        tY = t;
        y = k;
      }
    }
    if (tY < tL) {
      addDirect(self, y);
    } else if (tL < kInf) {
      out.list.entries.push_back({hitL.p, self, M.coord(hitL.pos)});
    }
  };

  // (i) and interior targets.
  for (std::size_t k = 0; k < ca.targets.size(); ++k) {
    const Point t = ca.targets[k];
    if (geom::faceByProbe(t, fstar) != j) continue;
    const auto ivals = geom::loopIntervalsInDisc(L, t, kAuraRadius);
    if (ivals.empty()) {
      shoot(ns + k);
      continue;
    }
    for (const auto& iv : ivals) {
      const double s = wrap(iv.whole ? iv.s0 + P / 2 : (iv.s0 + iv.s1) / 2, P);
      out.list.entries.push_back({M.pointAt(s), ns + k, s});
    }
  }

  // Starts forming holes.
  std::set<std::size_t> holeStarts;
  for (const Loop& h : F.holes)
    for (const auto& e : h.elements)
      if (auto s = startOfArc(e, ca.starts)) holeStarts.insert(*s);
  for (std::size_t s : holeStarts) shoot(s);

  // (iii) starts whose aura lies on the outer loop.
  std::map<std::size_t, std::vector<std::size_t>> onOuter;
  for (std::size_t i = 0; i < L.elements.size(); ++i)
    if (auto s = startOfArc(L.elements[i], ca.starts)) onOuter[*s].push_back(i);
  for (const auto& [s, elems] : onOuter) {
    if (holeStarts.count(s)) continue;
    const Point c = ca.starts[s];
    const Region aura = geom::disc(c, kAuraRadius);
    std::vector<Region> others;
    std::vector<std::size_t> otherNode;
    for (std::size_t k = 0; k < pos.size(); ++k)
      if (k != s && geom::dist(pos[k], c) < 2 * kAuraRadius) {
        others.push_back(geom::disc(pos[k], kAuraRadius));
        otherNode.push_back(k);
      }
    std::vector<const Region*> ops{&aura, &ca.Fi};
    for (const auto& o : others) ops.push_back(&o);
    const Region Q =
        geom::overlay(ops, [](std::span<const bool> m) { return m[0] && m[1] && !anyFrom(m, 2); });
    const auto qf = geom::faceByProbe(c, Q);
    // Sampled pieces of the aura arcs on the outer loop that bound s's own
    // face of Q; the representative is the middle of the longest run.
    constexpr int kSamples = 32;
    double bestLen = 0.0, bestCoord = 0.0;
    if (qf) {
      for (std::size_t ei : elems) {
        const ArcSeg& e = L.elements[ei];
        int runStart = -1;
        for (int q = 0; q <= kSamples; ++q) {
          bool ok = false;
          if (q < kSamples) {
            const Point pt = e.at((q + 0.5) / kSamples);
            ok = geom::locate(pt, Q.faces[*qf], 1e-7) == Where::Boundary;
          }
          if (ok && runStart < 0) runStart = q;
          if (!ok && runStart >= 0) {
            const double len = e.length() * (q - runStart) / kSamples;
            if (len > bestLen) {
              bestLen = len;
              bestCoord = M.coord({ei, (runStart + q) / (2.0 * kSamples)});
            }
            runStart = -1;
          }
        }
      }
    }
    if (bestLen > 0.0) {
      out.list.entries.push_back({M.pointAt(bestCoord), s, bestCoord});
      continue;
    }
    // Every connector is obstructed: edges to the obstructing targets, those
    // covering the aura arcs and those bounding s's own face.
    std::set<std::size_t> obstructing;
    for (std::size_t k : otherNode) {
      if (k < ns) continue;
      bool covers = false;
      for (std::size_t ei : elems)
        for (int q = 0; q < kSamples && !covers; ++q)
          covers = geom::dist(L.elements[ei].at((q + 0.5) / kSamples), pos[k]) < kAuraRadius;
      if (covers) obstructing.insert(k);
    }
    if (qf) {
      auto visit = [&](const Loop& loop) {
        for (const auto& e : loop.elements) {
          if (!e.isArc() || std::abs(e.radius - kAuraRadius) > 1e-7) continue;
          for (std::size_t k : otherNode)
            if (k >= ns && geom::near(e.center, pos[k], 1e-7)) obstructing.insert(k);
        }
      };
      visit(Q.faces[*qf].outer);
      for (const auto& h : Q.faces[*qf].holes) visit(h);
    }
    for (std::size_t k : obstructing) addDirect(s, k);
    std::size_t longest = elems.front();
    for (std::size_t ei : elems)
      if (L.elements[ei].length() > L.elements[longest].length()) longest = ei;
    out.bridges.push_back({s, M.coord({longest, 0.5}), {obstructing.begin(), obstructing.end()}});
  }

  std::stable_sort(out.list.entries.begin(), out.list.entries.end(),
                   [](const LambdaEntry& a, const LambdaEntry& b) { return a.coord < b.coord; });
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> guaranteedPairs(const LambdaList& lambda) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  const auto& e = lambda.entries;
  const std::size_t k = e.size();
  if (k < 2) return out;
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t a = e[i].node, b = e[(i + 1) % k].node;
    if (a == b) continue;
    const std::pair<std::size_t, std::size_t> p{std::min(a, b), std::max(a, b)};
    if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
  }
  return out;
}

namespace {

struct Incident {
  std::size_t node;
  std::vector<std::size_t> blockers;
};

struct Candidate {
  EdgeKind kind;
  std::vector<std::size_t> blockers;
};

class BlockableBuilder {
 public:
  BlockableBuilder(const ComponentAnalysis& ca, const std::vector<LambdaList>& lambdas)
      : ca_(ca), lambdas_(lambdas) {
    for (const auto& f : ca.residual.fstar.faces) metrics_.emplace_back(f.outer);
  }

  std::vector<Incident> at(Point x, BoundaryKind kind, std::size_t startIdx, std::size_t remote,
                           int depth) const {
    if (kind == BoundaryKind::StartAura) return {{startIdx, {}}};
    if (kind != BoundaryKind::OwnerAura || depth > 3) return {};
    const auto& faces = ca_.residual.fstar.faces;
    for (std::size_t j = 0; j < faces.size(); ++j) {
      if (faces[j].outer.distanceTo(x) > 1e-6) continue;
      const LoopMetric& M = metrics_[j];
      const double cx = M.coord(M.project(x));
      const auto& es = lambdas_[j].entries;
      if (!es.empty()) {
        std::size_t succ = 0;
        while (succ < es.size() && es[succ].coord <= cx) ++succ;
        const std::size_t pred = succ == 0 ? es.size() - 1 : succ - 1;
        if (succ == es.size()) succ = 0;
        std::vector<Incident> r{{es[pred].node, {}}};
        if (es[succ].node != es[pred].node) r.push_back({es[succ].node, {}});
        return r;
      }
      // Empty Λ: continue along the outer loop to the next blocking area.
      const double P = M.perimeter();
      std::set<std::size_t> touching;
      double best = kInf;
      const FreeChain* bestChain = nullptr;
      std::size_t bestRemote = 0;
      bool bestAtX = true;
      for (std::size_t r = 0; r < ca_.remotes.size(); ++r) {
        const auto& rc = ca_.remotes[r];
        if (!rc.blocking) continue;
        for (const auto& ch : rc.freeBoundary)
          for (int end = 0; end < 2; ++end) {
            const Point q = end == 0 ? ch.x : ch.y;
            if (faces[j].outer.distanceTo(q) > 1e-6) continue;
            touching.insert(r);
            if (r == remote) continue;
            const double d = wrap(M.coord(M.project(q)) - cx, P);
            if (d < best) {
              best = d;
              bestChain = &ch;
              bestRemote = r;
              bestAtX = end == 0;
            }
          }
      }
      if (touching.size() <= 1 || !bestChain) return {};
      const Point y2 = bestAtX ? bestChain->y : bestChain->x;
      const BoundaryKind k2 = bestAtX ? bestChain->afterY : bestChain->beforeX;
      const std::size_t s2 = bestAtX ? bestChain->startAfterY : bestChain->startBeforeX;
      auto r = at(y2, k2, s2, bestRemote, depth + 1);
      const std::size_t extra = ca_.starts.size() + ca_.remotes[bestRemote].owner;
      for (auto& inc : r) inc.blockers.push_back(extra);
      return r;
    }
    return {};
  }

 private:
  const ComponentAnalysis& ca_;
  const std::vector<LambdaList>& lambdas_;
  std::vector<LoopMetric> metrics_;
};

}  // namespace

MotionGraph buildMotionGraph(const ComponentAnalysis& ca, std::span<const std::optional<Point>> merged) {
  MotionGraph g;
  g.startCount = ca.starts.size();
  for (std::size_t i = 0; i < ca.starts.size(); ++i) {
    MotionNode n{ca.starts[i], NodeKind::Start, i, std::nullopt};
    if (i < merged.size() && merged[i]) {
      n.kind = NodeKind::Merged;
      n.pairedTarget = merged[i];
    }
    g.nodes.push_back(n);
  }
  for (std::size_t i = 0; i < ca.targets.size(); ++i)
    g.nodes.push_back({ca.targets[i], NodeKind::Target, i, std::nullopt});
  g.incident.assign(g.nodes.size(), {});

  std::map<std::pair<std::size_t, std::size_t>, std::vector<Candidate>> cand;
  auto offer = [&](std::size_t a, std::size_t b, EdgeKind kind, std::vector<std::size_t> blockers) {
    if (a == b) return;
    std::erase_if(blockers, [&](std::size_t k) { return k == a || k == b; });
    std::sort(blockers.begin(), blockers.end());
    blockers.erase(std::unique(blockers.begin(), blockers.end()), blockers.end());
    auto& list = cand[std::make_pair(std::min(a, b), std::max(a, b))];
    for (const auto& c : list)
      if (c.kind == kind && c.blockers == blockers) return;
    list.push_back({kind, std::move(blockers)});
  };

  for (std::size_t j = 0; j < ca.residual.fstar.faces.size(); ++j) {
    LambdaBuild lb = buildLambda(ca, j);
    for (auto [a, b] : lb.direct) offer(a, b, EdgeKind::Guaranteed, {});
    for (auto [a, b] : guaranteedPairs(lb.list)) offer(a, b, EdgeKind::Guaranteed, {});
    const auto& es = lb.list.entries;
    for (const auto& br : lb.bridges) {
      if (es.empty() || br.blockers.empty()) continue;
      std::size_t succ = 0;
      while (succ < es.size() && es[succ].coord <= br.coord) ++succ;
      const std::size_t pred = succ == 0 ? es.size() - 1 : succ - 1;
      if (succ == es.size()) succ = 0;
      offer(br.start, es[pred].node, EdgeKind::Blockable, br.blockers);
      offer(br.start, es[succ].node, EdgeKind::Blockable, br.blockers);
    }
    g.lambdas.push_back(std::move(lb.list));
  }

  const BlockableBuilder bb(ca, g.lambdas);
  for (std::size_t r = 0; r < ca.remotes.size(); ++r) {
    const auto& rc = ca.remotes[r];
    if (!rc.blocking) continue;
    const std::size_t owner = g.startCount + rc.owner;
    for (const auto& ch : rc.freeBoundary) {
      const auto ix = bb.at(ch.x, ch.beforeX, ch.startBeforeX, r, 0);
      const auto iy = bb.at(ch.y, ch.afterY, ch.startAfterY, r, 0);
      for (const auto& a : ix)
        for (const auto& b : iy) {
          std::vector<std::size_t> bl{owner};
          bl.insert(bl.end(), a.blockers.begin(), a.blockers.end());
          bl.insert(bl.end(), b.blockers.begin(), b.blockers.end());
          offer(a.node, b.node, EdgeKind::Blockable, bl);
        }
    }
  }

  // Cheapest realizable candidate per pair: guaranteed first, then fewest blockers.
  for (auto& [key, list] : cand) {
    const auto [u, v] = key;
    std::stable_sort(list.begin(), list.end(), [](const Candidate& a, const Candidate& b) {
      if (a.kind != b.kind) return a.kind == EdgeKind::Guaranteed;
      return a.blockers.size() < b.blockers.size();
    });
    bool done = false;
    for (auto& c : list) {
      std::vector<Point> avoid;
      for (std::size_t k = 0; k < g.nodes.size(); ++k)
        if (k != u && k != v && !std::binary_search(c.blockers.begin(), c.blockers.end(), k))
          avoid.push_back(g.nodes[k].position);
      auto path = clearPath(ca.Fi, g.nodes[u].position, g.nodes[v].position, avoid);
      if (!path) continue;
      g.incident[u].push_back(g.edges.size());
      g.incident[v].push_back(g.edges.size());
      g.edges.push_back({u, v, c.kind, std::move(c.blockers), std::move(*path)});
      done = true;
      break;
    }
    if (!done) ++g.droppedEdges;
  }
  return g;
}

bool MotionGraph::connected() const {
  if (nodes.empty()) return true;
  std::vector<char> seen(nodes.size(), 0);
  std::deque<std::size_t> q{0};
  seen[0] = 1;
  std::size_t count = 1;
  while (!q.empty()) {
    const std::size_t w = q.front();
    q.pop_front();
    for (std::size_t e : incident[w]) {
      const std::size_t o = edges[e].other(w);
      if (!seen[o]) {
        seen[o] = 1;
        ++count;
        q.push_back(o);
      }
    }
  }
  return count == nodes.size();
}

std::vector<std::size_t> graphPath(const MotionGraph& g, std::size_t from, std::size_t to,
                                   const BlockerPredicate& allow) {
  if (from == to) return {};
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> via(g.nodes.size(), kNone);
  std::vector<char> seen(g.nodes.size(), 0);
  std::deque<std::size_t> q{from};
  seen[from] = 1;
  while (!q.empty() && !seen[to]) {
    const std::size_t w = q.front();
    q.pop_front();
    for (std::size_t e : g.incident[w]) {
      const MotionEdge& me = g.edges[e];
      if (me.kind == EdgeKind::Blockable && !(allow && allow(me))) continue;
      const std::size_t o = me.other(w);
      if (seen[o]) continue;
      seen[o] = 1;
      via[o] = e;
      q.push_back(o);
    }
  }
  if (!seen[to]) throw NoPath("no motion-graph path between the requested nodes");
  std::vector<std::size_t> path;
  for (std::size_t w = to; w != from; w = g.edges[via[w]].other(w)) path.push_back(via[w]);
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace mrmp
