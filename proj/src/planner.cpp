#include "mrmp/planner.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <numeric>
#include <set>

namespace mrmp {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
constexpr double kPositionTol = 1e-7;

std::string joinMessages(const std::vector<Violation>& v) {
  std::string s = "precondition violated";
  for (const auto& x : v) s += "; " + x.message;
  return s;
}

}  // namespace

PreconditionViolation::PreconditionViolation(std::vector<Violation> v)
    : std::runtime_error(joinMessages(v)), violations_(std::move(v)) {}

std::vector<Violation> validateSingleComponent(const Region& Fi, std::span<const Point> S,
                                               std::span<const Point> T) {
  std::vector<Violation> out;
  auto mono = [&](std::span<const Point> P, const char* what) {
    for (std::size_t i = 0; i < P.size(); ++i)
      for (std::size_t j = i + 1; j < P.size(); ++j)
        if (const double d = geom::dist(P[i], P[j]); d < 4 - kPositionTol)
          out.push_back({ViolationKind::Mu, std::string(what) + " pair closer than 4", {i, j}, {P[i], P[j]}, d});
  };
  mono(S, "start");
  mono(T, "target");
  if (S.size() != T.size())
    out.push_back({ViolationKind::Charge, "start and target counts differ", {}, {},
                   static_cast<double>(S.size()) - static_cast<double>(T.size())});
  auto inside = [&](std::span<const Point> P, const char* what) {
    for (std::size_t i = 0; i < P.size(); ++i)
      if (geom::pointInRegion(P[i], Fi, kPositionTol) == geom::Where::Outside)
        out.push_back({ViolationKind::OutsideFreeSpace, std::string(what) + " outside the component", {i}, {P[i]}, 0});
  };
  inside(S, "start");
  inside(T, "target");
  return out;
}

ClosePairs mergeClosePairs(std::span<const Point> S, std::span<const Point> T) {
  ClosePairs out;
  out.targetOf.assign(S.size(), std::nullopt);
  std::vector<char> paired(T.size(), 0);
  for (std::size_t i = 0; i < S.size(); ++i)
    for (std::size_t j = 0; j < T.size(); ++j) {
      if (geom::dist(S[i], T[j]) >= 2.0) continue;
      if (out.targetOf[i] || paired[j])
        throw std::logic_error("a position has two positions of the other colour in its aura");
      out.targetOf[i] = j;
      paired[j] = 1;
    }
  for (std::size_t j = 0; j < T.size(); ++j)
    if (!paired[j]) out.keptTargets.push_back(j);
  return out;
}

namespace {

// Residual ids reachable from `from` without using edge `skip`.
std::vector<std::size_t> side(const ChargedTree& t, std::size_t from, std::size_t skip) {
  std::vector<std::size_t> out{from};
  std::set<std::size_t> seen{from};
  for (std::size_t i = 0; i < out.size(); ++i)
    for (std::size_t e = 0; e < t.edges.size(); ++e) {
      if (e == skip) continue;
      const auto [a, b] = t.edges[e];
      const std::size_t w = out[i];
      const std::size_t o = a == w ? b : b == w ? a : kNone;
      if (o != kNone && seen.insert(o).second) out.push_back(o);
    }
  std::sort(out.begin(), out.end());
  return out;
}

int chargeOf(const ChargedTree& t, const std::vector<std::size_t>& nodes) {
  int q = 0;
  for (std::size_t n : nodes) q += t.charge[n];
  return q;
}

std::vector<ChargedTree> splitBy(const ChargedTree& t, const std::vector<char>& removed) {
  std::vector<ChargedTree> parts;
  std::set<std::size_t> done;
  ChargedTree kept{t.nodes, {}, t.charge};
  for (std::size_t e = 0; e < t.edges.size(); ++e)
    if (!removed[e]) kept.edges.push_back(t.edges[e]);
  for (std::size_t n : t.nodes) {
    if (done.count(n)) continue;
    ChargedTree p;
    p.charge = t.charge;
    p.nodes = side(kept, n, kNone);
    done.insert(p.nodes.begin(), p.nodes.end());
    for (const auto& e : kept.edges)
      if (std::binary_search(p.nodes.begin(), p.nodes.end(), e.first)) p.edges.push_back(e);
    parts.push_back(std::move(p));
  }
  return parts;
}

}  // namespace

std::vector<ChargedTree> cutZeroChargeEdges(const ChargedTree& t) {
  std::vector<char> cut(t.edges.size(), 0);
  for (std::size_t e = 0; e < t.edges.size(); ++e)
    cut[e] = chargeOf(t, side(t, t.edges[e].first, e)) == 0;
  return splitBy(t, cut);
}

std::size_t findSink(const ChargedTree& t) {
  std::vector<std::size_t> nodes = t.nodes;
  std::sort(nodes.begin(), nodes.end());
  for (std::size_t n : nodes) {
    bool sink = true;
    for (std::size_t e = 0; e < t.edges.size() && sink; ++e) {
      const auto [a, b] = t.edges[e];
      if (a != n && b != n) continue;
      const std::size_t o = a == n ? b : a;
      sink = chargeOf(t, side(t, o, e)) > 0;
    }
    if (sink) return n;
  }
  throw PlanningFailed("charged tree has no sink");
}

std::vector<ArcSeg> concatEdgePaths(const MotionGraph& g, std::span<const std::size_t> nodes) {
  std::vector<ArcSeg> out;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const std::size_t a = nodes[i], b = nodes[i + 1];
    const MotionEdge* best = nullptr;
    for (std::size_t e : g.incident[a])
      if (g.edges[e].other(a) == b) {
        best = &g.edges[e];
        break;
      }
    if (!best) throw std::logic_error("nodes are not adjacent");
    if (best->u == a) {
      out.insert(out.end(), best->path.begin(), best->path.end());
    } else {
      for (auto it = best->path.rbegin(); it != best->path.rend(); ++it) out.push_back(it->reversed());
    }
  }
  return out;
}

namespace {

using EdgeFilter = std::function<bool(const MotionEdge&)>;

bool blockersFree(const MotionEdge& e, const Occupancy& occ, std::size_t mover) {
  for (std::size_t b : e.blockers)
    if (b != mover && occ.occupied[b]) return false;
  return true;
}

// Breadth-first tree from `from` over edges accepted by `ok`; neighbours in
// edge-id order, so ties resolve deterministically.
struct Bfs {
  std::vector<std::size_t> dist, via;
};

Bfs bfs(const MotionGraph& g, std::size_t from, const EdgeFilter& ok) {
  Bfs r{std::vector<std::size_t>(g.nodes.size(), kNone), std::vector<std::size_t>(g.nodes.size(), kNone)};
  std::deque<std::size_t> q{from};
  r.dist[from] = 0;
  while (!q.empty()) {
    const std::size_t w = q.front();
    q.pop_front();
    for (std::size_t e : g.incident[w]) {
      if (!ok(g.edges[e])) continue;
      const std::size_t o = g.edges[e].other(w);
      if (r.dist[o] != kNone) continue;
      r.dist[o] = r.dist[w] + 1;
      r.via[o] = e;
      q.push_back(o);
    }
  }
  return r;
}

std::vector<std::size_t> nodePath(const MotionGraph& g, const Bfs& b, std::size_t from, std::size_t to) {
  std::vector<std::size_t> nodes{to};
  for (std::size_t w = to; w != from; w = g.edges[b.via[w]].other(w)) nodes.push_back(g.edges[b.via[w]].other(w));
  std::reverse(nodes.begin(), nodes.end());
  return nodes;
}

// Far-end-first shifting along a fixed node path; nullopt if some step would
// use an edge whose blocker is occupied at that moment.
std::optional<std::vector<Move>> shiftAlong(const MotionGraph& g, Occupancy& occ,
                                            const std::vector<std::size_t>& nodes, std::size_t* badEdge) {
  Occupancy o = occ;
  std::vector<Move> moves;
  std::size_t T = nodes.size() - 1;
  while (T > 0) {
    std::size_t i = T - 1;
    while (!o.occupied[nodes[i]]) --i;  // nodes[0] is occupied
    for (std::size_t k = i; k < T; ++k) {
      const std::size_t a = nodes[k], b = nodes[k + 1];
      for (std::size_t e : g.incident[a])
        if (g.edges[e].other(a) == b && !blockersFree(g.edges[e], o, nodes[i])) {
          if (badEdge) *badEdge = e;
          return std::nullopt;
        }
    }
    const std::vector<std::size_t> seg(nodes.begin() + static_cast<std::ptrdiff_t>(i),
                                       nodes.begin() + static_cast<std::ptrdiff_t>(T) + 1);
    moves.push_back({g.nodes[nodes[i]].position, g.nodes[nodes[T]].position, concatEdgePaths(g, seg)});
    o.occupied[nodes[i]] = 0;
    o.occupied[nodes[T]] = 1;
    T = i;
  }
  occ = o;
  return moves;
}

}  // namespace

std::vector<Move> chainMove(const MotionGraph& g, Occupancy& occ, std::size_t from, std::size_t to,
                            const BlockerPredicate& allow) {
  if (from == to) return {};
  if (!occ.occupied[from] || occ.occupied[to]) throw std::logic_error("chain move needs an occupied origin and a free end");
  std::set<std::size_t> banned;
  for (int attempt = 0; attempt < 8; ++attempt) {
    auto ok = [&](const MotionEdge& e) {
      return !banned.count(static_cast<std::size_t>(&e - g.edges.data())) && (!allow || allow(e)) &&
             blockersFree(e, occ, from);
    };
    const Bfs b = bfs(g, from, ok);
    if (b.dist[to] == kNone) break;
    std::size_t bad = kNone;
    if (auto moves = shiftAlong(g, occ, nodePath(g, b, from, to), &bad)) return *moves;
    banned.insert(bad);
  }
  throw NoPath("no usable motion-graph path for the chain move");
}

namespace {

class Solver {
 public:
  Solver(const ComponentAnalysis& ca, const MotionGraph& g, const std::vector<char>& goal)
      : ca_(ca), g_(g), goal_(goal) {
    const std::size_t N = g.nodes.size();
    occ_.occupied.assign(N, 0);
    for (std::size_t i = 0; i < g.startCount; ++i) occ_.occupied[i] = 1;
    hnode_.resize(N);
    for (std::size_t i = 0; i < g.startCount; ++i) hnode_[i] = ca.H.startNode[i];
    for (std::size_t i = 0; i < ca.targets.size(); ++i) hnode_[g.targetNode(i)] = ca.H.targetNode[i];
    isBlocker_.assign(N, 0);
    for (const auto& e : g.edges)
      for (std::size_t b : e.blockers) isBlocker_[b] = 1;
  }

  std::vector<Move> run() {
    ChargedTree all;
    all.nodes.resize(ca_.H.nodeCount);
    std::iota(all.nodes.begin(), all.nodes.end(), 0);
    for (const auto& e : ca_.H.edges) all.edges.push_back({e.u, e.v});
    std::deque<ChargedTree> work{all};
    while (!work.empty()) {
      ChargedTree part = std::move(work.front());
      work.pop_front();
      part.charge = charges();
      if (part.nodes.size() == 1) {
        solveSink(part.nodes[0], {}, part);
        continue;
      }
      auto pieces = cutZeroChargeEdges(part);
      if (pieces.size() > 1) {
        for (auto& p : pieces) work.push_back(std::move(p));
        continue;
      }
      const std::size_t sigma = findSink(part);
      solveSink(sigma, inbound(part, sigma), part);
      std::vector<char> removed(part.edges.size(), 0);
      for (std::size_t e = 0; e < part.edges.size(); ++e)
        removed[e] = part.edges[e].first == sigma || part.edges[e].second == sigma;
      for (auto& p : splitBy(part, removed))
        if (!(p.nodes.size() == 1 && p.nodes[0] == sigma)) work.push_back(std::move(p));
    }
    return std::move(moves_);
  }

 private:
  struct Inbound {
    std::size_t blocker;            // G node of the blocker target
    std::vector<std::size_t> side;  // residual ids behind the edge
    int count;
  };

  std::vector<int> charges() const {
    std::vector<int> q(ca_.H.nodeCount, 0);
    for (std::size_t n = 0; n < g_.nodes.size(); ++n) q[hnode_[n]] += occ_.occupied[n] - goal_[n];
    return q;
  }

  std::vector<Inbound> inbound(const ChargedTree& part, std::size_t sigma) const {
    std::vector<Inbound> out;
    for (std::size_t e = 0; e < part.edges.size(); ++e) {
      const auto [a, b] = part.edges[e];
      if (a != sigma && b != sigma) continue;
      const std::size_t o = a == sigma ? b : a;
      Inbound in;
      in.side = side(part, o, e);
      in.count = chargeOf(part, in.side);
      in.blocker = kNone;
      for (const auto& he : ca_.H.edges)
        if ((he.u == a && he.v == b) || (he.u == b && he.v == a)) in.blocker = g_.targetNode(he.blocker);
      out.push_back(std::move(in));
    }
    return out;
  }

  EdgeFilter within(std::vector<std::size_t> residual) const {
    std::sort(residual.begin(), residual.end());
    return [this, residual](const MotionEdge& e) {
      return std::binary_search(residual.begin(), residual.end(), hnode_[e.u]) &&
             std::binary_search(residual.begin(), residual.end(), hnode_[e.v]);
    };
  }

  void emit(std::vector<Move> m) {
    for (auto& x : m) moves_.push_back(std::move(x));
  }

  // Nearest free goal in `area` reachable from `from`; non-blocker goals first.
  std::size_t nearestFreeGoal(std::size_t from, const EdgeFilter& f, std::size_t avoid = kNone) const {
    const Bfs b = bfs(g_, from, [&](const MotionEdge& e) { return f(e) && blockersFree(e, occ_, from); });
    std::size_t best = kNone;
    auto better = [&](std::size_t n) {
      if (best == kNone) return true;
      if (isBlocker_[n] != isBlocker_[best]) return !isBlocker_[n];
      if (b.dist[n] != b.dist[best]) return b.dist[n] < b.dist[best];
      return n < best;
    };
    for (std::size_t n = 0; n < g_.nodes.size(); ++n)
      if (goal_[n] && !occ_.occupied[n] && n != avoid && b.dist[n] != kNone && better(n)) best = n;
    return best;
  }

  // Chain move, or a two-step move through a free non-goal node when the
  // direct chain would refill a blocker too early.
  bool tryMove(std::size_t from, std::size_t to, const EdgeFilter& f, const std::vector<std::size_t>& landing) {
    try {
      emit(chainMove(g_, occ_, from, to, f));
      return true;
    } catch (const NoPath&) {
    }
    for (std::size_t mid : landing) {
      if (occ_.occupied[mid] || mid == to) continue;
      Occupancy saved = occ_;
      try {
        auto a = chainMove(g_, occ_, from, mid, f);
        auto b = chainMove(g_, occ_, mid, to, f);
        emit(std::move(a));
        emit(std::move(b));
        return true;
      } catch (const NoPath&) {
        occ_ = saved;
      }
    }
    return false;
  }

  void solveSink(std::size_t sigma, const std::vector<Inbound>& in, const ChargedTree&) {
    const EdgeFilter inSigma = within({sigma});
    std::vector<std::size_t> sigmaNodes;
    for (std::size_t n = 0; n < g_.nodes.size(); ++n)
      if (hnode_[n] == sigma) sigmaNodes.push_back(n);
    std::vector<std::size_t> landing;
    for (std::size_t n : sigmaNodes)
      if (!goal_[n]) landing.push_back(n);

    // Phase 1: robots on plain starts inside σ go to free goals inside σ.
    for (bool progress = true; progress;) {
      progress = false;
      for (std::size_t n : sigmaNodes) {
        if (!occ_.occupied[n] || goal_[n]) continue;
        const std::size_t t = nearestFreeGoal(n, inSigma);
        if (t == kNone) continue;
        if (!tryMove(n, t, inSigma, landing)) throw PlanningFailed("robot cannot reach a free target in its sink");
        progress = true;
      }
    }
    for (std::size_t n : sigmaNodes)
      if (occ_.occupied[n] && !goal_[n]) throw PlanningFailed("sink has more robots than targets");

    // Phase 2: import robots across each inbound blocking area.
    for (const Inbound& e : in) {
      std::vector<std::size_t> area = e.side;
      area.push_back(sigma);
      const EdgeFilter inArea = within(area);
      std::vector<std::size_t> sideSorted = e.side;
      std::sort(sideSorted.begin(), sideSorted.end());
      for (int r = 0; r < e.count; ++r) {
        const bool blockerInSigma = e.blocker != kNone && hnode_[e.blocker] == sigma;
        std::vector<std::size_t> freeGoals;
        for (std::size_t n : sigmaNodes)
          if (goal_[n] && !occ_.occupied[n]) freeGoals.push_back(n);
        if (freeGoals.empty()) throw PlanningFailed("sink has no free target for an import");
        if (blockerInSigma && occ_.occupied[e.blocker]) {
          const std::size_t dest = nearestFreeGoal(e.blocker, inSigma, e.blocker);
          if (dest == kNone || !tryMove(e.blocker, dest, inSigma, landing))
            throw PlanningFailed("cannot evict the robot on a blocker");
          freeGoals.erase(std::find(freeGoals.begin(), freeGoals.end(), dest));
          freeGoals.push_back(e.blocker);
        }
        // Blocker last, then non-blocker goals first, then by index.
        std::stable_sort(freeGoals.begin(), freeGoals.end(), [&](std::size_t a, std::size_t b) {
          const int ka = (a == e.blocker) * 2 + isBlocker_[a], kb = (b == e.blocker) * 2 + isBlocker_[b];
          return ka != kb ? ka < kb : a < b;
        });
        const std::size_t tg = freeGoals.front();
        // Source: an occupied node behind the edge, plain starts first.
        const Bfs b = bfs(g_, tg, inArea);
        std::size_t src = kNone;
        for (std::size_t n = 0; n < g_.nodes.size(); ++n) {
          if (!occ_.occupied[n] || !std::binary_search(sideSorted.begin(), sideSorted.end(), hnode_[n])) continue;
          if (b.dist[n] == kNone) continue;
          if (src == kNone || (goal_[n] != goal_[src] ? !goal_[n] : b.dist[n] < b.dist[src])) src = n;
        }
        if (src == kNone) throw PlanningFailed("no robot can be imported across a blocking area");
        if (!tryMove(src, tg, inArea, landing)) throw PlanningFailed("import across a blocking area failed");
      }
    }
  }

  const ComponentAnalysis& ca_;
  const MotionGraph& g_;
  const std::vector<char>& goal_;
  Occupancy occ_;
  std::vector<std::size_t> hnode_;
  std::vector<char> isBlocker_;
  std::vector<Move> moves_;
};

}  // namespace

MotionPlan solveComponent(const Region& Fi, std::span<const Point> S, std::span<const Point> T) {
  if (auto v = validateSingleComponent(Fi, S, T); !v.empty()) throw PreconditionViolation(std::move(v));
  MotionPlan plan;
  if (S.empty()) return plan;
  const ClosePairs pairs = mergeClosePairs(S, T);
  std::vector<Point> kept;
  for (std::size_t j : pairs.keptTargets) kept.push_back(T[j]);
  std::vector<std::optional<Point>> merged(S.size());
  for (std::size_t i = 0; i < S.size(); ++i)
    if (pairs.targetOf[i]) merged[i] = T[*pairs.targetOf[i]];

  const ComponentAnalysis ca = analyzeComponent(Fi, S, kept);
  const MotionGraph g = buildMotionGraph(ca, merged);
  std::vector<char> goal(g.nodes.size(), 0);
  for (std::size_t i = 0; i < S.size(); ++i) goal[i] = merged[i].has_value();
  for (std::size_t i = 0; i < kept.size(); ++i) goal[g.targetNode(i)] = 1;

  Solver solver(ca, g, goal);
  plan.moves = solver.run();

  // Settlement of close pairs inside the two auras.
  for (std::size_t i = 0; i < S.size(); ++i) {
    if (!merged[i] || geom::near(S[i], *merged[i], 1e-12)) continue;
    const Region a = geom::disc(S[i], kAuraRadius), b = geom::disc(*merged[i], kAuraRadius);
    const std::vector<const Region*> ops{&Fi, &a, &b};
    const Region lens = geom::overlay(ops, [](std::span<const bool> m) { return m[0] && m[1] && m[2]; });
    auto path = geom::routeInRegion(lens, S[i], *merged[i]);
    if (!path) throw PlanningFailed("no settlement path inside the pair's auras");
    plan.moves.push_back({S[i], *merged[i], std::move(*path)});
  }
  return plan;
}

}  // namespace mrmp
