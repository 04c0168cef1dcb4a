#include "mrmp/multiplan.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <set>
#include <string>

#include "mrmp/motiongraph.hpp"
#include "mrmp/planner.hpp"
#include "mrmp/verifier.hpp"

namespace mrmp {

namespace {

constexpr double kClearTol = 1e-9;

double distanceToRegion(const Region& r, Point p) {
  double d = std::numeric_limits<double>::infinity();
  r.forEachElement([&](const ArcSeg& e) { d = std::min(d, e.distanceTo(p)); });
  return d;
}

void collect(const FreeSpace& fs, std::span<const Point> P, bool isStart,
             std::vector<InterferenceRecord>& out) {
  for (std::size_t i = 0; i < P.size(); ++i) {
    const auto own = fs.componentOf(P[i]);
    if (!own) continue;
    for (std::size_t c = 0; c < fs.components.size(); ++c) {
      if (c == *own) continue;
      const Region& other = fs.components[c];
      if (!other.bbox().overlaps(geom::Box{P[i].x, P[i].y, P[i].x, P[i].y}, kAuraRadius)) continue;
      if (distanceToRegion(other, P[i]) >= kAuraRadius - kClearTol) continue;
      InterferenceRecord rec;
      rec.source = P[i];
      rec.isStart = isStart;
      rec.index = i;
      rec.sourceComponent = *own;
      rec.targetComponent = c;
      rec.isRemoteBlocker = geom::boundaryComponentsInDisc(other, P[i], kAuraRadius).size() >= 2;
      out.push_back(rec);
    }
  }
}

// Arc piece of path parameters: global parameter = piece index + local u.
struct Crossing {
  std::size_t piece;
  double u;
  Point p;
};

std::vector<Crossing> auraCrossings(std::span<const ArcSeg> path, Point x) {
  const ArcSeg ring = ArcSeg::circle(x, kAuraRadius);
  std::vector<Crossing> out;
  for (std::size_t k = 0; k < path.size(); ++k)
    for (const auto& h : geom::intersect(path[k], ring)) out.push_back({k, h.ua, h.p});
  std::sort(out.begin(), out.end(), [](const Crossing& a, const Crossing& b) {
    return a.piece != b.piece ? a.piece < b.piece : a.u < b.u;
  });
  return out;
}

bool arcInside(const ArcSeg& arc, const Region& F) {
  bool crosses = false;
  F.forEachElement([&](const ArcSeg& e) {
    if (crosses) return;
    for (const auto& h : geom::intersect(arc, e))
      if (h.ua > 1e-9 && h.ua < 1 - 1e-9) crosses = true;
  });
  if (crosses) return false;
  for (double u : {0.25, 0.5, 0.75})
    if (geom::pointInRegion(arc.at(u), F, 1e-7) == geom::Where::Outside) return false;
  return true;
}

bool clearOf(std::span<const ArcSeg> path, std::span<const Point> others, std::optional<Point> skip = {}) {
  for (Point y : others) {
    if (skip && geom::near(y, *skip, 1e-12)) continue;
    if (geom::pathClearance(path, y) < kAuraRadius - kClearTol) return false;
  }
  return true;
}

// Splices the shorter valid aura arc over the first entry..last exit of x.
std::optional<std::vector<ArcSeg>> spliceAround(const std::vector<ArcSeg>& path, Point x,
                                                const Region& F, std::span<const Point> others) {
  const auto cr = auraCrossings(path, x);
  if (cr.size() < 2) return std::nullopt;
  const Crossing& in = cr.front();
  const Crossing& out = cr.back();
  std::optional<ArcSeg> best;
  for (double dir : {geom::kPi, -geom::kPi}) {
    const ArcSeg arc = ArcSeg::arcBetween(x, kAuraRadius, in.p, out.p, dir);
    if (!arcInside(arc, F)) continue;
    const ArcSeg one[] = {arc};
    if (!clearOf(one, others, x)) continue;
    if (!best || arc.length() < best->length()) best = arc;
  }
  if (!best) return std::nullopt;
  std::vector<ArcSeg> res(path.begin(), path.begin() + static_cast<std::ptrdiff_t>(in.piece));
  res.push_back(path[in.piece].sub(0, in.u));
  res.back().b = best->a;
  res.push_back(*best);
  ArcSeg tail = path[out.piece].sub(out.u, 1);
  tail.a = best->b;
  res.push_back(tail);
  res.insert(res.end(), path.begin() + static_cast<std::ptrdiff_t>(out.piece) + 1, path.end());
  return geom::simplifyPath(std::move(res));
}

}  // namespace

std::vector<InterferenceRecord> interferenceSets(const FreeSpace& fs, std::span<const Point> S,
                                                 std::span<const Point> T) {
  std::vector<InterferenceRecord> out;
  if (fs.components.size() < 2) return out;
  collect(fs, S, true, out);
  collect(fs, T, false, out);
  return out;
}

InterferenceForest interferenceForest(std::span<const InterferenceRecord> records, std::size_t componentCount) {
  std::set<std::pair<std::size_t, std::size_t>> edges;
  for (const auto& r : records) {
    if (!r.isRemoteBlocker) continue;
    // A blocking start must leave first; a blocking target must be filled last.
    if (r.isStart)
      edges.insert({r.sourceComponent, r.targetComponent});
    else
      edges.insert({r.targetComponent, r.sourceComponent});
  }
  return {componentCount, {edges.begin(), edges.end()}};
}

std::vector<std::size_t> buildOrder(const InterferenceForest& forest) {
  std::vector<std::size_t> indeg(forest.nodeCount, 0);
  std::vector<std::vector<std::size_t>> succ(forest.nodeCount);
  for (auto [u, v] : forest.edges) {
    succ[u].push_back(v);
    ++indeg[v];
  }
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t v = 0; v < forest.nodeCount; ++v)
    if (indeg[v] == 0) ready.push(v);
  std::vector<std::size_t> order;
  while (!ready.empty()) {
    const std::size_t u = ready.top();
    ready.pop();
    order.push_back(u);
    for (std::size_t v : succ[u])
      if (--indeg[v] == 0) ready.push(v);
  }
  if (order.size() != forest.nodeCount) {
    std::string msg = "interference cycle among components";
    for (std::size_t v = 0; v < forest.nodeCount; ++v)
      if (indeg[v] > 0) msg += " " + std::to_string(v);
    throw CycleDetected(msg);
  }
  return order;
}

Move detourAroundAuras(const Move& move, std::span<const Point> parked, const Region& Fcur,
                       std::span<const Point> avoid) {
  std::vector<Point> others(parked.begin(), parked.end());
  others.insert(others.end(), avoid.begin(), avoid.end());
  std::vector<ArcSeg> path = move.path;
  bool ok = true;
  for (std::size_t round = 0; round <= parked.size() && ok; ++round) {
    const auto hit = std::find_if(parked.begin(), parked.end(), [&](Point x) {
      return geom::pathClearance(path, x) < kAuraRadius - kClearTol;
    });
    if (hit == parked.end()) return {move.from, move.to, std::move(path)};
    auto spliced = spliceAround(path, *hit, Fcur, others);
    if (!spliced) ok = false;
    else path = std::move(*spliced);
  }
  if (ok && clearOf(path, parked)) return {move.from, move.to, std::move(path)};
  auto reroute = clearPath(Fcur, move.from, move.to, others);
  if (!reroute) throw DetourImpossible("no path avoiding the parked robots");
  return {move.from, move.to, std::move(*reroute)};
}

MultiPlan solveAllDetailed(const Instance& inst) {
  if (const std::string d = polygonDefect(inst.workspace); !d.empty())
    throw PreconditionViolation({{ViolationKind::MalformedWorkspace, d, {}, {}, 0.0}});
  MultiPlan out;
  out.freeSpace = computeFreeSpace(inst.workspace);
  const FreeSpace& fs = out.freeSpace;
  if (fs.components.size() <= 1) {
    const Region& Fi = fs.components.empty() ? fs.region : fs.components.front();
    out.plan = solveComponent(Fi, inst.starts, inst.targets);
    out.order = {0};
    return out;
  }
  if (auto v = checkInstance(inst); !v.empty()) throw PreconditionViolation(std::move(v));

  out.records = interferenceSets(fs, inst.starts, inst.targets);
  try {
    out.order = buildOrder(interferenceForest(out.records, fs.components.size()));
  } catch (const CycleDetected& e) {
    throw PreconditionViolation({{ViolationKind::InterferenceCycle, e.what(), {}, {}, 0.0}});
  }

  const std::size_t k = fs.components.size();
  std::vector<std::vector<Point>> S(k), T(k);
  for (Point s : inst.starts) S[*fs.componentOf(s)].push_back(s);
  for (Point t : inst.targets) T[*fs.componentOf(t)].push_back(t);

  std::vector<char> done(k, 0);
  for (std::size_t c : out.order) {
    if (S[c].empty()) {
      done[c] = 1;
      continue;
    }
    std::vector<Point> parked;
    for (std::size_t o = 0; o < k; ++o) {
      if (o == c) continue;
      const auto& src = done[o] ? T[o] : S[o];
      parked.insert(parked.end(), src.begin(), src.end());
    }
    const MotionPlan local = solveComponent(fs.components[c], S[c], T[c]);
    std::vector<Point> occupied = S[c];
    for (const Move& m : local.moves) {
      auto me = std::find_if(occupied.begin(), occupied.end(),
                             [&](Point p) { return geom::near(p, m.from, 1e-9); });
      std::vector<Point> avoid;
      for (auto it = occupied.begin(); it != occupied.end(); ++it)
        if (it != me) avoid.push_back(*it);
      out.plan.moves.push_back(detourAroundAuras(m, parked, fs.components[c], avoid));
      if (me != occupied.end()) *me = m.to;
    }
    done[c] = 1;
  }
  return out;
}

MotionPlan solveAll(const Instance& inst) { return solveAllDetailed(inst).plan; }

}  // namespace mrmp
