#include "mrmp/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <sstream>

#include "mrmp/freespace.hpp"

namespace mrmp {

using geom::ArcSeg;

const char* violationName(ViolationKind k) {
  switch (k) {
    case ViolationKind::Mu: return "muViolation";
    case ViolationKind::Beta: return "betaViolation";
    case ViolationKind::Charge: return "chargeViolation";
    case ViolationKind::OutsideFreeSpace: return "outsideFreeSpace";
    case ViolationKind::PathObstacleCollision: return "pathObstacleCollision";
    case ViolationKind::PathRobotCollision: return "pathRobotCollision";
    case ViolationKind::Discontinuity: return "discontinuity";
    case ViolationKind::WrongFinalSet: return "wrongFinalSet";
    case ViolationKind::WrongStartSet: return "wrongStartSet";
    case ViolationKind::MalformedWorkspace: return "malformedWorkspace";
    case ViolationKind::InterferenceCycle: return "interferenceCycle";
  }
  return "unknown";
}

const char* oracleName(OracleResult r) {
  switch (r) {
    case OracleResult::Solvable: return "solvable";
    case OracleResult::Unsolvable: return "unsolvable";
    case OracleResult::Unknown: return "unknown";
  }
  return "unknown";
}

double verificationSlack() {
  if (const char* env = std::getenv("MRMP_EPS")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end != env && v >= 0 && std::isfinite(v)) return v;
  }
  return 1e-6;
}

namespace {

std::vector<ArcSeg> polygonEdges(const std::vector<Point>& poly) {
  std::vector<ArcSeg> out;
  for (std::size_t i = 0; i < poly.size(); ++i) out.push_back(ArcSeg::segment(poly[i], poly[(i + 1) % poly.size()]));
  return out;
}

bool insidePolygon(const std::vector<Point>& poly, Point p) {
  bool in = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const Point a = poly[i], b = poly[j];
    if ((a.y > p.y) != (b.y > p.y) && p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x) in = !in;
  }
  return in;
}

double boundaryDistance(const std::vector<ArcSeg>& edges, Point p) {
  double d = 1e300;
  for (const auto& e : edges) d = std::min(d, e.distanceTo(p));
  return d;
}

std::string fmt(const char* what, double v) {
  std::ostringstream os;
  os << what << " " << v;
  return os.str();
}

}  // namespace

std::vector<Violation> checkInstance(const Instance& inst, Separation sep) {
  std::vector<Violation> out;
  const double tau = verificationSlack();
  if (auto d = polygonDefect(inst.workspace); !d.empty()) {
    out.push_back({ViolationKind::MalformedWorkspace, d, {}, {}, 0});
    return out;
  }
  const auto edges = polygonEdges(inst.workspace);
  auto checkInside = [&](const std::vector<Point>& pts, const char* what) {
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const double d = insidePolygon(inst.workspace, pts[i]) ? boundaryDistance(edges, pts[i]) : -1.0;
      if (d < 1 - tau)
        out.push_back({ViolationKind::OutsideFreeSpace, fmt(what, static_cast<double>(i)) + " has clearance " +
                                                            std::to_string(d),
                       {i}, {pts[i]}, d});
    }
  };
  checkInside(inst.starts, "start");
  checkInside(inst.targets, "target");
  auto mono = [&](const std::vector<Point>& pts, const char* what) {
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = i + 1; j < pts.size(); ++j) {
        const double d = geom::dist(pts[i], pts[j]);
        if (d < sep.mu - tau)
          out.push_back({ViolationKind::Mu, std::string(what) + " pair closer than " + std::to_string(sep.mu),
                         {i, j}, {pts[i], pts[j]}, d});
      }
  };
  mono(inst.starts, "start");
  mono(inst.targets, "target");

  std::vector<Region> comps;
  try {
    comps = computeFreeSpace(inst.workspace).components;
  } catch (const EmptyFreeSpace&) {
  }
  if (comps.size() >= 2) {
    for (std::size_t i = 0; i < inst.starts.size(); ++i)
      for (std::size_t j = 0; j < inst.targets.size(); ++j) {
        const double d = geom::dist(inst.starts[i], inst.targets[j]);
        if (d < sep.betaMulti - tau)
          out.push_back({ViolationKind::Beta, "start-target pair closer than " + std::to_string(sep.betaMulti),
                         {i, j}, {inst.starts[i], inst.targets[j]}, d});
      }
  }
  std::vector<long> charge(comps.size(), 0);
  long unplaced = 0;
  auto tally = [&](const std::vector<Point>& pts, int sign) {
    for (const Point& p : pts) {
      bool found = false;
      for (std::size_t c = 0; c < comps.size() && !found; ++c)
        if (geom::pointInRegion(p, comps[c], tau) != geom::Where::Outside) {
          charge[c] += sign;
          found = true;
        }
      if (!found) unplaced += sign;
    }
  };
  tally(inst.starts, +1);
  tally(inst.targets, -1);
  for (std::size_t c = 0; c < comps.size(); ++c)
    if (charge[c] != 0)
      out.push_back({ViolationKind::Charge, fmt("component charge", static_cast<double>(charge[c])), {c}, {},
                     static_cast<double>(charge[c])});
  if (comps.empty() && inst.starts.size() != inst.targets.size())
    out.push_back({ViolationKind::Charge, "start and target counts differ", {}, {},
                   static_cast<double>(inst.starts.size()) - static_cast<double>(inst.targets.size())});
  (void)unplaced;
  return out;
}

std::vector<Violation> checkPlan(const Instance& inst, const MotionPlan& plan) {
  std::vector<Violation> out;
  const double tau = verificationSlack();
  const auto edges = polygonEdges(inst.workspace);
  std::vector<Point> occ = inst.starts;
  auto findOcc = [&](Point p) -> std::size_t {
    std::size_t best = occ.size();
    double bd = tau;
    for (std::size_t k = 0; k < occ.size(); ++k) {
      const double d = geom::dist(occ[k], p);
      if (d <= bd) {
        bd = d;
        best = k;
      }
    }
    return best;
  };
  for (std::size_t i = 0; i < plan.moves.size(); ++i) {
    const Move& mv = plan.moves[i];
    const std::size_t j = findOcc(mv.from);
    if (j == occ.size()) {
      out.push_back({ViolationKind::WrongStartSet, "move starts at an unoccupied position", {i}, {mv.from}, 0});
      continue;
    }
    if (const std::size_t k = findOcc(mv.to); k != occ.size() && k != j)
      out.push_back({ViolationKind::PathRobotCollision, "move ends on an occupied position", {i, k}, {mv.to}, 0});
    if (mv.path.empty()) {
      if (!geom::near(mv.from, mv.to, tau))
        out.push_back({ViolationKind::Discontinuity, "empty path between distinct points", {i}, {mv.from, mv.to},
                       geom::dist(mv.from, mv.to)});
    } else {
      auto gap = [&](Point a, Point b, const char* where) {
        const double d = geom::dist(a, b);
        if (d > tau) out.push_back({ViolationKind::Discontinuity, where, {i}, {a, b}, d});
      };
      gap(mv.from, mv.path.front().a, "path does not start at the move origin");
      gap(mv.path.back().b, mv.to, "path does not end at the move destination");
      for (std::size_t e = 1; e < mv.path.size(); ++e) gap(mv.path[e - 1].b, mv.path[e].a, "gap inside path");
      double worst = 1e300;
      for (const auto& piece : mv.path) {
        for (const auto& w : edges) worst = std::min(worst, geom::distance(piece, w));
        if (!insidePolygon(inst.workspace, piece.a)) worst = -1;
      }
      if (worst < 1 - tau)
        out.push_back({ViolationKind::PathObstacleCollision, fmt("path clearance to the workspace", worst), {i},
                       {}, worst});
      for (std::size_t k = 0; k < occ.size(); ++k) {
        if (k == j) continue;
        const double d = geom::pathClearance(mv.path, occ[k]);
        if (d < 2 - tau)
          out.push_back({ViolationKind::PathRobotCollision, fmt("path passes a parked robot at distance", d),
                         {i, k}, {occ[k]}, d});
      }
    }
    occ[j] = mv.to;
  }
  // Final set: every target covered by exactly one robot.
  std::vector<char> used(occ.size(), 0);
  bool ok = occ.size() == inst.targets.size();
  for (const Point& t : inst.targets) {
    bool hit = false;
    for (std::size_t k = 0; k < occ.size() && !hit; ++k)
      if (!used[k] && geom::dist(occ[k], t) <= tau) {
        used[k] = 1;
        hit = true;
      }
    ok = ok && hit;
  }
  if (!ok) out.push_back({ViolationKind::WrongFinalSet, "final robot positions differ from the targets", {}, {}, 0});
  return out;
}

namespace {

// Grid graph for the oracle: nodes are grid points plus the instance
// positions; robots move one at a time along graph edges.
struct OracleGraph {
  std::vector<Point> nodes;
  std::vector<std::vector<std::size_t>> adj;
  std::vector<std::size_t> starts, targets;
};

OracleGraph buildOracleGraph(const Instance& inst, double h, bool conservative) {
  OracleGraph g;
  const auto edges = polygonEdges(inst.workspace);
  const geom::Box b = geom::boundsOf(inst.workspace);
  const double need = conservative ? 1.0 : 1.0 - h;
  const int nx = static_cast<int>(std::floor((b.xmax - b.xmin) / h)) + 1;
  const int ny = static_cast<int>(std::floor((b.ymax - b.ymin) / h)) + 1;
  std::vector<long> id(static_cast<std::size_t>(nx) * ny, -1);
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) {
      const Point p{b.xmin + i * h, b.ymin + j * h};
      if (!insidePolygon(inst.workspace, p) || boundaryDistance(edges, p) < need) continue;
      id[static_cast<std::size_t>(i) * ny + j] = static_cast<long>(g.nodes.size());
      g.nodes.push_back(p);
    }
  g.adj.assign(g.nodes.size(), {});
  auto segOk = [&](Point p, Point q) {
    if (!conservative) return true;
    const ArcSeg s = ArcSeg::segment(p, q);
    for (const auto& w : edges)
      if (geom::distance(s, w) < 1.0) return false;
    return true;
  };
  auto link = [&](std::size_t a, std::size_t c) {
    if (!segOk(g.nodes[a], g.nodes[c])) return;
    g.adj[a].push_back(c);
    g.adj[c].push_back(a);
  };
  const int di[] = {1, 0, 1, 1}, dj[] = {0, 1, 1, -1};
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) {
      const long a = id[static_cast<std::size_t>(i) * ny + j];
      if (a < 0) continue;
      for (int d = 0; d < 4; ++d) {
        const int i2 = i + di[d], j2 = j + dj[d];
        if (i2 < 0 || i2 >= nx || j2 < 0 || j2 >= ny) continue;
        const long c = id[static_cast<std::size_t>(i2) * ny + j2];
        if (c >= 0) link(static_cast<std::size_t>(a), static_cast<std::size_t>(c));
      }
    }
  const std::size_t gridCount = g.nodes.size();
  auto attach = [&](Point p) {
    const std::size_t k = g.nodes.size();
    g.nodes.push_back(p);
    g.adj.emplace_back();
    for (std::size_t a = 0; a < gridCount; ++a)
      if (geom::dist(g.nodes[a], p) <= 1.5 * h) link(a, k);
    return k;
  };
  for (const Point& s : inst.starts) g.starts.push_back(attach(s));
  for (const Point& t : inst.targets) g.targets.push_back(attach(t));
  return g;
}

// Breadth-first search over unordered robot configurations.
std::optional<bool> reachable(const OracleGraph& g, double h, bool conservative, std::size_t budget) {
  const std::size_t N = g.nodes.size();
  const std::size_t m = g.starts.size();
  const double sep = conservative ? 2.0 : 2.0 - 2 * h;
  if (m == 1) {
    std::vector<char> seen(N, 0);
    std::deque<std::size_t> q{g.starts[0]};
    seen[g.starts[0]] = 1;
    while (!q.empty()) {
      const std::size_t a = q.front();
      q.pop_front();
      if (a == g.targets[0]) return true;
      for (std::size_t c : g.adj[a])
        if (!seen[c]) {
          seen[c] = 1;
          q.push_back(c);
        }
    }
    return false;
  }
  if (N * N > budget) return std::nullopt;
  auto key = [&](std::size_t a, std::size_t b) { return a < b ? a * N + b : b * N + a; };
  std::vector<bool> seen(N * N, false);
  std::deque<std::pair<std::size_t, std::size_t>> q;
  const auto goal = key(g.targets[0], g.targets[1]);
  seen[key(g.starts[0], g.starts[1])] = true;
  q.push_back({g.starts[0], g.starts[1]});
  auto moveOk = [&](Point from, Point to, Point other) {
    if (conservative) return geom::ArcSeg::segment(from, to).distanceTo(other) >= sep;
    return geom::dist(to, other) >= sep;
  };
  while (!q.empty()) {
    const auto [a, b] = q.front();
    q.pop_front();
    if (key(a, b) == goal) return true;
    for (int r = 0; r < 2; ++r) {
      const std::size_t mover = r == 0 ? a : b, other = r == 0 ? b : a;
      for (std::size_t c : g.adj[mover]) {
        if (c == other || !moveOk(g.nodes[mover], g.nodes[c], g.nodes[other])) continue;
        const auto k = key(c, other);
        if (seen[k]) continue;
        seen[k] = true;
        q.push_back({c, other});
      }
    }
  }
  return false;
}

}  // namespace

OracleResult bruteForceOracle(const Instance& inst, double h) {
  const std::size_t m = inst.starts.size();
  if (m == 0 || m > 2 || inst.targets.size() != m || !polygonDefect(inst.workspace).empty())
    return OracleResult::Unknown;
  const geom::Box b = geom::boundsOf(inst.workspace);
  if (b.xmax - b.xmin > 20 + 1e-9 || b.ymax - b.ymin > 20 + 1e-9) return OracleResult::Unknown;
  constexpr std::size_t kBudget = 200'000'000;
  const auto cons = reachable(buildOracleGraph(inst, h, true), h, true, kBudget);
  if (cons && *cons) return OracleResult::Solvable;
  const auto opt = reachable(buildOracleGraph(inst, h, false), h, false, kBudget);
  if (opt && !*opt) return OracleResult::Unsolvable;
  return OracleResult::Unknown;
}

}  // namespace mrmp
