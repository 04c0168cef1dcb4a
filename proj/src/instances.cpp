#include "mrmp/instance.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "json.hpp"
#include "mrmp/freespace.hpp"

namespace mrmp {

using json = nlohmann::ordered_json;

namespace {

const char* expectedName(Expected e) {
  return e == Expected::Solvable ? "solvable" : "preconditionViolation";
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ParseError(path, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ParseError(path, "coordinate is not finite");
  return d;
}

std::vector<Point> pointList(const json& root, const char* key, std::size_t minCount) {
  const std::string base = key;
  if (!root.contains(key)) throw ParseError(base, "missing field");
  const json& arr = root.at(key);
  if (!arr.is_array()) throw ParseError(base, "expected an array of [x, y] pairs");
  if (arr.size() < minCount)
    throw ParseError(base, "needs at least " + std::to_string(minCount) + " points, got " + std::to_string(arr.size()));
  std::vector<Point> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string path = base + "[" + std::to_string(i) + "]";
    const json& p = arr[i];
    if (!p.is_array() || p.size() != 2) throw ParseError(path, "expected [x, y]");
    out.push_back({number(p[0], path + "[0]"), number(p[1], path + "[1]")});
  }
  return out;
}

json pointsJson(const std::vector<Point>& pts) {
  json arr = json::array();
  for (const Point& p : pts) arr.push_back({p.x, p.y});
  return arr;
}

}  // namespace

Instance parseInstance(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n');
    throw ParseError("line " + std::to_string(line), e.what());
  }
  if (!root.is_object()) throw ParseError("$", "expected a JSON object");
  if (!root.contains("version")) throw ParseError("version", "missing field");
  if (!root["version"].is_number_integer() || root["version"].get<int>() != kInstanceVersion)
    throw ParseError("version", "unsupported version, expected " + std::to_string(kInstanceVersion));
  Instance inst;
  inst.workspace = pointList(root, "workspace", 3);
  inst.starts = pointList(root, "starts", 0);
  inst.targets = pointList(root, "targets", 0);
  if (root.contains("name")) {
    if (!root["name"].is_string()) throw ParseError("name", "expected a string");
    inst.name = root["name"].get<std::string>();
  }
  if (root.contains("expected")) {
    const json& e = root["expected"];
    if (e == "solvable")
      inst.expected = Expected::Solvable;
    else if (e == "preconditionViolation")
      inst.expected = Expected::PreconditionViolation;
    else
      throw ParseError("expected", "must be \"solvable\" or \"preconditionViolation\"");
  }
  return inst;
}

std::string serializeInstance(const Instance& inst) {
  json root;
  root["version"] = kInstanceVersion;
  if (!inst.name.empty()) root["name"] = inst.name;
  if (inst.expected) root["expected"] = expectedName(*inst.expected);
  root["workspace"] = pointsJson(inst.workspace);
  root["starts"] = pointsJson(inst.starts);
  root["targets"] = pointsJson(inst.targets);
  return root.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Random instances

namespace {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }

struct Room {
  double x0, len, height;
  int teeth;
};

// Rooms side by side on y = 0, joined by short necks narrower than a robot.
// Teeth alternate between floor and ceiling with enough horizontal room for a
// robot to pass between consecutive ones.
std::vector<Point> combWorkspace(Rng& rng, const std::vector<Room>& rooms, const std::vector<double>& neckWidth) {
  std::vector<Point> bottom, top;
  for (std::size_t r = 0; r < rooms.size(); ++r) {
    const Room& R = rooms[r];
    const double x1 = R.x0 + R.len;
    // Necks sit at the mid-height of the lower neighbour.
    auto neckSpan = [&](std::size_t a) {
      const double c = std::min(rooms[a].height, rooms[a + 1].height) / 2;
      return std::pair{c - neckWidth[a] / 2, c + neckWidth[a] / 2};
    };
    if (r == 0) bottom.push_back({R.x0, 0});
    else {
      const auto [lo, hi] = neckSpan(r - 1);
      bottom.push_back({R.x0, lo});
      bottom.push_back({R.x0, 0});
      top.push_back({R.x0, hi});
      top.push_back({R.x0, R.height});
    }
    const double pitch = R.len / (R.teeth + 1);
    for (int k = 0; k < R.teeth; ++k) {
      const double x = R.x0 + pitch * (k + 1);
      const double w = uniform(rng, 0.2, 0.8);
      const double d = uniform(rng, 0.4, R.height - 2.4);
      const double tilt = uniform(rng, -0.15, 0.15);
      if (k % 2 == 0) {
        bottom.push_back({x - w / 2, 0});
        bottom.push_back({x - w / 2, d + tilt});
        bottom.push_back({x + w / 2, d - tilt});
        bottom.push_back({x + w / 2, 0});
      } else {
        top.push_back({x - w / 2, R.height});
        top.push_back({x - w / 2, R.height - d + tilt});
        top.push_back({x + w / 2, R.height - d - tilt});
        top.push_back({x + w / 2, R.height});
      }
    }
    if (r + 1 == rooms.size()) {
      bottom.push_back({x1, 0});
      bottom.push_back({x1, R.height});
    } else {
      const auto [lo, hi] = neckSpan(r);
      bottom.push_back({x1, 0});
      bottom.push_back({x1, lo});
      top.push_back({x1, R.height});
      top.push_back({x1, hi});
    }
  }
  // The top chain was collected left to right; walk it backwards.
  std::vector<Point> poly = bottom;
  poly.insert(poly.end(), top.rbegin(), top.rend());
  poly.push_back({rooms[0].x0, rooms[0].height});
  return poly;
}

struct Placement {
  std::vector<Point> starts, targets;
};

// Rejection sampling inside one component. Starts and targets alternate so
// neither colour crowds out the other.
bool placeInComponent(Rng& rng, const Region& Fi, int count, double beta, Placement& pl,
                      std::map<std::string, int>& fails) {
  const geom::Box b = Fi.bbox();
  auto inside = [&](Point p) { return geom::pointInRegion(p, Fi, 1e-7) == geom::Where::Inside; };
  auto farFrom = [](const std::vector<Point>& pts, Point p, double d) {
    return std::all_of(pts.begin(), pts.end(), [&](Point q) { return geom::dist(p, q) >= d; });
  };
  for (int k = 0; k < 2 * count; ++k) {
    const bool start = k % 2 == 0;
    auto& own = start ? pl.starts : pl.targets;
    const auto& other = start ? pl.targets : pl.starts;
    bool placed = false;
    for (int tries = 0; tries < 4000 && !placed; ++tries) {
      const Point p{uniform(rng, b.xmin, b.xmax), uniform(rng, b.ymin, b.ymax)};
      if (!inside(p)) continue;
      if (!farFrom(own, p, 4.0) || !farFrom(other, p, beta)) continue;
      own.push_back(p);
      placed = true;
    }
    if (!placed) {
      ++fails["separation"];
      return false;
    }
  }
  return true;
}

std::vector<Room> layoutRooms(Rng& rng, int n, int m, int roomCount, std::vector<int>& perRoom) {
  // Every room gets at least one robot when possible; the rest are spread at random.
  perRoom.assign(roomCount, 0);
  for (int i = 0; i < m; ++i) perRoom[i < roomCount ? i : std::uniform_int_distribution<int>(0, roomCount - 1)(rng)]++;
  const int neckVerts = 8 * (roomCount - 1);
  const int teethTotal = std::max(0, (n - 4 - neckVerts) / 4);
  std::vector<Room> rooms;
  double x = 0;
  for (int r = 0; r < roomCount; ++r) {
    const int teeth = teethTotal / roomCount + (r < teethTotal % roomCount ? 1 : 0);
    const double height = uniform(rng, 5.0, 7.0);
    const double len = std::max(6.0 * (teeth + 1), 7.0 * perRoom[r] + 6.0);
    rooms.push_back({x, len, height, teeth});
    x += len + 1.0;
  }
  return rooms;
}

Instance generate(std::uint64_t seed, int n, int m, bool multi, bool closePair) {
  if (n < 4) throw GenerationFailed("polygon needs at least 4 vertices");
  if (m < 1) throw GenerationFailed("need at least one robot");
  Rng rng(seed);
  std::map<std::string, int> fails;
  constexpr int kAttempts = 200;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    const int roomCount = multi ? std::uniform_int_distribution<int>(2, 3)(rng) : 1;
    std::vector<int> perRoom;
    const auto rooms = layoutRooms(rng, n, m, roomCount, perRoom);
    std::vector<double> necks;
    for (int r = 0; r + 1 < roomCount; ++r) necks.push_back(uniform(rng, 1.2, 1.8));
    Instance inst;
    inst.workspace = combWorkspace(rng, rooms, necks);
    if (!polygonDefect(inst.workspace).empty()) {
      ++fails["polygon"];
      continue;
    }
    FreeSpace fs;
    try {
      fs = computeFreeSpace(inst.workspace);
    } catch (const std::exception&) {
      ++fails["freeSpace"];
      continue;
    }
    if (static_cast<int>(fs.components.size()) != roomCount) {
      ++fails["components"];
      continue;
    }
    // Components come back in arbitrary order; match them to rooms by x.
    std::vector<std::size_t> compOfRoom(roomCount);
    for (int r = 0; r < roomCount; ++r) {
      const double cx = rooms[r].x0 + rooms[r].len / 2;
      double best = 1e300;
      for (std::size_t c = 0; c < fs.components.size(); ++c) {
        const geom::Box b = fs.components[c].bbox();
        const double d = std::abs((b.xmin + b.xmax) / 2 - cx);
        if (d < best) best = d, compOfRoom[r] = c;
      }
    }
    const double beta = multi ? 3.0 : (closePair ? 0.0 : uniform(rng, 0.0, 4.0));
    Placement pl;
    bool ok = true;
    if (closePair) {
      // Seed one pair closer than 2, then continue as usual.
      const Region& Fi = fs.components[compOfRoom[0]];
      const geom::Box b = Fi.bbox();
      bool seeded = false;
      for (int tries = 0; tries < 4000 && !seeded; ++tries) {
        const Point s{uniform(rng, b.xmin, b.xmax), uniform(rng, b.ymin, b.ymax)};
        const double r = uniform(rng, 0.2, 1.9), a = uniform(rng, 0, 2 * std::numbers::pi);
        const Point t = geom::polar(s, r, a);
        if (geom::pointInRegion(s, Fi, 1e-7) != geom::Where::Inside ||
            geom::pointInRegion(t, Fi, 1e-7) != geom::Where::Inside)
          continue;
        pl.starts.push_back(s);
        pl.targets.push_back(t);
        seeded = true;
      }
      if (!seeded) {
        ++fails["closePair"];
        continue;
      }
      ok = placeInComponent(rng, Fi, perRoom[0] - 1, beta, pl, fails);
    }
    for (int r = closePair ? 1 : 0; r < roomCount && ok; ++r)
      ok = placeInComponent(rng, fs.components[compOfRoom[r]], perRoom[r], beta, pl, fails);
    if (!ok) continue;
    inst.starts = std::move(pl.starts);
    inst.targets = std::move(pl.targets);
    std::ostringstream name;
    name << (closePair ? "close" : "random") << "-s" << seed << "-n" << n << "-m" << m << (multi ? "-multi" : "");
    inst.name = name.str();
    inst.expected = Expected::Solvable;
    return inst;
  }
  std::string worst = "unknown";
  int most = 0;
  for (const auto& [why, count] : fails)
    if (count > most) most = count, worst = why;
  throw GenerationFailed("no instance after " + std::to_string(kAttempts) + " attempts; most frequent failure: " +
                         worst + " (" + std::to_string(most) + ")");
}

}  // namespace

Instance genRandom(std::uint64_t seed, int n, int m, bool multiComponent) {
  return generate(seed, n, m, multiComponent, false);
}

Instance genRandomClosePairs(std::uint64_t seed, int n, int m) { return generate(seed, n, m, false, true); }

// ---------------------------------------------------------------------------
// Figures

namespace {

constexpr double kPi = std::numbers::pi;

// Vertices of a circular arc from angle a0 to a1 (counter-clockwise when
// a1 > a0), subdivided so the chord sagitta stays below `sag`. The vertices lie
// on the circle, so chords cut inward for a region inside the circle.
void appendArc(std::vector<Point>& out, Point c, double r, double a0, double a1, double sag, bool includeFirst = true) {
  const double step = 2 * std::acos(1 - sag / r);
  const int k = std::max(1, static_cast<int>(std::ceil(std::abs(a1 - a0) / step)));
  for (int i = includeFirst ? 0 : 1; i <= k; ++i) out.push_back(geom::polar(c, r, a0 + (a1 - a0) * i / k));
}

// Two robots in a round chamber above a corridor of width 2 + 2w. The
// corridor's top corners lie on the robots' unit circles and the chamber is a
// disc of radius < 3 around the corridor mouth, so every chamber position is
// within distance 2 of the mouth and neither robot can enter first.
Instance fig2i(double eps) {
  const double w = eps / 20, sag = eps / 20;
  const Point A{-(1 + w), 0}, B{1 + w, 0};
  const double sx = 2 - eps / 2;
  const double sy = std::sqrt(1 - (sx - (1 + w)) * (sx - (1 + w)));
  const Point s1{-sx, sy}, s2{sx, sy};
  const double R = geom::norm(s1) + 1 + 2 * sag;
  // Floors leave the corners tangent to the robots' discs.
  const Point dl = geom::unit(geom::perpLeft({s1.x - A.x, s1.y - A.y}));
  auto rayToCircle = [&](Point o, Point d) {
    const double b = geom::dot(o, d), c = geom::dot(o, o) - R * R;
    const double t = -b + std::sqrt(b * b - c);
    return Point{o.x + t * d.x, o.y + t * d.y};
  };
  const Point PL = rayToCircle(A, dl), PR{-PL.x, PL.y};
  const double corridor = 4.0, roomW = 6.0, roomH = 7.0, yb = -corridor;
  std::vector<Point> P{A, {A.x, yb}, {-roomW, yb}, {-roomW, yb - roomH}, {roomW, yb - roomH}, {roomW, yb}, {B.x, yb}, B,
                       PR};
  const double a0 = std::atan2(PR.y, PR.x), a1 = std::atan2(PL.y, PL.x) + 2 * kPi;
  appendArc(P, {0, 0}, R, a0, a1, sag, false);
  P.back() = PL;
  Instance inst;
  inst.workspace = std::move(P);
  inst.starts = {s1, s2};
  inst.targets = {{-3, yb - roomH / 2}, {3, yb - roomH / 2}};
  inst.name = "fig2i";
  inst.expected = Expected::PreconditionViolation;
  return inst;
}

// Two components: a Λ-shaped channel below and a cap above, joined only by a
// window |AB| = 2 - δ. Every point of the cap lies within distance 2 of the
// channel's apex, so the upper robot always blocks the lower one.
Instance fig2ii(double eps) {
  const double delta = eps / 2, a = 1 - delta / 2, w = 0.005;
  const double theta = std::asin(a / (1 + w));
  const Point B0{0, -std::sqrt((1 + w) * (1 + w) - a * a)};
  const Point s1{-(3 - eps) / 2, 1.001}, t1{(3 - eps) / 2, 1.001};
  const double R = geom::dist(s1, B0) + 1.01;
  const double sag = std::min(eps / 4, 0.005);
  const Point u{-std::cos(theta), -std::sin(theta)};    // down the left arm
  const Point nl{-std::sin(theta), std::cos(theta)};    // towards the left arm's outer wall
  const double L = 7.0, cap = L + 1 + w;
  auto at = [&](Point base, double along, Point dir, double off, Point n) {
    return Point{base.x + along * dir.x + off * n.x, base.y + along * dir.y + off * n.y};
  };
  const Point ur{-u.x, u.y}, nr{-nl.x, nl.y};
  // Inner walls meet where the two arms' inner offsets cross x = 0.
  const double tInner = (1 + w) * std::tan(theta);
  const Point D = at(B0, tInner, u, -(1 + w), nl);
  const double xEnd = std::sqrt(R * R - B0.y * B0.y);
  std::vector<Point> P;
  P.push_back(at(B0, cap, u, 1 + w, nl));   // left arm, outer corner
  P.push_back(at(B0, cap, u, -(1 + w), nl));
  P.push_back(D);
  P.push_back(at(B0, cap, ur, -(1 + w), nr));
  P.push_back(at(B0, cap, ur, 1 + w, nr));
  P.push_back({a, 0});   // B
  P.push_back({xEnd, 0});
  const double a0 = std::atan2(-B0.y, xEnd), a1 = kPi - a0;
  appendArc(P, B0, R, a0, a1, sag, false);
  P.back() = {-xEnd, 0};
  P.push_back({-a, 0});  // A
  Instance inst;
  inst.workspace = std::move(P);
  inst.starts = {s1, at(B0, L, u, 0, nl)};
  inst.targets = {t1, at(B0, L, ur, 0, nr)};
  inst.name = "fig2ii";
  inst.expected = Expected::PreconditionViolation;
  return inst;
}

// One target between two channels, one leading up and one leading down. Its
// aura reaches past the neighbouring starts' auras into both channels, giving
// two blocking areas with the same blocker. The extra target upstairs forces a
// robot through one of them.
Instance fig3ii() {
  Instance inst;
  inst.workspace = {{0.5, -1.776},  {4.216, -1.776}, {4.216, -0.422}, {4.716, -0.422}, {4.716, -3.776},
                    {1.466, -3.776}, {1.466, -7.776}, {12.466, -7.776}, {12.466, -3.776}, {7.216, -3.776},
                    {7.216, 0.161},  {7.716, 0.161},  {7.716, -1.776}, {13, -1.776},     {13, 4},
                    {9.25, 4},       {9.25, 2.646},   {8.75, 2.646},   {8.75, 6},        {13, 6},
                    {13, 10},        {2, 10},         {2, 6},          {6.25, 6},        {6.25, 2.063},
                    {5.75, 2.063},   {5.75, 4},       {0.5, 4}};
  inst.starts = {{8.967, 1.202}, {4.499, 1.022}};
  inst.targets = {{6.733, 1.112}, {4, 8}};
  inst.name = "fig3ii";
  inst.expected = Expected::Solvable;
  return inst;
}

// A pocket cut off by a target's aura continues as a channel to an upper room;
// one robot has to travel from the lower room through the blocking area.
Instance fig6() {
  Instance inst;
  inst.workspace = {{0, 0},     {12, 0},      {12, 4},  {9.25, 4}, {9.25, 2.646}, {8.75, 2.646},
                    {8.75, 6},  {12, 6},      {12, 10}, {0, 10},   {0, 6},        {6.25, 6},
                    {6.25, 2.063}, {5.75, 2.063}, {5.75, 4}, {0, 4}};
  inst.starts = {{8.967, 1.202}, {1.5, 2}};
  inst.targets = {{6.733, 1.112}, {2, 8}};
  inst.name = "fig6";
  inst.expected = Expected::Solvable;
  return inst;
}

// A corridor below a room, joined by a window narrower than a robot. The
// start parked in the window cuts the corridor; the targets are far apart.
std::vector<Point> windowWorkspace() {
  return {{-7, -1.2}, {7, -1.2}, {7, 1.2}, {0.9, 1.2}, {5, 1.5}, {5, 7}, {-5, 7}, {-5, 1.5}, {-0.9, 1.2}, {-7, 1.2}};
}

Instance fig8() {
  Instance inst;
  inst.workspace = windowWorkspace();
  inst.starts = {{-5, 0}, {0, 1.7}};
  inst.targets = {{5, 0}, {3, 4.5}};
  inst.name = "fig8";
  inst.expected = Expected::Solvable;
  return inst;
}

// Taller corridor under the same window: the upper start and the corridor
// target both reach into the other component without cutting it.
Instance fig9() {
  Instance inst;
  inst.workspace = {{-7, -3.2}, {7, -3.2}, {7, 1.2}, {0.9, 1.2}, {5, 1.5},
                    {5, 7},     {-5, 7},   {-5, 1.5}, {-0.9, 1.2}, {-7, 1.2}};
  inst.starts = {{-5, -1}, {-0.7, 2.5}};
  inst.targets = {{0.7, -0.2}, {3, 4.5}};
  inst.name = "fig9";
  inst.expected = Expected::Solvable;
  return inst;
}

}  // namespace

std::optional<Figure> figureFromName(const std::string& name) {
  for (Figure f : {Figure::Fig2i, Figure::Fig2ii, Figure::Fig3ii, Figure::Fig6, Figure::Fig8, Figure::Fig9})
    if (figureName(f) == name) return f;
  return std::nullopt;
}

std::string figureName(Figure f) {
  switch (f) {
    case Figure::Fig2i: return "fig2i";
    case Figure::Fig2ii: return "fig2ii";
    case Figure::Fig3ii: return "fig3ii";
    case Figure::Fig6: return "fig6";
    case Figure::Fig8: return "fig8";
    case Figure::Fig9: return "fig9";
  }
  return "";
}

Instance genFigure(Figure which, double epsilon) {
  if (!(epsilon > 0 && epsilon <= 0.5)) throw std::invalid_argument("epsilon must lie in (0, 0.5]");
  switch (which) {
    case Figure::Fig2i: return fig2i(epsilon);
    case Figure::Fig2ii: return fig2ii(epsilon);
    case Figure::Fig3ii: return fig3ii();
    case Figure::Fig6: return fig6();
    case Figure::Fig8: return fig8();
    case Figure::Fig9: return fig9();
  }
  throw std::invalid_argument("unknown figure");
}

}  // namespace mrmp
