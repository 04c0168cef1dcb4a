#pragma once

// Hand-built workspaces shared by the module tests, plus small independent
// polygon oracles.

#include <cmath>
#include <random>
#include <vector>

#include "mrmp/geom.hpp"

namespace testfix {

using mrmp::geom::Point;

struct Layout {
  std::vector<Point> workspace, starts, targets;
};

// Even-odd crossing test, independent of the library kernel.
inline bool insidePolygon(const std::vector<Point>& poly, Point p) {
  bool in = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const Point a = poly[i], b = poly[j];
    if ((a.y > p.y) != (b.y > p.y) && p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x) in = !in;
  }
  return in;
}

inline double distanceToPolygon(const std::vector<Point>& poly, Point p) {
  double best = 1e300;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point a = poly[i], b = poly[(i + 1) % poly.size()];
    const double dx = b.x - a.x, dy = b.y - a.y;
    double u = ((p.x - a.x) * dx + (p.y - a.y) * dy) / (dx * dx + dy * dy);
    u = std::fmax(0.0, std::fmin(1.0, u));
    best = std::fmin(best, std::hypot(p.x - a.x - u * dx, p.y - a.y - u * dy));
  }
  return best;
}

// Rectangle with rectangular teeth hanging from the ceiling and rising from
// the floor.
inline std::vector<Point> randomComb(std::mt19937& rng) {
  std::uniform_real_distribution<double> U(0, 1);
  const double L = 16, H = 4 + 2 * U(rng);
  std::vector<Point> pts{{0, 0}};
  for (double x = 2; x < L - 2; x += 4) {
    const double w = 0.2 + 0.6 * U(rng), d = 0.5 + (H - 2.5) * U(rng);
    pts.push_back({x, 0});
    pts.push_back({x, d * 0.5});
    pts.push_back({x + w, d * 0.5});
    pts.push_back({x + w, 0});
  }
  pts.push_back({L, 0});
  pts.push_back({L, H});
  for (double x = L - 4; x > 1; x -= 4) {
    const double w = 0.2 + 0.6 * U(rng), d = 0.5 + (H - 2.5) * U(rng);
    pts.push_back({x + w, H});
    pts.push_back({x + w, H - d});
    pts.push_back({x, H - d});
    pts.push_back({x, H});
  }
  pts.push_back({0, H});
  return pts;
}

// A pocket between two ceiling teeth; the target's aura reaches into the
// pocket past the start's aura and cuts it off.
inline Layout blockingPocket() {
  return {{{0, 0}, {12, 0}, {12, 4}, {9.25, 4}, {9.25, 2.646}, {8.75, 2.646}, {8.75, 4}, {6.25, 4},
           {6.25, 2.063}, {5.75, 2.063}, {5.75, 4}, {0, 4}},
          {{8.967, 1.202}},
          {{6.733, 1.112}}};
}

inline Layout nonBlockingRemote() {
  return {{{0, 0}, {12, 0}, {12, 4.5}, {7.5, 4.5}, {7.5, 2.322}, {6.5, 2.322}, {6.5, 4.5}, {4.1, 4.5},
           {4.1, 2.415}, {3.9, 2.415}, {3.9, 4.5}, {0, 4.5}},
          {{1.327, 1.277}},
          {{3.594, 1.424}}};
}

// k+1 rooms stacked vertically, joined by channels; room i (i < k) carries the
// blocking-pocket pattern whose pocket continues as the channel to room i+1.
inline Layout stackedPockets(int k) {
  Layout out;
  auto& P = out.workspace;
  const auto shift = [](int i) { return i % 2 == 0 ? 0.0 : -4.5; };
  // Walk the right side upwards, then the left side downwards.
  std::vector<std::vector<Point>> left(k + 1);
  P.push_back({0, 0});
  for (int i = 0; i <= k; ++i) {
    const double b = 6.0 * i, dx = shift(i);
    if (i > 0) P.push_back({8.75 + shift(i - 1), b});
    P.push_back({12, b});
    P.push_back({12, b + 4});
    if (i < k) {
      P.push_back({9.25 + dx, b + 4});
      P.push_back({9.25 + dx, b + 2.646});
      P.push_back({8.75 + dx, b + 2.646});
      P.push_back({8.75 + dx, b + 4});
      // channel right wall continues into the next room
      left[i] = {{6.25 + dx, b + 6}, {6.25 + dx, b + 4},   {6.25 + dx, b + 2.063},
                 {5.75 + dx, b + 2.063}, {5.75 + dx, b + 4}, {0, b + 4}};
      out.targets.push_back({6.733 + dx, b + 1.112});
      out.starts.push_back({8.967 + dx, b + 1.202});
    } else {
      left[i] = {{0, b + 4}};
    }
    if (i > 0) left[i].push_back({0, b});
  }
  for (int i = k; i >= 0; --i)
    for (const Point& p : left[i]) P.push_back(p);
  return out;
}

}  // namespace testfix

namespace testfix {

// Rejection-sampled positions in one free-space component: pairwise ≥ mu
// within each colour, ≥ beta across colours.
template <class Inside>
inline bool samplePositions(std::mt19937& rng, mrmp::geom::Box b, Inside inside, int m, double mu,
                            double beta, std::vector<Point>& S, std::vector<Point>& T) {
  std::uniform_real_distribution<double> X(b.xmin, b.xmax), Y(b.ymin, b.ymax);
  S.clear();
  T.clear();
  auto ok = [&](Point p, const std::vector<Point>& same, const std::vector<Point>& other) {
    for (const Point& q : same)
      if (mrmp::geom::dist(p, q) < mu) return false;
    for (const Point& q : other)
      if (mrmp::geom::dist(p, q) < beta) return false;
    return true;
  };
  for (int tries = 0; tries < 20000 && (int)T.size() < m; ++tries) {
    const Point p{X(rng), Y(rng)};
    if (!inside(p)) continue;
    if ((int)S.size() <= (int)T.size()) {
      if (ok(p, S, T)) S.push_back(p);
    } else if (ok(p, T, S)) {
      T.push_back(p);
    }
  }
  if ((int)S.size() > (int)T.size()) S.pop_back();
  return (int)S.size() == m;
}

}  // namespace testfix

namespace testfix {

// Stacked rooms with one extra robot that must travel between the bottom and
// top rooms, crossing every blocking area on the way.
inline Layout stackedClimb(int k, bool up) {
  Layout fx = stackedPockets(k);
  const Point bottom{1.5, 2}, top{2, 6.0 * k + 2};
  fx.starts.push_back(up ? bottom : top);
  fx.targets.push_back(up ? top : bottom);
  return fx;
}

// Three components: a room hanging below the thin end of a corridor (its
// start cuts the corridor), the corridor itself, and a wide upper room whose
// target sits in a window above the corridor's tall part.
inline Layout threeRooms() {
  Layout fx;
  fx.workspace = {{-9, 1.2},  {-9, -1.2}, {-6.9, -1.2}, {-10, -1.5}, {-10, -7}, {-2, -7},
                  {-2, -1.5}, {-5.1, -1.2}, {-1, -1.2}, {-1, -3.2},  {9, -3.2}, {9, 1.2},
                  {2.9, 1.2}, {7, 1.5},   {7, 7},      {-12, 7},    {-12, 1.5}, {1.1, 1.2}};
  fx.starts = {{-6, -1.7}, {4, 4.5}, {-2, 0}};
  fx.targets = {{-6, -5}, {2, 1.7}, {6, 0}};
  return fx;
}

}  // namespace testfix
