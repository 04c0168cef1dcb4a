#include <algorithm>
#include <cmath>
#include <limits>

#include "mrmp/geom.hpp"

namespace mrmp::geom {

LoopMetric::LoopMetric(const Loop& loop) : loop_(&loop) {
  cumulative_.reserve(loop.elements.size() + 1);
  cumulative_.push_back(0.0);
  for (const auto& e : loop.elements) cumulative_.push_back(cumulative_.back() + e.length());
}

double LoopMetric::coord(LoopPos pos) const {
  const double len = cumulative_[pos.elem + 1] - cumulative_[pos.elem];
  return cumulative_[pos.elem] + pos.u * len;
}

LoopPos LoopMetric::posAt(double s) const {
  const double P = perimeter();
  s = std::fmod(s, P);
  if (s < 0) s += P;
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), s);
  std::size_t i = static_cast<std::size_t>(it - cumulative_.begin());
  i = i == 0 ? 0 : i - 1;
  i = std::min(i, loop_->elements.size() - 1);
  const double len = cumulative_[i + 1] - cumulative_[i];
  return {i, len > 0 ? std::clamp((s - cumulative_[i]) / len, 0.0, 1.0) : 0.0};
}

Point LoopMetric::pointAt(double s) const {
  const LoopPos p = posAt(s);
  return loop_->elements[p.elem].at(p.u);
}

LoopPos LoopMetric::project(Point p) const {
  LoopPos best;
  double bestD = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < loop_->elements.size(); ++i) {
    const double d = loop_->elements[i].distanceTo(p);
    if (d < bestD) {
      bestD = d;
      best = {i, loop_->elements[i].project(p)};
    }
  }
  return best;
}

std::vector<ArcSeg> LoopMetric::forward(double s0, double s1) const {
  const double P = perimeter();
  std::vector<ArcSeg> out;
  if (P <= 0) return out;
  s0 = std::fmod(s0, P);
  if (s0 < 0) s0 += P;
  double total = s1 - s0;
  if (total > P + 1e-12 || total < 0) {
    total = std::fmod(total, P);
    if (total < 0) total += P;
  }
  if (total > P) total = P;
  double cur = s0;
  double remaining = total;
  const auto& els = loop_->elements;
  std::size_t guard = 0;
  while (remaining > 1e-12 && guard++ < 2 * els.size() + 2) {
    LoopPos pos = posAt(cur);
    // At an element end, continue on the following element.
    if (pos.u >= 1.0 - 1e-15) pos = {(pos.elem + 1) % els.size(), 0.0};
    const std::size_t i = pos.elem;
    const double len = cumulative_[i + 1] - cumulative_[i];
    const double avail = len * (1.0 - pos.u);
    if (len <= 0) {
      cur = cumulative_[i + 1];
      continue;
    }
    if (remaining >= avail - 1e-12) {
      out.push_back(els[i].sub(pos.u, 1.0));
      remaining -= avail;
      cur = cumulative_[i + 1];
      if (cur >= P) cur = 0.0;
    } else {
      out.push_back(els[i].sub(pos.u, pos.u + remaining / len));
      remaining = 0;
    }
  }
  return out;
}

std::vector<ArcSeg> LoopMetric::shortest(double s0, double s1) const {
  const double P = perimeter();
  double d = std::fmod(s1 - s0, P);
  if (d < 0) d += P;
  if (d <= P - d) return forward(s0, s0 + d);
  auto back = forward(s1, s1 + (P - d));
  std::vector<ArcSeg> out;
  for (auto it = back.rbegin(); it != back.rend(); ++it) out.push_back(it->reversed());
  return out;
}

std::vector<LoopInterval> loopIntervalsInDisc(const Loop& loop, Point c, double r) {
  const LoopMetric metric(loop);
  const double P = metric.perimeter();
  const ArcSeg circ = ArcSeg::circle(c, r);
  // Pieces of the loop as (s0, s1, inside).
  struct Piece {
    double s0, s1;
    bool inside;
  };
  std::vector<Piece> pieces;
  for (std::size_t i = 0; i < loop.elements.size(); ++i) {
    const ArcSeg& e = loop.elements[i];
    std::vector<double> us{0.0, 1.0};
    if (!(e.isArc() && near(e.center, c, 1e-12) && std::abs(e.radius - r) < 1e-12))
      for (const Hit& h : intersect(e, circ)) us.push_back(h.ua);
    std::sort(us.begin(), us.end());
    for (std::size_t k = 0; k + 1 < us.size(); ++k) {
      if (us[k + 1] - us[k] < 1e-14) continue;
      const Point m = e.at(0.5 * (us[k] + us[k + 1]));
      const bool in = dist(m, c) < r - 1e-12;
      const double a = metric.coord({i, us[k]});
      const double b = metric.coord({i, us[k + 1]});
      if (!pieces.empty() && pieces.back().inside == in)
        pieces.back().s1 = b;
      else
        pieces.push_back({a, b, in});
    }
  }
  std::vector<LoopInterval> out;
  if (pieces.empty()) return out;
  if (pieces.size() == 1) {
    if (pieces[0].inside) out.push_back({0.0, P, true});
    return out;
  }
  // Join the last piece with the first across the seam.
  if (pieces.front().inside == pieces.back().inside) {
    pieces.front().s0 = pieces.back().s0 - P;
    pieces.pop_back();
  }
  for (const auto& p : pieces) {
    if (!p.inside) continue;
    double s0 = p.s0;
    double s1 = p.s1;
    if (s0 < 0) {
      s0 += P;
      s1 += P;
    }
    out.push_back({s0, s1, false});
  }
  return out;
}

std::vector<Chain> boundaryComponentsInDisc(const Region& r, Point c, double rad) {
  std::vector<Chain> out;
  auto handle = [&](const Loop& loop) {
    if (!loop.bbox().overlaps(Box{c.x - rad, c.y - rad, c.x + rad, c.y + rad})) return;
    const LoopMetric metric(loop);
    for (const auto& iv : loopIntervalsInDisc(loop, c, rad)) {
      Chain ch;
      ch.closed = iv.whole;
      ch.elements = iv.whole ? loop.elements : metric.forward(iv.s0, iv.s1);
      if (!ch.elements.empty()) out.push_back(std::move(ch));
    }
  };
  for (const auto& f : r.faces) {
    handle(f.outer);
    for (const auto& h : f.holes) handle(h);
  }
  return out;
}

}  // namespace mrmp::geom
