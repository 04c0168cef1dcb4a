#pragma once

// Sequential motion plans: one robot moves at a time along a continuous path.

#include <vector>

#include "mrmp/geom.hpp"

namespace mrmp {

struct Move {
  geom::Point from, to;
  std::vector<geom::ArcSeg> path;
};

struct MotionPlan {
  std::vector<Move> moves;

  double totalLength() const {
    double s = 0;
    for (const auto& m : moves) s += geom::pathLength(m.path);
    return s;
  }
};

}  // namespace mrmp
