#include "mrmp/cli.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"
#include "mrmp/freespace.hpp"
#include "mrmp/motiongraph.hpp"
#include "mrmp/multiplan.hpp"
#include "mrmp/planner.hpp"

namespace mrmp::cli {

using json = nlohmann::ordered_json;
using geom::ArcSeg;

namespace {

constexpr int kPlanVersion = 1;

json pointJson(Point p) { return json::array({p.x, p.y}); }

json elementJson(const ArcSeg& e) {
  json j;
  j["type"] = e.isArc() ? "arc" : "segment";
  j["a"] = pointJson(e.a);
  j["b"] = pointJson(e.b);
  if (e.isArc()) {
    j["center"] = pointJson(e.center);
    j["radius"] = e.radius;
    j["startAngle"] = e.start_angle;
    j["sweep"] = e.sweep;
  }
  return j;
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ParseError(path, "expected a number");
  return j.get<double>();
}

Point point(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) throw ParseError(path, "expected [x, y]");
  return {number(j[0], path + "[0]"), number(j[1], path + "[1]")};
}

const json& field(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object() || !obj.contains(key)) throw ParseError(path + "." + key, "missing field");
  return obj.at(key);
}

ArcSeg elementFrom(const json& j, const std::string& path) {
  const json& type = field(j, "type", path);
  const Point a = point(field(j, "a", path), path + ".a"), b = point(field(j, "b", path), path + ".b");
  if (type == "segment") return ArcSeg::segment(a, b);
  if (type != "arc") throw ParseError(path + ".type", "must be \"segment\" or \"arc\"");
  ArcSeg e = ArcSeg::arc(point(field(j, "center", path), path + ".center"),
                         number(field(j, "radius", path), path + ".radius"),
                         number(field(j, "startAngle", path), path + ".startAngle"),
                         number(field(j, "sweep", path), path + ".sweep"));
  e.a = a;
  e.b = b;
  return e;
}

// ---------------------------------------------------------------------------
// SVG

class Svg {
 public:
  Svg(geom::Box b, double scale) : box_(b), scale_(scale) {}

  std::string x(double v) const { return fmt((v - box_.xmin) * scale_); }
  std::string y(double v) const { return fmt((box_.ymax - v) * scale_); }
  std::string len(double v) const { return fmt(v * scale_); }
  std::string pt(Point p) const { return x(p.x) + " " + y(p.y); }

  static std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    std::string s = buf;
    if (s == "-0.000") s = "0.000";
    return s;
  }

  // Path data for a chain of elements; y is flipped so positive sweeps draw
  // with sweep-flag 1.
  std::string chain(const std::vector<ArcSeg>& els, bool close) const {
    if (els.empty()) return "";
    std::string d = "M" + pt(els.front().a);
    for (const ArcSeg& e : els) {
      if (e.isSegment()) {
        d += " L" + pt(e.b);
        continue;
      }
      const double sweep = std::abs(e.sweep);
      const char* flag = e.sweep > 0 ? " 1 " : " 0 ";
      if (sweep > geom::kPi + 1e-9) {
        const Point mid = e.at(0.5);
        d += " A" + len(e.radius) + " " + len(e.radius) + " 0 0" + flag + pt(mid);
      }
      d += " A" + len(e.radius) + " " + len(e.radius) + " 0 0" + flag + pt(e.b);
    }
    if (close) d += " Z";
    return d;
  }

  std::string region(const geom::Region& r) const {
    std::string d;
    for (const auto& f : r.faces) {
      d += chain(f.outer.elements, true);
      for (const auto& h : f.holes) d += " " + chain(h.elements, true);
      d += " ";
    }
    if (!d.empty()) d.pop_back();
    return d;
  }

  geom::Box box() const { return box_; }

 private:
  geom::Box box_;
  double scale_;
};

const char* kComponentFill[] = {"#cfe8ff", "#d8f5d0", "#fff1c2", "#f3d9fa", "#d9f2f2", "#fde2d6"};

struct ComponentView {
  std::vector<std::size_t> startIdx, targetIdx;
  std::optional<ComponentAnalysis> analysis;
  std::optional<MotionGraph> graph;
};

std::vector<ComponentView> analyze(const Instance& inst, const FreeSpace& fs, bool withGraph) {
  std::vector<ComponentView> views(fs.components.size());
  for (std::size_t i = 0; i < inst.starts.size(); ++i)
    if (auto c = fs.componentOf(inst.starts[i])) views[*c].startIdx.push_back(i);
  for (std::size_t i = 0; i < inst.targets.size(); ++i)
    if (auto c = fs.componentOf(inst.targets[i])) views[*c].targetIdx.push_back(i);
  for (std::size_t c = 0; c < views.size(); ++c) {
    auto& v = views[c];
    if (v.startIdx.empty() || v.startIdx.size() != v.targetIdx.size()) continue;
    std::vector<Point> S, T, kept;
    for (auto i : v.startIdx) S.push_back(inst.starts[i]);
    for (auto i : v.targetIdx) T.push_back(inst.targets[i]);
    try {
      const ClosePairs pairs = mergeClosePairs(S, T);
      for (auto j : pairs.keptTargets) kept.push_back(T[j]);
      std::vector<std::optional<Point>> merged(S.size());
      for (std::size_t i = 0; i < S.size(); ++i)
        if (pairs.targetOf[i]) merged[i] = T[*pairs.targetOf[i]];
      v.analysis = analyzeComponent(fs.components[c], S, kept);
      if (withGraph) v.graph = buildMotionGraph(*v.analysis, merged);
    } catch (const std::exception&) {
      v.analysis.reset();
      v.graph.reset();
    }
  }
  return views;
}

void emitRegion(std::ostream& o, const Svg& svg, const geom::Region& r, const std::string& style) {
  if (r.empty()) return;
  o << "  <path fill-rule=\"evenodd\" " << style << " d=\"" << svg.region(r) << "\"/>\n";
}

void emitPositions(std::ostream& o, const Svg& svg, const std::vector<Point>& P, const char* color,
                   const char* prefix) {
  for (std::size_t i = 0; i < P.size(); ++i) {
    o << "  <circle cx=\"" << svg.x(P[i].x) << "\" cy=\"" << svg.y(P[i].y) << "\" r=\"" << svg.len(kRobotRadius)
      << "\" fill=\"" << color << "\" fill-opacity=\"0.6\" stroke=\"" << color << "\"/>\n";
    o << "  <text x=\"" << svg.x(P[i].x) << "\" y=\"" << svg.y(P[i].y)
      << "\" font-size=\"12\" text-anchor=\"middle\" dominant-baseline=\"central\">" << prefix << i + 1
      << "</text>\n";
  }
}

}  // namespace

std::string serializePlan(const Instance& inst, const MotionPlan& plan, const PlanStats& stats) {
  json root;
  root["version"] = kPlanVersion;
  root["instance"] = json::parse(serializeInstance(inst));
  json moves = json::array();
  for (const Move& m : plan.moves) {
    json jm;
    jm["from"] = pointJson(m.from);
    jm["to"] = pointJson(m.to);
    json path = json::array();
    for (const ArcSeg& e : m.path) path.push_back(elementJson(e));
    jm["path"] = std::move(path);
    moves.push_back(std::move(jm));
  }
  root["moves"] = std::move(moves);
  json st;
  st["moveCount"] = stats.moveCount;
  st["totalPathLength"] = stats.totalPathLength;
  if (stats.planningMillis) st["planningMillis"] = *stats.planningMillis;
  root["stats"] = std::move(st);
  return root.dump(2) + "\n";
}

MotionPlan parsePlan(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("$", e.what());
  }
  if (!root.is_object()) throw ParseError("$", "expected a JSON object");
  const json& version = field(root, "version", "$");
  if (!version.is_number_integer() || version.get<int>() != kPlanVersion)
    throw ParseError("$.version", "unsupported version, expected " + std::to_string(kPlanVersion));
  const json& moves = field(root, "moves", "$");
  if (!moves.is_array()) throw ParseError("$.moves", "expected an array");
  MotionPlan plan;
  for (std::size_t i = 0; i < moves.size(); ++i) {
    const std::string mp = "$.moves[" + std::to_string(i) + "]";
    Move m;
    m.from = point(field(moves[i], "from", mp), mp + ".from");
    m.to = point(field(moves[i], "to", mp), mp + ".to");
    const json& path = field(moves[i], "path", mp);
    if (!path.is_array()) throw ParseError(mp + ".path", "expected an array");
    for (std::size_t k = 0; k < path.size(); ++k)
      m.path.push_back(elementFrom(path[k], mp + ".path[" + std::to_string(k) + "]"));
    plan.moves.push_back(std::move(m));
  }
  return plan;
}

std::string violationsJson(const std::vector<Violation>& v) {
  json arr = json::array();
  for (const auto& x : v) {
    json j;
    j["kind"] = violationName(x.kind);
    j["message"] = x.message;
    j["indices"] = x.indices;
    json pts = json::array();
    for (Point p : x.points) pts.push_back(pointJson(p));
    j["points"] = std::move(pts);
    j["value"] = x.value;
    arr.push_back(std::move(j));
  }
  json root;
  root["violations"] = std::move(arr);
  return root.dump(2) + "\n";
}

unsigned parseLayers(const std::string& list) {
  unsigned out = 0;
  std::stringstream ss(list);
  std::string name;
  while (std::getline(ss, name, ',')) {
    if (name.empty()) continue;
    if (name == "freespace") out |= kFreeSpace;
    else if (name == "auras") out |= kAuras;
    else if (name == "blocking") out |= kBlocking;
    else if (name == "motiongraph") out |= kMotionGraph;
    else if (name == "plan") out |= kPlan;
    else throw std::invalid_argument("unknown layer '" + name + "'");
  }
  return out;
}

std::string renderSvg(const Instance& inst, const MotionPlan* plan, unsigned layers) {
  geom::Box b = geom::boundsOf(inst.workspace);
  for (Point p : inst.starts) b.expand(p);
  for (Point p : inst.targets) b.expand(p);
  const double pad = 2.5;
  b = {b.xmin - pad, b.ymin - pad, b.xmax + pad, b.ymax + pad};
  const Svg svg(b, 30.0);
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << svg.len(b.width()) << "\" height=\""
    << svg.len(b.height()) << "\" viewBox=\"0 0 " << svg.len(b.width()) << " " << svg.len(b.height()) << "\">\n";
  o << "<g id=\"workspace\">\n";
  o << "  <rect width=\"100%\" height=\"100%\" fill=\"#6b6b6b\"/>\n";
  std::string d = "M";
  for (std::size_t i = 0; i < inst.workspace.size(); ++i) d += (i ? " L" : "") + svg.pt(inst.workspace[i]);
  o << "  <path fill=\"#ffffff\" stroke=\"#000000\" stroke-width=\"1.5\" d=\"" << d << " Z\"/>\n";
  o << "</g>\n";

  const bool simple = polygonDefect(inst.workspace).empty();
  std::optional<FreeSpace> fs;
  if (simple) {
    try {
      fs = computeFreeSpace(inst.workspace);
    } catch (const std::exception&) {
      fs.reset();
    }
  }
  std::vector<ComponentView> views;
  if (fs && (layers & (kBlocking | kMotionGraph))) views = analyze(inst, *fs, layers & kMotionGraph);

  if (fs && (layers & kFreeSpace)) {
    o << "<g id=\"freespace\">\n";
    for (std::size_t c = 0; c < fs->components.size(); ++c)
      emitRegion(o, svg, fs->components[c],
                 std::string("fill=\"") + kComponentFill[c % std::size(kComponentFill)] +
                     "\" stroke=\"#4a7fb5\" stroke-width=\"0.8\"");
    o << "</g>\n";
  }
  if (layers & kBlocking) {
    o << "<g id=\"blocking\">\n";
    for (const auto& v : views) {
      if (!v.analysis) continue;
      for (const auto& rc : v.analysis->remotes)
        emitRegion(o, svg, rc.region,
                   rc.blocking ? "fill=\"#d62728\" fill-opacity=\"0.7\" stroke=\"#8b0000\""
                               : "fill=\"#ff9896\" fill-opacity=\"0.5\" stroke=\"#d62728\" stroke-dasharray=\"3 2\"");
    }
    o << "</g>\n";
  }
  if (layers & kAuras) {
    o << "<g id=\"auras\" fill=\"none\" stroke-dasharray=\"6 4\" stroke-width=\"1\">\n";
    for (Point p : inst.starts)
      o << "  <circle cx=\"" << svg.x(p.x) << "\" cy=\"" << svg.y(p.y) << "\" r=\"" << svg.len(kAuraRadius)
        << "\" stroke=\"#2ca02c\"/>\n";
    for (Point p : inst.targets)
      o << "  <circle cx=\"" << svg.x(p.x) << "\" cy=\"" << svg.y(p.y) << "\" r=\"" << svg.len(kAuraRadius)
        << "\" stroke=\"#9467bd\"/>\n";
    o << "</g>\n";
  }
  if (layers & kMotionGraph) {
    o << "<g id=\"motiongraph\" fill=\"none\" stroke-width=\"1.2\">\n";
    for (const auto& v : views) {
      if (!v.graph) continue;
      for (const auto& e : v.graph->edges)
        o << "  <path stroke=\"" << (e.kind == EdgeKind::Guaranteed ? "#1f77b4" : "#ff7f0e") << "\""
          << (e.kind == EdgeKind::Blockable ? " stroke-dasharray=\"4 3\"" : "") << " d=\"" << svg.chain(e.path, false)
          << "\"/>\n";
    }
    o << "</g>\n";
  }
  if (plan && (layers & kPlan)) {
    o << "<g id=\"plan\" fill=\"none\" stroke=\"#17becf\" stroke-width=\"2\">\n";
    for (std::size_t i = 0; i < plan->moves.size(); ++i) {
      const Move& m = plan->moves[i];
      if (m.path.empty()) continue;
      o << "  <path d=\"" << svg.chain(m.path, false) << "\"/>\n";
      const Point mid = m.path[m.path.size() / 2].mid();
      o << "  <text x=\"" << svg.x(mid.x) << "\" y=\"" << svg.y(mid.y)
        << "\" font-size=\"11\" fill=\"#0b5560\" stroke=\"none\">" << i + 1 << "</text>\n";
    }
    o << "</g>\n";
  }
  o << "<g id=\"positions\">\n";
  emitPositions(o, svg, inst.starts, "#2ca02c", "s");
  emitPositions(o, svg, inst.targets, "#9467bd", "t");
  o << "</g>\n</svg>\n";
  return o.str();
}

std::string readFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void writeFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path);
}

namespace {

// Loads an instance, or reports why not.
std::optional<Instance> loadInstance(const std::string& path, std::ostream& err) {
  try {
    return parseInstance(readFile(path));
  } catch (const ParseError& e) {
    err << path << ": " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << e.what() << "\n";
  }
  return std::nullopt;
}

int emit(const std::string& outPath, const std::string& text, std::ostream& out, std::ostream& err) {
  if (outPath.empty()) {
    out << text;
    return kOk;
  }
  try {
    writeFile(outPath, text);
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return kIoError;
  }
  return kOk;
}

}  // namespace

int cmdPlan(const std::string& instancePath, const std::string& outPath, bool timing, std::ostream& out,
            std::ostream& err) {
  const auto inst = loadInstance(instancePath, err);
  if (!inst) return kIoError;
  MotionPlan plan;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    plan = solveAll(*inst);
  } catch (const PreconditionViolation& e) {
    out << violationsJson(e.violations());
    return kViolation;
  } catch (const std::exception& e) {
    err << "planner failure: " << e.what() << "\n";
    return kSelfCheck;
  }
  const double millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  if (const auto v = checkPlan(*inst, plan); !v.empty()) {
    err << "self-check failed\n" << violationsJson(v);
    return kSelfCheck;
  }
  PlanStats stats{plan.moves.size(), plan.totalLength(), std::nullopt};
  if (timing) stats.planningMillis = millis;
  return emit(outPath, serializePlan(*inst, plan, stats), out, err);
}

int cmdVerify(const std::string& instancePath, const std::string& planPath, std::ostream& out, std::ostream& err) {
  const auto inst = loadInstance(instancePath, err);
  if (!inst) return kIoError;
  MotionPlan plan;
  try {
    plan = parsePlan(readFile(planPath));
  } catch (const std::exception& e) {
    err << planPath << ": " << e.what() << "\n";
    return kIoError;
  }
  const auto v = checkPlan(*inst, plan);
  out << violationsJson(v);
  return v.empty() ? kOk : kViolation;
}

int cmdCheck(const std::string& instancePath, std::ostream& out, std::ostream& err) {
  const auto inst = loadInstance(instancePath, err);
  if (!inst) return kIoError;
  const auto v = checkInstance(*inst);
  out << violationsJson(v);
  return v.empty() ? kOk : kViolation;
}

int cmdGen(const GenOptions& opt, const std::string& outPath, std::ostream& out, std::ostream& err) {
  Instance inst;
  try {
    if (opt.figure) {
      const auto f = figureFromName(*opt.figure);
      if (!f) {
        err << "unknown figure '" << *opt.figure << "'\n";
        return kIoError;
      }
      inst = genFigure(*f, opt.epsilon);
    } else if (opt.closePairs) {
      inst = genRandomClosePairs(opt.seed, opt.n, opt.m);
    } else {
      inst = genRandom(opt.seed, opt.n, opt.m, opt.multi);
    }
  } catch (const GenerationFailed& e) {
    err << "generation failed: " << e.what() << "\n";
    return kViolation;
  } catch (const std::invalid_argument& e) {
    err << e.what() << "\n";
    return kIoError;
  }
  return emit(outPath, serializeInstance(inst), out, err);
}

int cmdRender(const std::string& instancePath, const std::string& planPath, const std::string& layers,
              const std::string& outPath, std::ostream& out, std::ostream& err) {
  const auto inst = loadInstance(instancePath, err);
  if (!inst) return kIoError;
  unsigned mask = 0;
  try {
    mask = parseLayers(layers);
  } catch (const std::invalid_argument& e) {
    err << e.what() << "\n";
    return kIoError;
  }
  std::optional<MotionPlan> plan;
  if (!planPath.empty()) {
    try {
      plan = parsePlan(readFile(planPath));
    } catch (const std::exception& e) {
      err << planPath << ": " << e.what() << "\n";
      return kIoError;
    }
  }
  return emit(outPath, renderSvg(*inst, plan ? &*plan : nullptr, mask), out, err);
}

}  // namespace mrmp::cli
