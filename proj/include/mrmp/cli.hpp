#pragma once

// Command implementations behind the mrmp tool, plus the plan file format.
// Commands return process exit codes: 0 ok, 1 I/O or malformed input,
// 2 domain violation, 3 self-check failure.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mrmp/instance.hpp"
#include "mrmp/plan.hpp"
#include "mrmp/verifier.hpp"

namespace mrmp::cli {

enum ExitCode { kOk = 0, kIoError = 1, kViolation = 2, kSelfCheck = 3 };

struct PlanStats {
  std::size_t moveCount = 0;
  double totalPathLength = 0;
  std::optional<double> planningMillis;
};

std::string serializePlan(const Instance& inst, const MotionPlan& plan, const PlanStats& stats);
/// Throws ParseError with the path of the offending field.
MotionPlan parsePlan(const std::string& text);

std::string violationsJson(const std::vector<Violation>& v);

enum Layer : unsigned {
  kFreeSpace = 1,
  kAuras = 2,
  kBlocking = 4,
  kMotionGraph = 8,
  kPlan = 16,
};
/// Comma-separated layer names; throws std::invalid_argument on unknown names.
unsigned parseLayers(const std::string& list);
std::string renderSvg(const Instance& inst, const MotionPlan* plan, unsigned layers);

std::string readFile(const std::string& path);   // throws std::runtime_error
void writeFile(const std::string& path, const std::string& text);

// Output goes to `outPath`, or to `out` when the path is empty. Reports and
// diagnostics go to `out` and `err`.
int cmdPlan(const std::string& instancePath, const std::string& outPath, bool timing, std::ostream& out,
            std::ostream& err);
int cmdVerify(const std::string& instancePath, const std::string& planPath, std::ostream& out, std::ostream& err);
int cmdCheck(const std::string& instancePath, std::ostream& out, std::ostream& err);

struct GenOptions {
  std::uint64_t seed = 1;
  int n = 20, m = 4;
  bool multi = false, closePairs = false;
  std::optional<std::string> figure;
  double epsilon = 0.1;
};
int cmdGen(const GenOptions& opt, const std::string& outPath, std::ostream& out, std::ostream& err);
int cmdRender(const std::string& instancePath, const std::string& planPath, const std::string& layers,
              const std::string& outPath, std::ostream& out, std::ostream& err);

}  // namespace mrmp::cli
