#pragma once

// Problem instances: JSON file format, seeded random generator, and builders
// for the classic separation constructions.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mrmp/geom.hpp"

namespace mrmp {

using geom::Point;

enum class Expected { Solvable, PreconditionViolation };

struct Instance {
  std::vector<Point> workspace;  // simple polygon
  std::vector<Point> starts, targets;
  std::string name;
  std::optional<Expected> expected;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::string path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

class GenerationFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kInstanceVersion = 1;
inline constexpr const char* kInstanceExtension = ".mrmp.json";

Instance parseInstance(const std::string& text);
std::string serializeInstance(const Instance& inst);

/// Comb-shaped corridor with perturbed teeth and rejection-sampled positions.
/// Single-component instances use bichromatic separation ≥ 0, multi-component
/// ones ≥ 3 with every component balanced.
Instance genRandom(std::uint64_t seed, int n, int m, bool multiComponent);

/// Like genRandom, but forces at least one start-target pair closer than 2.
Instance genRandomClosePairs(std::uint64_t seed, int n, int m);

enum class Figure { Fig2i, Fig2ii, Fig3ii, Fig6, Fig8, Fig9 };

std::optional<Figure> figureFromName(const std::string& name);
std::string figureName(Figure f);
Instance genFigure(Figure which, double epsilon);

}  // namespace mrmp
