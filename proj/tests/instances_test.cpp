#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "mrmp/freespace.hpp"
#include "mrmp/instance.hpp"
#include "mrmp/verifier.hpp"

using namespace mrmp;

namespace {

const char* kMinimal = R"({
  "version": 1,
  "workspace": [[0, 0], [10, 0], [10, 6], [0, 6]],
  "starts": [[2, 3]],
  "targets": [[8, 3]]
})";

std::string parseErrorPath(const std::string& text) {
  try {
    parseInstance(text);
  } catch (const ParseError& e) {
    return e.path();
  }
  return "<no error>";
}

bool has(const std::vector<Violation>& v, ViolationKind k, double* value = nullptr) {
  for (const auto& x : v)
    if (x.kind == k) {
      if (value) *value = x.value;
      return true;
    }
  return false;
}

}  // namespace

TEST(Parse, Minimal) {
  const Instance in = parseInstance(kMinimal);
  EXPECT_EQ(in.workspace.size(), 4u);
  ASSERT_EQ(in.starts.size(), 1u);
  EXPECT_EQ(in.starts[0], (Point{2, 3}));
  EXPECT_EQ(in.targets[0], (Point{8, 3}));
  EXPECT_TRUE(in.name.empty());
  EXPECT_FALSE(in.expected);
  EXPECT_TRUE(checkInstance(in).empty());
}

TEST(Parse, Metadata) {
  const Instance in = parseInstance(R"({"version": 1, "name": "box", "expected": "preconditionViolation",
    "workspace": [[0,0],[4,0],[4,4]], "starts": [], "targets": []})");
  EXPECT_EQ(in.name, "box");
  ASSERT_TRUE(in.expected);
  EXPECT_EQ(*in.expected, Expected::PreconditionViolation);
}

TEST(Parse, Errors) {
  EXPECT_EQ(parseErrorPath(R"({"version": 1, "workspace": [[0,0],[1,0]], "starts": [], "targets": []})"),
            "workspace");
  EXPECT_EQ(parseErrorPath(R"({"version": 1, "workspace": [[0,0],[4,0],[4,4]], "starts": [[1,1],[2,"x"]], "targets": []})"),
            "starts[1][1]");
  EXPECT_EQ(parseErrorPath(R"({"version": 1, "workspace": [[0,0],[4,0],[4,4]], "starts": [[1]], "targets": []})"),
            "starts[0]");
  EXPECT_EQ(parseErrorPath(R"({"version": 2, "workspace": [[0,0],[4,0],[4,4]], "starts": [], "targets": []})"),
            "version");
  EXPECT_EQ(parseErrorPath(R"({"version": 1, "workspace": [[0,0],[4,0],[4,4]], "starts": []})"), "targets");
  EXPECT_EQ(parseErrorPath(R"({"version": 1, "expected": "maybe", "workspace": [[0,0],[4,0],[4,4]], "starts": [], "targets": []})"),
            "expected");
  EXPECT_EQ(parseErrorPath("{\n\"version\": 1,\n\"workspace\": [[0,0] [4,0]]\n}"), "line 3");
  EXPECT_EQ(parseErrorPath("[1, 2]"), "$");
}

TEST(Parse, CountMismatchReportedByChecker) {
  const Instance in = parseInstance(R"({"version": 1, "workspace": [[0,0],[20,0],[20,10],[0,10]],
    "starts": [[3,3],[3,8]], "targets": [[15,5]]})");
  EXPECT_EQ(in.starts.size(), 2u);
  EXPECT_EQ(in.targets.size(), 1u);
  EXPECT_TRUE(has(checkInstance(in), ViolationKind::Charge));
}

TEST(Serialize, RoundTripIsBitExact) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  Instance in;
  for (int i = 0; i < 50; ++i) in.workspace.push_back({u(rng), u(rng)});
  for (int i = 0; i < 20; ++i) in.starts.push_back({u(rng), u(rng)});
  for (int i = 0; i < 20; ++i) in.targets.push_back({u(rng) * 1e-12, std::nextafter(1.0, 2.0)});
  in.name = "rt";
  in.expected = Expected::Solvable;
  const Instance back = parseInstance(serializeInstance(in));
  EXPECT_EQ(back.workspace, in.workspace);
  EXPECT_EQ(back.starts, in.starts);
  EXPECT_EQ(back.targets, in.targets);
  EXPECT_EQ(back.name, in.name);
  EXPECT_EQ(back.expected, in.expected);
  EXPECT_EQ(serializeInstance(back), serializeInstance(in));
}

TEST(GenRandom, SeedOneClean) {
  const Instance in = genRandom(1, 20, 4, false);
  EXPECT_EQ(in.starts.size(), 4u);
  EXPECT_EQ(in.targets.size(), 4u);
  EXPECT_TRUE(polygonDefect(in.workspace).empty());
  EXPECT_TRUE(checkInstance(in).empty());
}

TEST(GenRandom, Deterministic) {
  for (bool multi : {false, true}) {
    EXPECT_EQ(serializeInstance(genRandom(42, 24, 5, multi)), serializeInstance(genRandom(42, 24, 5, multi)));
    EXPECT_NE(serializeInstance(genRandom(42, 24, 5, multi)), serializeInstance(genRandom(43, 24, 5, multi)));
  }
}

TEST(GenRandom, MultiComponentBalanced) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Instance in = genRandom(seed, 30, 6, true);
    const FreeSpace fs = computeFreeSpace(in.workspace);
    EXPECT_GE(fs.components.size(), 2u);
    std::vector<int> charge(fs.components.size(), 0);
    for (Point s : in.starts) ++charge[fs.componentOf(s).value()];
    for (Point t : in.targets) --charge[fs.componentOf(t).value()];
    for (int q : charge) EXPECT_EQ(q, 0);
    EXPECT_TRUE(checkInstance(in).empty()) << in.name;
  }
}

TEST(GenRandom, SeparationsHold) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const bool multi = seed % 2 == 0;
    const Instance in = genRandom(seed, 10 + static_cast<int>(seed), 2 + static_cast<int>(seed % 5), multi);
    double mu = std::numeric_limits<double>::infinity(), beta = mu;
    for (std::size_t i = 0; i < in.starts.size(); ++i)
      for (std::size_t j = 0; j < in.starts.size(); ++j) {
        if (i < j) mu = std::min({mu, geom::dist(in.starts[i], in.starts[j]), geom::dist(in.targets[i], in.targets[j])});
        beta = std::min(beta, geom::dist(in.starts[i], in.targets[j]));
      }
    EXPECT_GE(mu, 4.0);
    if (multi) EXPECT_GE(beta, 3.0);
  }
}

TEST(GenRandom, ClosePairsPresent) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Instance in = genRandomClosePairs(seed, 16, 4);
    double closest = std::numeric_limits<double>::infinity();
    for (Point s : in.starts)
      for (Point t : in.targets) closest = std::min(closest, geom::dist(s, t));
    EXPECT_LT(closest, 2.0);
    EXPECT_TRUE(checkInstance(in).empty());
  }
}

TEST(GenRandom, TooFewVerticesFails) { EXPECT_THROW(genRandom(1, 3, 2, false), GenerationFailed); }

TEST(GenFigure, Fig2iMuViolation) {
  const Instance in = genFigure(Figure::Fig2i, 0.1);
  double mu = 0;
  const auto v = checkInstance(in);
  ASSERT_TRUE(has(v, ViolationKind::Mu, &mu));
  EXPECT_NEAR(mu, 3.9, 1e-9);
  EXPECT_NEAR(geom::dist(in.starts[0], in.starts[1]), 3.9, 1e-9);
  EXPECT_EQ(in.expected, Expected::PreconditionViolation);
}

TEST(GenFigure, Fig2iArcChordError) {
  for (double eps : {0.5, 0.1, 0.02}) {
    const Instance in = genFigure(Figure::Fig2i, eps);
    // Vertices on the chamber circle around the origin: sagitta of each chord.
    // The chamber radius is the norm shared by the most vertices.
    double R = 0;
    std::size_t best = 0;
    for (Point p : in.workspace) {
      std::size_t n = 0;
      for (Point q : in.workspace) n += std::abs(geom::norm(q) - geom::norm(p)) < 1e-9;
      if (n > best) best = n, R = geom::norm(p);
    }
    int chords = 0;
    for (std::size_t i = 0; i < in.workspace.size(); ++i) {
      const Point a = in.workspace[i], b = in.workspace[(i + 1) % in.workspace.size()];
      if (std::abs(geom::norm(a) - R) > 1e-9 || std::abs(geom::norm(b) - R) > 1e-9) continue;
      const double half = geom::dist(a, b) / 2;
      EXPECT_LE(R - std::sqrt(R * R - half * half), eps / 4 + 1e-12);
      ++chords;
    }
    EXPECT_GT(chords, 3);
  }
}

TEST(GenFigure, Fig2iiBetaViolation) {
  const Instance in = genFigure(Figure::Fig2ii, 0.1);
  EXPECT_EQ(computeFreeSpace(in.workspace).components.size(), 2u);
  double beta = 0;
  ASSERT_TRUE(has(checkInstance(in), ViolationKind::Beta, &beta));
  EXPECT_NEAR(beta, 2.9, 1e-9);
  EXPECT_EQ(in.expected, Expected::PreconditionViolation);
}

TEST(GenFigure, ValidFiguresClean) {
  for (Figure f : {Figure::Fig3ii, Figure::Fig6, Figure::Fig8, Figure::Fig9}) {
    const Instance in = genFigure(f, 0.1);
    EXPECT_TRUE(checkInstance(in).empty()) << figureName(f);
    EXPECT_EQ(in.expected, Expected::Solvable);
    EXPECT_EQ(in.name, figureName(f));
  }
  EXPECT_EQ(computeFreeSpace(genFigure(Figure::Fig8, 0.1).workspace).components.size(), 2u);
}

TEST(GenFigure, NamesAndEpsilonRange) {
  for (Figure f : {Figure::Fig2i, Figure::Fig2ii, Figure::Fig3ii, Figure::Fig6, Figure::Fig8, Figure::Fig9})
    EXPECT_EQ(figureFromName(figureName(f)), f);
  EXPECT_FALSE(figureFromName("fig7"));
  EXPECT_THROW(genFigure(Figure::Fig2i, 0.0), std::invalid_argument);
  EXPECT_THROW(genFigure(Figure::Fig2i, 0.6), std::invalid_argument);
  EXPECT_NO_THROW(genFigure(Figure::Fig2ii, 0.5));
}
