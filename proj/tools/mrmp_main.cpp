// mrmp: plan, verify, check, generate and render unlabeled disc-robot
// instances in simple polygons.

#include <iostream>

#include "CLI11.hpp"
#include "mrmp/cli.hpp"

int main(int argc, char** argv) {
  using namespace mrmp::cli;
  CLI::App app{"Unlabeled motion planning for unit-disc robots in a simple polygon"};
  app.require_subcommand(1);

  std::string instance, planFile, out, layers = "freespace,auras,blocking,plan";
  bool timing = false;
  GenOptions gen;
  std::string figure;

  auto* plan = app.add_subcommand("plan", "Compute a motion plan and self-check it");
  plan->add_option("instance", instance, "Instance file")->required();
  plan->add_option("-o,--out", out, "Plan file (default: stdout)");
  plan->add_flag("--timing", timing, "Record planningMillis in the plan stats");

  auto* verify = app.add_subcommand("verify", "Check a plan against an instance");
  verify->add_option("instance", instance, "Instance file")->required();
  verify->add_option("plan", planFile, "Plan file")->required();

  auto* check = app.add_subcommand("check", "Report instance precondition violations");
  check->add_option("instance", instance, "Instance file")->required();

  auto* g = app.add_subcommand("gen", "Generate a random or figure instance");
  g->add_option("--seed", gen.seed, "Random seed");
  g->add_option("--n", gen.n, "Target polygon vertex count")->check(CLI::Range(4, 100000));
  g->add_option("--m", gen.m, "Number of robots")->check(CLI::Range(1, 100000));
  g->add_flag("--multi", gen.multi, "Several free-space components");
  g->add_flag("--close-pairs", gen.closePairs, "Force a start-target pair closer than 2");
  g->add_option("--fig", figure, "Figure fixture: fig2i, fig2ii, fig3ii, fig6, fig8, fig9");
  g->add_option("--epsilon", gen.epsilon, "Figure parameter in (0, 0.5]");
  g->add_option("-o,--out", out, "Instance file (default: stdout)");

  auto* render = app.add_subcommand("render", "Draw an instance and optional plan as SVG");
  render->add_option("instance", instance, "Instance file")->required();
  render->add_option("--plan", planFile, "Plan file");
  render->add_option("--layers", layers, "freespace,auras,blocking,motiongraph,plan");
  render->add_option("-o,--out", out, "SVG file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kIoError;
  }

  if (*plan) return cmdPlan(instance, out, timing, std::cout, std::cerr);
  if (*verify) return cmdVerify(instance, planFile, std::cout, std::cerr);
  if (*check) return cmdCheck(instance, std::cout, std::cerr);
  if (*g) {
    if (!figure.empty()) gen.figure = figure;
    return cmdGen(gen, out, std::cout, std::cerr);
  }
  return cmdRender(instance, planFile, layers, out, std::cout, std::cerr);
}
