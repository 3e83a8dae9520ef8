#include <cstdio>
#include <exception>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gclm/cli.hpp"

int main(int argc, char** argv) {
  using namespace gclm::cli;
  CLI::App app{"Pole-dynamics and pseudospectral lab for the generalized CLM equation"};
  app.require_subcommand(1);

  std::optional<std::string> config;
  std::optional<std::string> out;
  std::size_t threads = gclm::default_threads();
  std::uint64_t seed = gclm::acceptance::default_seed;
  app.add_option("--config", config, "JSON configuration file");
  app.add_option("--out", out, "output directory");
  app.add_option("--threads", threads, "worker threads for phase-map and verify")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "random seed");

  auto* simulate = app.add_subcommand("simulate", "integrate pole ODEs, write trajectory.csv and event.json");
  auto* exact = app.add_subcommand("exact", "evaluate closed-form or implicit solutions, write exact.csv");
  auto* classify = app.add_subcommand("classify", "print the blowup verdict for real data");
  auto* phase = app.add_subcommand("phase-map", "sweep the (v, p) plane, write phase_map.csv");
  auto* field = app.add_subcommand("field", "sample omega and u on a grid, write field.csv");
  auto* verify = app.add_subcommand("verify", "run acceptance criteria");
  std::vector<int> ids;
  verify->add_option("ids", ids, "criterion ids (default: all)");
  for (auto* sub : {simulate, exact, classify, phase, field, verify}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return ConfigFailure;
  }

  Globals g;
  if (out) g.out = *out;
  g.threads = threads;
  g.seed = seed;
  try {
    const auto cfg = load_config(config);
    if (simulate->parsed()) return cmd_simulate(cfg, g);
    if (exact->parsed()) return cmd_exact(cfg, g);
    if (classify->parsed()) return cmd_classify(cfg, g);
    if (phase->parsed()) return cmd_phase_map(cfg, g);
    if (field->parsed()) return cmd_field(cfg, g);
    return cmd_verify(cfg, ids, g);
  } catch (const gclm::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.kind() == gclm::ErrorKind::ConfigError ? ConfigFailure : RuntimeFailure;
  } catch (const nlohmann::json::exception& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return ConfigFailure;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return RuntimeFailure;
  }
}
