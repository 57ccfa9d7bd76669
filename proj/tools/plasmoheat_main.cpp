#include "plasmoheat/config.hpp"
#include "plasmoheat/csv.hpp"
#include "plasmoheat/harness.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_dir = ".";
  int threads = 1;
  bool force = false;
};

void add_common(CLI::App* sub, CommonOpts& opts) {
  sub->add_option("--config", opts.config_path, "configuration file (json)")
      ->required()
      ->check(CLI::ExistingFile);
  sub->add_option("--out", opts.out_dir, "output directory");
  sub->add_option("--threads", opts.threads, "worker threads")->check(CLI::PositiveNumber);
  sub->add_flag("--force", opts.force, "bypass the invertibility gates (warns)");
}

int run_mode(const CommonOpts& opts, ph::RunMode mode) {
  ph::SimulationConfig cfg;
  try {
    cfg = ph::parse_config(opts.config_path);
  } catch (const ph::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 3;
  }
  cfg.mode = mode;
  cfg.out_dir = opts.out_dir;
  cfg.threads = opts.threads;
  cfg.force = opts.force;
  if (cfg.force)
    std::cerr << "warning: --force set, invertibility gates bypassed\n";
  return ph::run(cfg);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"plasmoheat: heat generation by clusters of plasmonic nanoparticles"};
  app.require_subcommand(1);

  CommonOpts opts;
  auto* resonance = app.add_subcommand("resonance", "scan |1 + eta lambda| over k");
  auto* discrete = app.add_subcommand("discrete", "Foldy-Lax + Volterra pipeline");
  auto* eff_em = app.add_subcommand("effective-em", "effective Maxwell solve");
  auto* eff_heat = app.add_subcommand("effective-heat", "effective heat pipeline");
  auto* compare = app.add_subcommand("compare", "discrete vs effective sweep");
  for (auto* sub : {resonance, discrete, eff_em, eff_heat, compare})
    add_common(sub, opts);

  CLI11_PARSE(app, argc, argv);

  if (resonance->parsed()) return run_mode(opts, ph::RunMode::Resonance);
  if (discrete->parsed()) return run_mode(opts, ph::RunMode::Discrete);
  if (eff_em->parsed()) return run_mode(opts, ph::RunMode::EffectiveEM);
  if (eff_heat->parsed()) return run_mode(opts, ph::RunMode::EffectiveHeat);
  if (compare->parsed()) return run_mode(opts, ph::RunMode::Compare);
  return 1;
}
