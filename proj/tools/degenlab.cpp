#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "degenlab/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Degenerate weighted Poisson solver and estimator harness"};
  app.set_help_flag("-h,--help", "Print this help message and exit");

  std::string command;
  app.add_option("command", command, "solve | verify | theorems | a2")
      ->required()
      ->check(CLI::IsMember({"solve", "verify", "theorems", "a2"}));

  std::string config_file;
  app.add_option("--config", config_file, "key = value configuration file");

  // Every remaining flag lands in the same key space as the configuration file.
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> opts;
  const auto flag = [&](const std::string& key, const std::string& help) {
    opts[key] = app.add_option("--" + key, values[key], help);
  };
  flag("domain", "interval | ball | square | rectangle (comma list for theorems)");
  flag("beta", "weight exponent, beta < 1");
  flag("betas", "comma-separated beta sweep");
  flag("n", "cells per axis, 16 <= n <= 2^22");
  flag("gamma", "grading exponent (default max(1, 2/(1-beta)))");
  flag("sigma", "boundary neighbourhood width");
  flag("eta1", "lower log exponent of the bracket");
  flag("eta2", "upper log exponent of the bracket");
  flag("jobs", "concurrent sweep cases");
  flag("seed", "seed of the Hölder pair sampler");
  flag("out", "output directory (fallback DEGENLAB_OUT)");
  flag("oracle", "verify: source_dbeta | source_one | one_d | barrier");
  flag("eta", "verify: barrier log exponent");
  flag("perturb", "verify: scale the closed form by 1 + EPS (negative control)");
  flag("N", "ball dimension");
  flag("R", "ball radius");
  flag("lx", "rectangle width");
  flag("ly", "rectangle height");
  flag("depth", "a2: dyadic depth");
  std::vector<std::string> source;
  auto* f_opt = app.add_option("--f", source, "one | dbeta | custom-poly C0,C1,...")->expected(1, 2);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    degenlab::KeyValues file;
    if (!config_file.empty()) file = degenlab::read_config_file(config_file);
    degenlab::KeyValues flags;
    for (const auto& [key, opt] : opts)
      if (opt->count() > 0) flags[key] = values[key];
    if (f_opt->count() > 0) {
      std::string joined;
      for (const auto& s : source) joined += (joined.empty() ? "" : " ") + s;
      flags["f"] = joined;
    }
    const degenlab::RunConfig cfg = degenlab::make_config(command, file, flags, std::getenv("DEGENLAB_OUT"));
    return degenlab::run_command(cfg, std::cout);
  } catch (const degenlab::NonConvergence& e) {
    std::cerr << "error: " << e.what() << " (residual " << e.residual() << " after " << e.iterations()
              << " iterations)\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  }
}
