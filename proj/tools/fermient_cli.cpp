// Copyright 2026 The fermient Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line driver for the four pipelines. Exit status 0 means every
// recorded residual is within tolerance, 1 means at least one is not, and
// 2 means the run could not be configured.

#include "fermient/scenarios.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

constexpr const char* kOutputDirEnv = "FERMIENT_OUTPUT_DIR";

struct Options {
  std::vector<double> p;
  std::string p_grid;
  fermient::ScenarioConfig config;
};

void add_common(CLI::App* sub, Options& opt) {
  auto* p = sub->add_option("--p", opt.p, "splitting probability (repeatable)");
  sub->add_option("--p-grid", opt.p_grid, "start:stop:count, endpoints inclusive")->excludes(p);
  sub->add_option("--tol", opt.config.tolerance, "residual tolerance")->check(CLI::NonNegativeNumber);
  sub->add_option("--out", opt.config.out, "output file ('-' for stdout)");
  sub->add_option("--format", opt.config.format, "output format")->check(CLI::IsMember({"json", "csv"}));
}

std::string resolve_output(const fermient::ScenarioConfig& c) {
  if (c.out == "-") return "";
  if (!c.out.empty()) return c.out;
  if (const char* dir = std::getenv(kOutputDirEnv); dir && *dir)
    return (std::filesystem::path(dir) / (c.scenario + "." + c.format)).string();
  return "";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fermient: detection-induced fermionic entanglement pipelines"};
  app.set_version_flag("--version", std::string(fermient::kVersion));
  app.require_subcommand(1);
  Options opt;

  auto* two = app.add_subcommand("two-electron", "split two electrons, detect one per well, analyse");
  auto* cert = app.add_subcommand("certify", "counting statistics after a second split");
  auto* nf = app.add_subcommand("n-fermion", "N fermions, M detected in well A, closed-form comparison");
  auto* det = app.add_subcommand("detector", "controlled-shift counter, readout and mixed-state concurrence");
  for (auto* sub : {two, cert, nf, det}) add_common(sub, opt);
  for (auto* sub : {two, cert, det}) sub->add_option("--internal-dim", opt.config.internal_dim, "internal levels per well (must be 2)");
  nf->add_option("--n", opt.config.n_particles, "number of fermions")->check(CLI::PositiveNumber);
  nf->add_option("--m", opt.config.m, "fermions detected in well A")->check(CLI::PositiveNumber);
  nf->add_option("--internal-dim", opt.config.internal_dim, "internal levels per well (default max(2, N))");
  det->add_option("--detector-levels", opt.config.detector_levels, "counter dimension D")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    auto& cfg = opt.config;
    cfg.scenario = app.get_subcommands().front()->get_name();
    if (cfg.scenario != "n-fermion" && cfg.internal_dim != 0 && cfg.internal_dim != 2)
      throw fermient::ConfigError(cfg.scenario + " is defined for internal_dim = 2 only");
    if (!opt.p_grid.empty()) cfg.p_grid = fermient::parse_p_grid(opt.p_grid);
    else if (!opt.p.empty()) cfg.p_grid = opt.p;
    else cfg.p_grid = {0.5};

    const fermient::RunRecord record = fermient::run_scenario(cfg);
    const std::string text = fermient::render(record);
    const std::string path = resolve_output(cfg);
    if (path.empty()) {
      std::cout << text;
    } else {
      const auto parent = std::filesystem::path(path).parent_path();
      if (!parent.empty()) std::filesystem::create_directories(parent);
      std::ofstream file(path);
      if (!file) throw std::runtime_error("cannot open " + path);
      file << text;
    }
    std::cerr << cfg.scenario << ": " << (record.passed() ? "all residuals within tolerance" : "RESIDUAL EXCEEDS TOLERANCE")
              << (path.empty() ? "" : " (" + path + ")") << '\n';
    return record.passed() ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
