// Copyright 2026 The floquet-loss Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: run, compare, dump.

#include "floquet_loss/config.hpp"
#include "floquet_loss/sweep.hpp"

#include <CLI11.hpp>

#include <exception>
#include <iostream>
#include <optional>
#include <string>

namespace fl = floquet_loss;

int main(int argc, char** argv) {
  CLI::App app{"Floquet-Markov loss rates of strongly driven transmons"};
  app.set_version_flag("--version", std::string(fl::kVersion));
  app.require_subcommand(1);

  std::string config_path;
  std::optional<int> threads;
  bool resume = false;
  std::optional<std::size_t> stop_after;
  std::string data_path, out_path, what;

  auto* run = app.add_subcommand("run", "Evaluate the configured sweep");
  run->add_option("--config", config_path, "Sweep configuration (JSON)")->required()->check(CLI::ExistingFile);
  run->add_flag("--resume", resume, "Continue from the checkpoint in the output directory");
  run->add_option("--threads", threads, "Worker threads (default: FLOQUET_LOSS_THREADS or all cores)")
      ->check(CLI::PositiveNumber);
  run->add_option("--stop-after", stop_after, "Stop after this many newly computed points");

  auto* cmp = app.add_subcommand("compare", "Join sweep predictions with measured kappa");
  cmp->add_option("--config", config_path, "Sweep configuration (JSON)")->required()->check(CLI::ExistingFile);
  cmp->add_option("--data", data_path, "Experiment CSV")->required()->check(CLI::ExistingFile);
  cmp->add_option("--out", out_path, "Output CSV (default: <output>/comparison.csv)");
  cmp->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);

  auto* dump = app.add_subcommand("dump", "Write diagnostic CSVs");
  dump->add_option("--what", what, "spectra, overlaps, rates or hbar")
      ->required()
      ->check(CLI::IsMember({"spectra", "overlaps", "rates", "hbar"}));
  dump->add_option("--config", config_path, "Sweep configuration (JSON)")->required()->check(CLI::ExistingFile);
  dump->add_option("--out", out_path, "Output directory (default: configured output directory)");
  dump->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    const fl::SweepConfig cfg = fl::load_config(config_path);
    fl::RunOptions options;
    options.threads = threads;
    options.log = &std::cerr;

    if (run->parsed()) {
      options.resume = resume;
      options.stop_after = stop_after;
      const auto s = fl::run_sweep(cfg, options);
      std::cerr << s.resumed + s.computed << "/" << s.total_points << " points written to " << s.csv.string();
      if (s.failed > 0) std::cerr << " (" << s.failed << " failed)";
      std::cerr << "\n";
      if (s.interrupted) std::cerr << "stopped early; rerun with --resume to continue\n";
      return 0;
    }
    if (cmp->parsed()) {
      std::optional<std::filesystem::path> out;
      if (!out_path.empty()) out = out_path;
      const auto s = fl::compare(cfg, data_path, out, options);
      for (const auto& w : s.warnings) std::cerr << "warning: " << w << "\n";
      std::cerr << s.rows << " rows written to " << s.output.string() << "\n";
      return 0;
    }
    std::optional<std::filesystem::path> out;
    if (!out_path.empty()) out = out_path;
    for (const auto& p : fl::dump_diagnostics(cfg, fl::dump_kind_from_string(what), out, options))
      std::cerr << "wrote " << p.string() << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
