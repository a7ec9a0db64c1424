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

#pragma once

// Sweep orchestration, checkpoint/resume, experiment comparison and diagnostic dumps.

#include "floquet_loss/config.hpp"

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace floquet_loss {

/// Shortest round-trip text for a double (17 significant digits).
std::string format_double(double x);

/// --threads value if positive, else FLOQUET_LOSS_THREADS, else hardware concurrency.
int resolve_thread_count(std::optional<int> requested);

/// Runs compute(i) for i in [0, count) on `threads` workers and hands results to commit(i, r)
/// in index order on the calling thread. commit returning false stops the run after the
/// points already in flight.
template <typename Result>
void run_ordered(std::size_t count, int threads, const std::function<Result(std::size_t)>& compute,
                 const std::function<bool(std::size_t, Result&&)>& commit);

struct RunOptions {
  bool resume = false;
  std::optional<int> threads;
  std::optional<std::size_t> stop_after;  // stop once this many new points are committed
  std::ostream* log = nullptr;
};

struct SweepSummary {
  std::size_t total_points = 0;
  std::size_t resumed = 0;
  std::size_t computed = 0;
  std::size_t failed = 0;
  bool interrupted = false;
  std::filesystem::path csv;
  std::filesystem::path hbar_csv;
  std::filesystem::path checkpoint;
};

inline constexpr int kCheckpointSchema = 1;

const std::vector<std::string>& sweep_columns();
const std::vector<std::string>& hbar_columns();

SweepSummary run_sweep(const SweepConfig& config, const RunOptions& options = {});

struct CompareSummary {
  std::filesystem::path output;
  std::size_t rows = 0;
  std::vector<std::string> warnings;
};

const std::vector<std::string>& comparison_columns();

/// Joins measured rows with the sweep prediction at the nearest Omega_q grid point. The sweep
/// is completed (resuming any checkpoint) if needed.
CompareSummary compare(const SweepConfig& config, const std::filesystem::path& data,
                       const std::optional<std::filesystem::path>& out = std::nullopt,
                       const RunOptions& options = {});

enum class DumpKind { Spectra, Overlaps, Rates, Hbar };

DumpKind dump_kind_from_string(const std::string& name);

std::vector<std::filesystem::path> dump_diagnostics(const SweepConfig& config, DumpKind what,
                                                    const std::optional<std::filesystem::path>& out_dir = std::nullopt,
                                                    const RunOptions& options = {});

/// Rows of the bath-spectra grid: omega_ghz, j_rad, j_diel, j_qpg_plus, j_qpg_minus, sigma.
void write_spectra_csv(const SweepConfig& config, std::ostream& out);

/// Reads a CSV written by this tool (comment lines skipped) as header + string rows.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> comments;
  int column(const std::string& name) const;
};
CsvTable read_csv(const std::filesystem::path& path);

}  // namespace floquet_loss

#include "floquet_loss/detail/run_ordered.hpp"
