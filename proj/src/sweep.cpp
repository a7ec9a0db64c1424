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

#include "floquet_loss/sweep.hpp"

#include "floquet_loss/units.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace floquet_loss {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

int resolve_thread_count(std::optional<int> requested) {
  if (requested && *requested > 0) return *requested;
  if (const char* env = std::getenv("FLOQUET_LOSS_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

const std::vector<std::string>& sweep_columns() {
  static const std::vector<std::string> cols = {
      "point",          "n_g",           "omega_q_ghz",      "n_r",           "scan_parameter",   "scan_value",
      "status",         "n_ch",          "n_active",         "n_ch_used",     "ground_mode",      "ground_max_overlap",
      "ground_label",   "ground_hbar_ghz", "loss_total_w",   "loss_photons_per_s", "loss_rad_w",   "loss_diel_w",
      "loss_qpg_w",     "kappa_pred_mhz", "kappa_shift_mhz", "vjj_volts",     "vjj_ok",           "message"};
  return cols;
}

const std::vector<std::string>& hbar_columns() {
  static const std::vector<std::string> cols = {"point", "n_g",        "omega_q_ghz", "n_r",  "mode", "hbar_ghz",
                                                "quasienergy_ghz", "max_overlap", "label", "ground_connected"};
  return cols;
}

const std::vector<std::string>& comparison_columns() {
  static const std::vector<std::string> cols = {
      "line",           "omega_q_ghz",    "grid_omega_q_ghz", "n_r",      "omega_d_ghz", "kappa_meas_mhz",
      "kappa_pred_mhz", "residual_mhz",   "t_photon_rate",    "r_source", "flag"};
  return cols;
}

namespace {

std::string join(const std::vector<std::string>& fields, const std::string& sep = ",") {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out += sep;
    out += fields[i];
  }
  return out;
}

// Free text goes into the last column; keep it free of separators and line breaks.
std::string sanitize(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n' || c == '\r' || c == '"') c = c == ',' ? ';' : ' ';
  return s;
}

void write_preamble(std::ostream& out, const SweepConfig& cfg) {
  out << "# " << kVersion << "\n";
  out << "# config " << cfg.resolved.dump() << "\n";
  for (const auto& w : cfg.warnings) out << "# warning " << sanitize(w) << "\n";
}

const char* label_name(ModeLabel l) { return l == ModeLabel::Regular ? "regular" : "chaotic"; }

double max_overlap(const ChaoticClassification& chaos, int mode) { return chaos.overlaps.row(mode).maxCoeff(); }

struct PointOutput {
  std::vector<std::string> rows;
  std::vector<std::string> hbar_rows;
  bool failed = false;
};

std::vector<std::string> hbar_rows_for(const SweepConfig& cfg, std::size_t point, double n_g, double omega_q,
                                       double n_r, const FloquetBasis& basis, const ChaoticClassification& chaos,
                                       int limit) {
  std::vector<std::string> rows;
  const int ground = connected_mode(chaos, 0);
  const int count = std::min(limit, basis.dim());
  for (int m = 0; m < count; ++m) {
    rows.push_back(join({std::to_string(point), format_double(n_g), format_double(units::angular_to_ghz(omega_q)),
                         format_double(n_r), std::to_string(m), format_double(units::angular_to_ghz(basis.avg_energy[m])),
                         format_double(units::angular_to_ghz(basis.quasienergies[m])),
                         format_double(max_overlap(chaos, m)), label_name(chaos.labels[m]), m == ground ? "1" : "0"}));
  }
  (void)cfg;
  return rows;
}

PointOutput compute_point(const SweepConfig& cfg, std::size_t point) {
  const std::size_t axis_index = point % cfg.axis.size();
  const double n_g = cfg.n_g_values[point / cfg.axis.size()];
  const double omega_q = cfg.omega_q_at(axis_index);
  const double n_r = cfg.n_r_at(axis_index);
  const auto scans = cfg.scan_values();
  const std::string scan_name = cfg.bath_scan ? cfg.bath_scan->parameter : "none";

  const auto head = [&](std::optional<double> sv) -> std::vector<std::string> {
    return {std::to_string(point), format_double(n_g), format_double(units::angular_to_ghz(omega_q)),
            format_double(n_r), scan_name, sv ? format_double(*sv) : "nan"};
  };

  PointOutput out;
  try {
    std::vector<double> offsets = cfg.parity_average ? std::vector<double>{n_g - 0.25, n_g + 0.25}
                                                     : std::vector<double>{n_g};
    const DriveParams drive{omega_q, cfg.omega_d};
    PipelineOptions opts;
    opts.n_active = cfg.n_active;
    std::vector<FloquetPoint> points;
    for (double ng : offsets) {
      TransmonParams t = cfg.transmon;
      t.n_g = ng;
      points.push_back(solve_floquet_point(t, drive, cfg.numerical, cfg.mechanisms, opts));
    }
    const bool scans_gap = cfg.bath_scan && cfg.bath_scan->parameter == "delta_al_uev";
    std::vector<std::unique_ptr<PairBreakingCache>> caches;
    for (std::size_t p = 0; p < points.size(); ++p)
      caches.push_back(std::make_unique<PairBreakingCache>(units::microelectronvolt_to_angular(cfg.bath.delta_al_uev)));

    const FloquetPoint& first = points.front();
    const int ground = first.ground_connected();
    for (const auto& sv : scans) {
      LossReport report;
      for (std::size_t p = 0; p < points.size(); ++p) {
        const BathSet baths = cfg.baths(points[p].params, sv);
        const LossReport r = evaluate_point(points[p], baths, scans_gap ? nullptr : caches[p].get()).report;
        report = p == 0 ? r : mean_loss(report, r);
      }
      const auto part = [&](Mechanism m) {
        const auto it = report.loss_by_mechanism.find(m);
        return it == report.loss_by_mechanism.end() ? std::numeric_limits<double>::quiet_NaN() : it->second;
      };
      const double kappa_pred = n_r > 0.0 ? predicted_kappa(report, n_r, cfg.omega_d, cfg.resonator.kappa_o)
                                          : std::numeric_limits<double>::quiet_NaN();
      double delta_al = units::microelectronvolt_to_angular(cfg.bath.delta_al_uev);
      if (scans_gap && sv) delta_al = units::microelectronvolt_to_angular(*sv);
      const JunctionVoltage vjj = vjj_amplitude(omega_q, delta_al);
      std::vector<std::string> row = head(sv);
      const std::vector<std::string> tail = {
          "ok",
          std::to_string(report.n_ch),
          std::to_string(report.n_active),
          std::to_string(report.n_ch_used),
          std::to_string(ground),
          format_double(max_overlap(first.chaos, ground)),
          label_name(first.chaos.labels[ground]),
          format_double(units::angular_to_ghz(first.basis.avg_energy[ground])),
          format_double(report.loss_total),
          format_double(report.loss_photons),
          format_double(part(Mechanism::Rad)),
          format_double(part(Mechanism::Diel)),
          format_double(part(Mechanism::Qpg)),
          format_double(units::angular_to_mhz(kappa_pred)),
          format_double(units::angular_to_mhz(kappa_pred - cfg.resonator.kappa_o)),
          format_double(vjj.volts),
          vjj.ok ? "1" : "0",
          sanitize(join(report.warnings, "|"))};
      row.insert(row.end(), tail.begin(), tail.end());
      out.rows.push_back(join(row));
    }
    out.hbar_rows = hbar_rows_for(cfg, point, n_g, omega_q, n_r, first.basis, first.chaos, cfg.hbar_modes);
  } catch (const std::exception& e) {
    out.failed = true;
    out.rows.clear();
    out.hbar_rows.clear();
    for (const auto& sv : scans) {
      std::vector<std::string> row = head(sv);
      row.push_back("error");
      for (std::size_t c = row.size(); c + 1 < sweep_columns().size(); ++c) row.push_back("nan");
      row.push_back(sanitize(e.what()));
      out.rows.push_back(join(row));
    }
  }
  return out;
}

struct CheckpointRecord {
  std::size_t point = 0;
  std::vector<std::string> rows;
  std::vector<std::string> hbar_rows;
  bool failed = false;
};

json header_record(const SweepConfig& cfg) {
  return {{"kind", "header"},
          {"schema", kCheckpointSchema},
          {"config_hash", cfg.hash},
          {"version", kVersion},
          {"total_points", cfg.point_count()},
          {"config", cfg.resolved}};
}

json point_record(const CheckpointRecord& r) {
  return {{"kind", "point"}, {"point", r.point}, {"failed", r.failed}, {"rows", r.rows}, {"hbar_rows", r.hbar_rows}};
}

// Completed points, in order, as a contiguous prefix. A trailing partial line (interrupted
// write) is dropped.
std::vector<CheckpointRecord> read_checkpoint(const fs::path& path, const SweepConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read checkpoint " + path.string());
  std::vector<std::string> lines;
  std::string line;
  bool trailing_newline = true;
  while (std::getline(in, line)) {
    lines.push_back(line);
    trailing_newline = !in.eof();
  }
  std::vector<CheckpointRecord> records;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    json j;
    try {
      j = json::parse(lines[i]);
    } catch (const json::parse_error&) {
      if (i + 1 == lines.size()) break;
      throw std::runtime_error("checkpoint " + path.string() + " line " + std::to_string(i + 1) + " is corrupt");
    }
    if (i + 1 == lines.size() && !trailing_newline) break;
    if (i == 0) {
      if (j.value("kind", "") != "header") throw std::runtime_error("checkpoint has no header record");
      if (j.value("schema", -1) != kCheckpointSchema)
        throw std::runtime_error("checkpoint schema " + std::to_string(j.value("schema", -1)) + " is not supported");
      const std::string hash = j.value("config_hash", "");
      if (hash != cfg.hash)
        throw std::runtime_error("checkpoint was written for a different config (hash " + hash + ", current " +
                                 cfg.hash + "); refusing to resume");
      continue;
    }
    CheckpointRecord r;
    r.point = j.at("point").get<std::size_t>();
    r.rows = j.at("rows").get<std::vector<std::string>>();
    r.hbar_rows = j.at("hbar_rows").get<std::vector<std::string>>();
    r.failed = j.value("failed", false);
    if (r.point != records.size()) break;
    records.push_back(std::move(r));
  }
  if (lines.empty()) return {};
  return records;
}

void write_file_atomically(const fs::path& path, const std::string& text) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << text;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

}  // namespace

SweepSummary run_sweep(const SweepConfig& cfg, const RunOptions& options) {
  SweepSummary summary;
  summary.total_points = cfg.point_count();
  const fs::path dir(cfg.output_dir);
  fs::create_directories(dir);
  summary.csv = dir / "sweep.csv";
  summary.hbar_csv = dir / "hbar.csv";
  summary.checkpoint = dir / "checkpoint.jsonl";

  std::vector<CheckpointRecord> done;
  if (options.resume && fs::exists(summary.checkpoint)) done = read_checkpoint(summary.checkpoint, cfg);
  if (done.size() > summary.total_points) done.resize(summary.total_points);
  summary.resumed = done.size();

  std::ostringstream csv_text, hbar_text, ckpt_text;
  write_preamble(csv_text, cfg);
  csv_text << join(sweep_columns()) << "\n";
  write_preamble(hbar_text, cfg);
  hbar_text << join(hbar_columns()) << "\n";
  ckpt_text << header_record(cfg).dump() << "\n";
  for (const auto& r : done) {
    for (const auto& row : r.rows) csv_text << row << "\n";
    for (const auto& row : r.hbar_rows) hbar_text << row << "\n";
    ckpt_text << point_record(r).dump() << "\n";
    if (r.failed) ++summary.failed;
  }
  write_file_atomically(summary.csv, csv_text.str());
  write_file_atomically(summary.hbar_csv, hbar_text.str());
  write_file_atomically(summary.checkpoint, ckpt_text.str());

  std::ofstream csv(summary.csv, std::ios::app);
  std::ofstream hbar(summary.hbar_csv, std::ios::app);
  std::ofstream ckpt(summary.checkpoint, std::ios::app);
  if (!csv || !hbar || !ckpt) throw std::runtime_error("cannot open output files in " + dir.string());

  const std::size_t first_pending = done.size();
  const std::size_t pending = summary.total_points - first_pending;
  const int threads = resolve_thread_count(options.threads);
  if (options.log) {
    *options.log << kVersion << ": " << summary.total_points << " points, " << summary.resumed << " resumed, "
                 << threads << " thread(s)\n";
    for (const auto& w : cfg.warnings) *options.log << "warning: " << w << "\n";
  }
  const auto start = std::chrono::steady_clock::now();
  std::size_t since_flush = 0;
  const auto flush_all = [&] {
    // Rows reach disk before the checkpoint that references them.
    csv.flush();
    hbar.flush();
    ckpt.flush();
    since_flush = 0;
  };
  run_ordered<PointOutput>(
      pending, threads, [&](std::size_t i) { return compute_point(cfg, first_pending + i); },
      [&](std::size_t i, PointOutput&& out) {
        CheckpointRecord r{first_pending + i, std::move(out.rows), std::move(out.hbar_rows), out.failed};
        for (const auto& row : r.rows) csv << row << "\n";
        for (const auto& row : r.hbar_rows) hbar << row << "\n";
        csv.flush();
        hbar.flush();
        ckpt << point_record(r).dump() << "\n";
        ++summary.computed;
        if (r.failed) ++summary.failed;
        if (++since_flush >= static_cast<std::size_t>(cfg.checkpoint_interval)) flush_all();
        if (options.log) {
          const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
          *options.log << "point " << r.point + 1 << "/" << summary.total_points << (r.failed ? " failed" : " done")
                       << " (" << secs << " s)\n";
        }
        if (options.stop_after && summary.computed >= *options.stop_after) {
          summary.interrupted = summary.resumed + summary.computed < summary.total_points;
          return false;
        }
        return true;
      });
  flush_all();
  return summary;
}

int CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  return -1;
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  for (auto& f : out) {
    const auto b = f.find_first_not_of(" \t");
    const auto e = f.find_last_not_of(" \t");
    f = b == std::string::npos ? std::string() : f.substr(b, e - b + 1);
  }
  return out;
}

struct NumberedCsv {
  CsvTable table;
  std::vector<int> lines;  // 1-based source line of each row
  int header_line = 0;
};

NumberedCsv read_numbered_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  NumberedCsv out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (line.front() == '#') {
      out.table.comments.push_back(line);
      continue;
    }
    if (out.table.header.empty()) {
      out.table.header = split(line);
      out.header_line = number;
      continue;
    }
    out.table.rows.push_back(split(line));
    out.lines.push_back(number);
  }
  return out;
}

}  // namespace

CsvTable read_csv(const fs::path& path) { return read_numbered_csv(path).table; }

CompareSummary compare(const SweepConfig& cfg, const fs::path& data, const std::optional<fs::path>& out_path,
                       const RunOptions& options) {
  CompareSummary summary;
  summary.output = out_path ? *out_path : fs::path(cfg.output_dir) / "comparison.csv";

  const NumberedCsv exp = read_numbered_csv(data);
  std::ostringstream text;
  write_preamble(text, cfg);
  text << "# data " << sanitize(data.string()) << "\n";
  text << join(comparison_columns()) << "\n";
  if (exp.table.rows.empty()) {
    summary.warnings.push_back("experiment file " + data.string() + " has no data rows");
    if (!summary.output.parent_path().empty()) fs::create_directories(summary.output.parent_path());
    write_file_atomically(summary.output, text.str());
    return summary;
  }

  const CsvTable& t = exp.table;
  const int c_nr = t.column("n_r");
  const int c_pdbm = t.column("p_r_dbm");
  const int c_wd = t.column("omega_d_ghz");
  const int c_s21 = t.column("s21_min");
  const int c_kappa = t.column("kappa_mhz");
  const int c_noise = t.column("noise_photons");
  std::vector<std::string> errors;
  const std::string hl = "line " + std::to_string(exp.header_line) + ": ";
  if (c_nr < 0 && c_pdbm < 0) errors.push_back(hl + "header needs n_r or p_r_dbm");
  if (c_s21 < 0 && c_kappa < 0) errors.push_back(hl + "header needs s21_min or kappa_mhz");
  for (std::size_t i = 0; i < t.header.size(); ++i) {
    const std::string& h = t.header[i];
    if (h != "n_r" && h != "p_r_dbm" && h != "omega_d_ghz" && h != "s21_min" && h != "kappa_mhz" &&
        h != "noise_photons")
      errors.push_back(hl + "unknown column '" + h + "'");
  }
  if (!errors.empty()) throw std::invalid_argument("experiment schema mismatch:\n  " + join(errors, "\n  "));

  struct Measured {
    int line;
    double n_r, omega_d, kappa;
    std::optional<double> noise;
  };
  std::vector<Measured> measured;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    const std::string where = "line " + std::to_string(exp.lines[r]) + ": ";
    if (row.size() != t.header.size()) {
      errors.push_back(where + "expected " + std::to_string(t.header.size()) + " fields, found " +
                       std::to_string(row.size()));
      continue;
    }
    const auto cell = [&](int c) -> std::optional<double> {
      if (c < 0 || row[c].empty()) return std::nullopt;
      char* end = nullptr;
      const double v = std::strtod(row[c].c_str(), &end);
      if (end == row[c].c_str() || *end != '\0' || !std::isfinite(v)) {
        errors.push_back(where + "bad number '" + row[c] + "' in column " + t.header[c]);
        return std::nullopt;
      }
      return v;
    };
    const std::size_t before = errors.size();
    const auto nr = cell(c_nr);
    const auto pdbm = cell(c_pdbm);
    const auto wd = cell(c_wd);
    const auto s21 = cell(c_s21);
    const auto kmhz = cell(c_kappa);
    const auto noise = cell(c_noise);
    if (errors.size() != before) continue;
    try {
      Measured m{exp.lines[r], 0.0, wd ? units::ghz_to_angular(*wd) : cfg.omega_d, 0.0, noise};
      if (kmhz) {
        m.kappa = units::mhz_to_angular(*kmhz);
      } else if (s21) {
        m.kappa = kappa_from_s21(cfg.resonator.kappa_ex, *s21);
      } else {
        throw std::invalid_argument("needs s21_min or kappa_mhz");
      }
      if (nr) {
        m.n_r = *nr;
      } else if (pdbm) {
        m.n_r = photons_from_power(units::dbm_to_watt(*pdbm), m.omega_d, cfg.resonator.kappa_ex, m.kappa);
      } else {
        throw std::invalid_argument("needs n_r or p_r_dbm");
      }
      if (!(m.n_r > 0.0)) throw std::invalid_argument("photon number must be positive");
      if (noise && *noise < 0.0) throw std::invalid_argument("noise_photons must be nonnegative");
      measured.push_back(m);
    } catch (const std::invalid_argument& e) {
      errors.push_back(where + e.what());
    }
  }
  if (!errors.empty()) throw std::invalid_argument("experiment schema mismatch:\n  " + join(errors, "\n  "));

  RunOptions run = options;
  run.resume = true;
  run.stop_after.reset();
  const SweepSummary sweep = run_sweep(cfg, run);
  const CsvTable pred = read_csv(sweep.csv);
  const int p_point = pred.column("point");
  const int p_wq = pred.column("omega_q_ghz");
  const int p_status = pred.column("status");
  const int p_loss = pred.column("loss_total_w");
  const int p_scan = pred.column("scan_value");
  struct Grid {
    double omega_q_ghz, loss;
  };
  std::vector<Grid> grid;
  const std::string first_scan = pred.rows.empty() ? "" : pred.rows.front()[p_scan];
  for (const auto& row : pred.rows) {
    if (std::stoul(row[p_point]) >= cfg.axis.size()) continue;  // first n_g only
    if (row[p_scan] != first_scan || row[p_status] != "ok") continue;
    grid.push_back({std::stod(row[p_wq]), std::stod(row[p_loss])});
  }
  if (grid.empty()) throw std::runtime_error("sweep produced no successful prediction points");
  if (cfg.bath_scan)
    summary.warnings.push_back("comparison uses the first bath_scan value " + first_scan);
  if (cfg.n_g_values.size() > 1)
    summary.warnings.push_back("comparison uses n_g = " + format_double(cfg.n_g_values.front()));

  bool any_r_absent = false;
  for (const auto& m : measured) {
    const double wq = omega_q_from_photons(cfg.resonator.g, m.n_r);
    const double wq_ghz = units::angular_to_ghz(wq);
    const Grid* best = &grid.front();
    for (const auto& g : grid)
      if (std::abs(g.omega_q_ghz - wq_ghz) < std::abs(best->omega_q_ghz - wq_ghz)) best = &g;
    std::optional<double> r_power;
    if (m.noise) r_power = noise_power(m.omega_d, m.kappa, *m.noise);
    any_r_absent = any_r_absent || !m.noise;
    const double kp = predicted_kappa(best->loss, m.n_r, m.omega_d, cfg.resonator.kappa_o, r_power);
    std::string flag = "none";
    if (cfg.device == "Q4" && wq_ghz < 50.0) flag = "q4_unstable_s21";
    text << join({std::to_string(m.line), format_double(wq_ghz), format_double(best->omega_q_ghz),
                  format_double(m.n_r), format_double(units::angular_to_ghz(m.omega_d)),
                  format_double(units::angular_to_mhz(m.kappa)), format_double(units::angular_to_mhz(kp)),
                  format_double(units::angular_to_mhz(m.kappa) - units::angular_to_mhz(kp)),
                  format_double(best->loss / (units::hbar * m.omega_d)), m.noise ? "measured" : "absent", flag})
         << "\n";
    ++summary.rows;
  }
  if (any_r_absent) summary.warnings.push_back("rows without noise_photons use R = 0 (r_source=absent)");
  if (!summary.output.parent_path().empty()) fs::create_directories(summary.output.parent_path());
  write_file_atomically(summary.output, text.str());
  return summary;
}

DumpKind dump_kind_from_string(const std::string& name) {
  if (name == "spectra") return DumpKind::Spectra;
  if (name == "overlaps") return DumpKind::Overlaps;
  if (name == "rates") return DumpKind::Rates;
  if (name == "hbar") return DumpKind::Hbar;
  throw std::invalid_argument("unknown dump '" + name + "' (expected spectra, overlaps, rates or hbar)");
}

void write_spectra_csv(const SweepConfig& cfg, std::ostream& out) {
  const RadiativeBath rad{cfg.bath.q_rad};
  const DielectricBath diel{cfg.bath.q_diel, units::ghz_to_angular(cfg.bath.omega_diel_c_ghz), cfg.transmon.e_c};
  const QpgBath qpg{cfg.transmon.e_j, units::microelectronvolt_to_angular(cfg.bath.delta_al_uev),
                    units::ghz_to_angular(cfg.bath.omega_qpg_c_ghz)};
  out << "omega_ghz,j_rad,j_diel,j_qpg_plus,j_qpg_minus,sigma\n";
  const int n = cfg.dump_omega_count;
  for (int i = 0; i < n; ++i) {
    const double f = n == 1 ? cfg.dump_omega_from_ghz
                            : cfg.dump_omega_from_ghz +
                                  (cfg.dump_omega_to_ghz - cfg.dump_omega_from_ghz) * static_cast<double>(i) / (n - 1);
    const double w = units::ghz_to_angular(f);
    const auto [jp, jm] = j_qpg_pair(w, qpg);
    const double sigma = w > 0.0 ? qpg_conductance(w, qpg) : std::numeric_limits<double>::quiet_NaN();
    out << join({format_double(f), format_double(j_rad(w, rad)), format_double(j_diel(w, diel)), format_double(jp),
                 format_double(jm), format_double(sigma)})
        << "\n";
  }
}

namespace {

double dump_omega_q(const SweepConfig& cfg) {
  return cfg.dump_omega_q_ghz ? units::ghz_to_angular(*cfg.dump_omega_q_ghz) : cfg.omega_q_at(0);
}

void write_text(const fs::path& path, const SweepConfig& cfg, const std::string& body) {
  std::ostringstream text;
  write_preamble(text, cfg);
  text << body;
  write_file_atomically(path, text.str());
}

}  // namespace

std::vector<fs::path> dump_diagnostics(const SweepConfig& cfg, DumpKind what, const std::optional<fs::path>& out_dir,
                                       const RunOptions& options) {
  const fs::path dir = out_dir ? *out_dir : fs::path(cfg.output_dir);
  fs::create_directories(dir);
  std::vector<fs::path> written;
  TransmonParams params = cfg.transmon;
  params.n_g = cfg.n_g_values.front();

  switch (what) {
    case DumpKind::Spectra: {
      std::ostringstream body;
      write_spectra_csv(cfg, body);
      written.push_back(dir / "spectra.csv");
      write_text(written.back(), cfg, body.str());
      break;
    }
    case DumpKind::Overlaps: {
      const DriveParams drive{dump_omega_q(cfg), cfg.omega_d};
      const FloquetBasis basis = compute_floquet_basis(propagate_period(params, drive, cfg.numerical), params, drive,
                                                       cfg.numerical);
      const ChaoticClassification chaos = classify_chaotic(basis, static_spectrum(params));
      std::ostringstream body;
      body << "# omega_q_ghz " << format_double(units::angular_to_ghz(drive.omega_q)) << " n_ch " << chaos.n_ch << "\n";
      body << "mode,hbar_ghz,label";
      for (int j = 0; j < basis.dim(); ++j) body << ",overlap_" << j;
      body << "\n";
      for (int i = 0; i < basis.dim(); ++i) {
        body << i << "," << format_double(units::angular_to_ghz(basis.avg_energy[i])) << ","
             << label_name(chaos.labels[i]);
        for (int j = 0; j < basis.dim(); ++j) body << "," << format_double(chaos.overlaps(i, j));
        body << "\n";
      }
      written.push_back(dir / "overlaps.csv");
      write_text(written.back(), cfg, body.str());
      break;
    }
    case DumpKind::Rates: {
      const DriveParams drive{dump_omega_q(cfg), cfg.omega_d};
      PipelineOptions opts;
      opts.n_active = cfg.n_active;
      const FloquetPoint point = solve_floquet_point(params, drive, cfg.numerical, cfg.mechanisms, opts);
      const PointEvaluation ev = evaluate_point(point, cfg.baths(params));
      constexpr double kBinsPerDecade = 4.0;
      std::ostringstream hist;
      hist << "# omega_q_ghz " << format_double(units::angular_to_ghz(drive.omega_q)) << "\n";
      hist << "mechanism,log10_rate_lo,log10_rate_hi,count\n";
      for (const auto& rt : ev.rates) {
        std::map<long, std::size_t> bins;
        for (double r : rt.rates)
          if (r > 0.0) ++bins[static_cast<long>(std::floor(std::log10(r) * kBinsPerDecade))];
        for (const auto& [b, count] : bins)
          hist << to_string(rt.mechanism) << "," << format_double(static_cast<double>(b) / kBinsPerDecade) << ","
               << format_double(static_cast<double>(b + 1) / kBinsPerDecade) << "," << count << "\n";
      }
      written.push_back(dir / "rates_histogram.csv");
      write_text(written.back(), cfg, hist.str());

      std::ostringstream loss;
      loss << "mechanism,loss_w,loss_photons_per_s\n";
      for (const auto& [m, w] : ev.report.loss_by_mechanism)
        loss << to_string(m) << "," << format_double(w) << "," << format_double(w / (units::hbar * cfg.omega_d)) << "\n";
      loss << "total," << format_double(ev.report.loss_total) << "," << format_double(ev.report.loss_photons) << "\n";
      written.push_back(dir / "loss_breakdown.csv");
      write_text(written.back(), cfg, loss.str());

      const SteadyState ss = steady_state(ev.gamma, ev.report.n_ch_used);
      std::ostringstream pop;
      pop << "mode,population,stationary,hbar_ghz,label\n";
      for (int i = 0; i < point.n_active; ++i)
        pop << i << "," << format_double(ss.populations[i]) << "," << format_double(ss.stationary[i]) << ","
            << format_double(units::angular_to_ghz(point.basis.avg_energy[i])) << ","
            << label_name(point.chaos.labels[i]) << "\n";
      written.push_back(dir / "populations.csv");
      write_text(written.back(), cfg, pop.str());
      break;
    }
    case DumpKind::Hbar: {
      std::ostringstream body;
      body << join(hbar_columns()) << "\n";
      run_ordered<std::vector<std::string>>(
          cfg.point_count(), resolve_thread_count(options.threads),
          [&](std::size_t p) {
            const std::size_t a = p % cfg.axis.size();
            TransmonParams t = cfg.transmon;
            t.n_g = cfg.n_g_values[p / cfg.axis.size()];
            const DriveParams drive{cfg.omega_q_at(a), cfg.omega_d};
            const FloquetBasis basis =
                compute_floquet_basis(propagate_period(t, drive, cfg.numerical), t, drive, cfg.numerical);
            const ChaoticClassification chaos = classify_chaotic(basis, static_spectrum(t));
            return hbar_rows_for(cfg, p, t.n_g, drive.omega_q, cfg.n_r_at(a), basis, chaos, basis.dim());
          },
          [&](std::size_t p, std::vector<std::string>&& rows) {
            for (const auto& r : rows) body << r << "\n";
            if (options.log) *options.log << "point " << p + 1 << "/" << cfg.point_count() << " done\n";
            return true;
          });
      written.push_back(dir / "hbar_curves.csv");
      write_text(written.back(), cfg, body.str());
      break;
    }
  }
  return written;
}

}  // namespace floquet_loss
