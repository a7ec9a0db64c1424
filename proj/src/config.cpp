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

#include "floquet_loss/config.hpp"

#include "floquet_loss/units.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <stdexcept>

namespace floquet_loss {

using nlohmann::json;

const std::vector<DeviceProfile>& device_profiles() {
  static const std::vector<DeviceProfile> profiles = {
      {"Q1", 0.259, 14.24, 0.231, 4.284, 0.015586, 0.01682, 17.0},
      {"Q2", 0.257, 13.01, 0.212, 4.297, 0.01673, 0.01679, 17.0},
      {"Q3", 0.254, 13.02, 0.188, 3.745, 0.02738, 0.02759, 19.0},
      {"Q4", 0.310, 12.06, 0.041, 7.5474, 0.00643, 0.00643, 20.0},
  };
  return profiles;
}

const DeviceProfile& device_profile(const std::string& name) {
  for (const auto& p : device_profiles())
    if (p.name == name) return p;
  throw std::invalid_argument("unknown device '" + name + "' (expected Q1, Q2, Q3 or Q4)");
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

namespace {

[[noreturn]] void fail(const std::string& key, const std::string& what) {
  throw std::invalid_argument("config: " + key + ": " + what);
}

void reject_unknown(const json& obj, const std::string& section, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) fail(section, "expected an object");
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) fail(section.empty() ? key : section + "." + key, "unknown key");
  }
}

double number(const json& obj, const std::string& section, const char* key, std::optional<double> fallback) {
  const std::string name = section + "." + key;
  if (!obj.contains(key)) {
    if (!fallback) fail(name, "required");
    return *fallback;
  }
  const json& v = obj.at(key);
  if (!v.is_number()) fail(name, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(name, "must be finite");
  return x;
}

int integer(const json& obj, const std::string& section, const char* key, int fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) fail(section + "." + key, "expected an integer");
  return v.get<int>();
}

std::vector<double> number_list(const json& v, const std::string& name) {
  std::vector<double> out;
  if (v.is_array()) {
    for (const auto& x : v) {
      if (!x.is_number()) fail(name, "expected numbers");
      out.push_back(x.get<double>());
    }
  } else if (v.is_object()) {
    reject_unknown(v, name, {"from", "to", "count"});
    const double from = number(v, name, "from", std::nullopt);
    const double to = number(v, name, "to", std::nullopt);
    const int count = integer(v, name, "count", 0);
    if (count < 1) fail(name + ".count", "must be >= 1");
    for (int i = 0; i < count; ++i)
      out.push_back(count == 1 ? from : from + (to - from) * static_cast<double>(i) / (count - 1));
  } else {
    fail(name, "expected a list or {from, to, count}");
  }
  return out;
}

void require_increasing(const std::vector<double>& v, const std::string& name) {
  if (v.empty()) fail(name, "must be nonempty");
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] > v[i - 1])) fail(name, "must be strictly increasing");
}

}  // namespace

double SweepConfig::omega_q_at(std::size_t axis_index) const {
  const double x = axis.at(axis_index);
  return axis_kind == AxisKind::OmegaQ ? units::ghz_to_angular(x) : omega_q_from_photons(resonator.g, x);
}

double SweepConfig::n_r_at(std::size_t axis_index) const {
  const double x = axis.at(axis_index);
  return axis_kind == AxisKind::PhotonNumber ? x : photons_from_omega_q(resonator.g, units::ghz_to_angular(x));
}

std::vector<std::optional<double>> SweepConfig::scan_values() const {
  if (!bath_scan) return {std::nullopt};
  return {bath_scan->values.begin(), bath_scan->values.end()};
}

BathSet SweepConfig::baths(const TransmonParams& params, std::optional<double> scan_value) const {
  BathConfig b = bath;
  if (scan_value && bath_scan) {
    const std::string& p = bath_scan->parameter;
    if (p == "q_rad") b.q_rad = *scan_value;
    if (p == "q_diel") b.q_diel = *scan_value;
    if (p == "omega_diel_c_ghz") b.omega_diel_c_ghz = *scan_value;
    if (p == "omega_qpg_c_ghz") b.omega_qpg_c_ghz = *scan_value;
    if (p == "delta_al_uev") b.delta_al_uev = *scan_value;
  }
  BathSet set;
  for (Mechanism m : mechanisms) {
    switch (m) {
      case Mechanism::Rad:
        set.rad = RadiativeBath{b.q_rad};
        break;
      case Mechanism::Diel:
        set.diel = DielectricBath{b.q_diel, units::ghz_to_angular(b.omega_diel_c_ghz), params.e_c};
        break;
      case Mechanism::Qpg:
        set.qpg = QpgBath{params.e_j, units::microelectronvolt_to_angular(b.delta_al_uev),
                          units::ghz_to_angular(b.omega_qpg_c_ghz)};
        break;
    }
  }
  return set;
}

SweepConfig parse_config(const json& root) {
  reject_unknown(root, "", {"device", "transmon", "drive", "resonator", "numerical", "bath", "bath_scan", "sweep",
                            "mechanisms", "parity_average", "n_g_values", "output", "dump"});
  SweepConfig cfg;
  std::optional<DeviceProfile> profile;
  if (root.contains("device")) {
    if (!root.at("device").is_string()) fail("device", "expected a string");
    cfg.device = root.at("device").get<std::string>();
    profile = device_profile(cfg.device);
  }
  const auto opt = [&](double DeviceProfile::*field) -> std::optional<double> {
    if (!profile) return std::nullopt;
    return (*profile).*field;
  };

  const json empty = json::object();
  const json& tr = root.contains("transmon") ? root.at("transmon") : empty;
  reject_unknown(tr, "transmon", {"e_c_ghz", "e_j_ghz", "n_g"});
  const double e_c_ghz = number(tr, "transmon", "e_c_ghz", opt(&DeviceProfile::e_c_ghz));
  const double e_j_ghz = number(tr, "transmon", "e_j_ghz", opt(&DeviceProfile::e_j_ghz));
  const double n_g = number(tr, "transmon", "n_g", 0.25);

  const json& rs = root.contains("resonator") ? root.at("resonator") : empty;
  reject_unknown(rs, "resonator", {"omega_r_ghz", "g_ghz", "kappa_ex_ghz", "kappa_o_ghz"});
  const double omega_r_ghz = number(rs, "resonator", "omega_r_ghz", opt(&DeviceProfile::omega_r_ghz));
  const double g_ghz = number(rs, "resonator", "g_ghz", opt(&DeviceProfile::g_ghz));
  const double kappa_ex_ghz = number(rs, "resonator", "kappa_ex_ghz", opt(&DeviceProfile::kappa_ex_ghz));
  const double kappa_o_ghz = number(rs, "resonator", "kappa_o_ghz", opt(&DeviceProfile::kappa_o_ghz));

  const json& dr = root.contains("drive") ? root.at("drive") : empty;
  reject_unknown(dr, "drive", {"omega_d_ghz"});
  const double omega_d_ghz = number(dr, "drive", "omega_d_ghz", omega_r_ghz);

  const json& nu = root.contains("numerical") ? root.at("numerical") : empty;
  reject_unknown(nu, "numerical", {"dim", "k_max", "n_t", "n_big_t", "n_active"});
  NumericalConfig num;
  num.dim = integer(nu, "numerical", "dim", num.dim);
  num.k_max = integer(nu, "numerical", "k_max", num.k_max);
  num.n_t = integer(nu, "numerical", "n_t", num.n_t);
  num.n_big_t = integer(nu, "numerical", "n_big_t", num.n_big_t);
  if (num.dim < 3 || num.dim % 2 == 0) fail("numerical.dim", "must be odd and >= 3");
  cfg.n_active = integer(nu, "numerical", "n_active", 0);
  if (cfg.n_active < 0) fail("numerical.n_active", "must be >= 0 (0 selects the default)");

  const json& ba = root.contains("bath") ? root.at("bath") : empty;
  reject_unknown(ba, "bath", {"q_rad", "q_diel", "omega_diel_c_ghz", "omega_qpg_c_ghz", "delta_al_uev"});
  BathConfig bath;
  bath.q_rad = number(ba, "bath", "q_rad", bath.q_rad);
  bath.q_diel = number(ba, "bath", "q_diel", bath.q_diel);
  bath.omega_diel_c_ghz = number(ba, "bath", "omega_diel_c_ghz", bath.omega_diel_c_ghz);
  bath.omega_qpg_c_ghz =
      number(ba, "bath", "omega_qpg_c_ghz", profile ? profile->omega_qpg_c_ghz : bath.omega_qpg_c_ghz);
  bath.delta_al_uev = number(ba, "bath", "delta_al_uev", bath.delta_al_uev);
  cfg.bath = bath;

  if (root.contains("bath_scan")) {
    const json& sc = root.at("bath_scan");
    reject_unknown(sc, "bath_scan", {"parameter", "values"});
    if (!sc.contains("parameter") || !sc.at("parameter").is_string()) fail("bath_scan.parameter", "required string");
    BathScan scan;
    scan.parameter = sc.at("parameter").get<std::string>();
    bool known = false;
    for (const char* p : kScanParameters) known = known || scan.parameter == p;
    if (!known) fail("bath_scan.parameter", "unknown bath parameter '" + scan.parameter + "'");
    if (!sc.contains("values")) fail("bath_scan.values", "required");
    scan.values = number_list(sc.at("values"), "bath_scan.values");
    require_increasing(scan.values, "bath_scan.values");
    cfg.bath_scan = scan;
  }

  if (!root.contains("sweep")) fail("sweep", "required");
  const json& sw = root.at("sweep");
  reject_unknown(sw, "sweep", {"omega_q_ghz", "n_r"});
  if (sw.contains("omega_q_ghz") == sw.contains("n_r")) fail("sweep", "give exactly one of omega_q_ghz or n_r");
  if (sw.contains("omega_q_ghz")) {
    cfg.axis_kind = AxisKind::OmegaQ;
    cfg.axis = number_list(sw.at("omega_q_ghz"), "sweep.omega_q_ghz");
    require_increasing(cfg.axis, "sweep.omega_q_ghz");
    if (cfg.axis.front() < 0.0) fail("sweep.omega_q_ghz", "must be >= 0");
  } else {
    cfg.axis_kind = AxisKind::PhotonNumber;
    cfg.axis = number_list(sw.at("n_r"), "sweep.n_r");
    require_increasing(cfg.axis, "sweep.n_r");
    if (cfg.axis.front() < 0.0) fail("sweep.n_r", "must be >= 0");
  }

  std::vector<std::string> mech_names{"rad", "diel", "qpg"};
  if (root.contains("mechanisms")) {
    const json& m = root.at("mechanisms");
    if (!m.is_array() || m.empty()) fail("mechanisms", "expected a nonempty list");
    std::set<Mechanism> seen;
    for (const auto& x : m) {
      if (!x.is_string()) fail("mechanisms", "expected strings");
      try {
        seen.insert(mechanism_from_string(x.get<std::string>()));
      } catch (const std::invalid_argument& e) {
        fail("mechanisms", e.what());
      }
    }
    cfg.mechanisms.assign(seen.begin(), seen.end());
  } else {
    cfg.mechanisms = {Mechanism::Rad, Mechanism::Diel, Mechanism::Qpg};
  }

  if (root.contains("parity_average")) {
    if (!root.at("parity_average").is_boolean()) fail("parity_average", "expected true or false");
    cfg.parity_average = root.at("parity_average").get<bool>();
  }
  if (root.contains("n_g_values")) {
    cfg.n_g_values = number_list(root.at("n_g_values"), "n_g_values");
    if (cfg.n_g_values.empty()) fail("n_g_values", "must be nonempty");
  } else {
    cfg.n_g_values = {n_g};
  }

  const json& out = root.contains("output") ? root.at("output") : empty;
  reject_unknown(out, "output", {"directory", "checkpoint_interval", "hbar_modes"});
  if (out.contains("directory")) {
    if (!out.at("directory").is_string()) fail("output.directory", "expected a string");
    cfg.output_dir = out.at("directory").get<std::string>();
  }
  cfg.checkpoint_interval = integer(out, "output", "checkpoint_interval", 1);
  if (cfg.checkpoint_interval < 1) fail("output.checkpoint_interval", "must be >= 1");
  cfg.hbar_modes = integer(out, "output", "hbar_modes", 10);
  if (cfg.hbar_modes < 0) fail("output.hbar_modes", "must be >= 0");

  const json& du = root.contains("dump") ? root.at("dump") : empty;
  reject_unknown(du, "dump", {"omega_ghz", "omega_q_ghz"});
  if (du.contains("omega_ghz")) {
    const json& g = du.at("omega_ghz");
    reject_unknown(g, "dump.omega_ghz", {"from", "to", "count"});
    cfg.dump_omega_from_ghz = number(g, "dump.omega_ghz", "from", std::nullopt);
    cfg.dump_omega_to_ghz = number(g, "dump.omega_ghz", "to", std::nullopt);
    cfg.dump_omega_count = integer(g, "dump.omega_ghz", "count", 1000);
    if (cfg.dump_omega_count < 1) fail("dump.omega_ghz.count", "must be >= 1");
  }
  if (du.contains("omega_q_ghz")) cfg.dump_omega_q_ghz = number(du, "dump", "omega_q_ghz", std::nullopt);

  const bool has_rad = std::find(cfg.mechanisms.begin(), cfg.mechanisms.end(), Mechanism::Rad) != cfg.mechanisms.end();
  if (has_rad && num.dim > kRadiativeDimCap) {
    cfg.warnings.push_back("numerical.dim " + std::to_string(num.dim) + " capped at " +
                           std::to_string(kRadiativeDimCap) + " because the radiative mechanism is included");
    num.dim = kRadiativeDimCap;
  }

  cfg.transmon = TransmonParams{units::ghz_to_angular(e_c_ghz), units::ghz_to_angular(e_j_ghz), n_g, num.dim};
  cfg.omega_d = units::ghz_to_angular(omega_d_ghz);
  cfg.resonator = ResonatorParams{units::ghz_to_angular(omega_r_ghz), units::ghz_to_angular(g_ghz),
                                  units::ghz_to_angular(kappa_ex_ghz), units::ghz_to_angular(kappa_o_ghz)};
  cfg.numerical = num;

  const auto guard = [](const char* key, auto&& check) {
    try {
      check();
    } catch (const std::invalid_argument& e) {
      fail(key, e.what());
    }
  };
  guard("transmon", [&] { cfg.transmon.validate(); });
  guard("numerical", [&] { cfg.numerical.validate(); });
  guard("resonator", [&] { cfg.resonator.validate(); });
  guard("drive", [&] { DriveParams{0.0, cfg.omega_d}.validate(); });
  for (double ng : cfg.n_g_values) {
    TransmonParams t = cfg.transmon;
    t.n_g = ng;
    guard("n_g_values", [&] { t.validate(); });
  }
  for (auto v : cfg.scan_values()) guard("bath", [&] { cfg.baths(cfg.transmon, v).validate(); });
  if (cfg.n_active > cfg.numerical.dim) fail("numerical.n_active", "exceeds dim");

  json r;
  r["device"] = cfg.device;
  r["transmon"] = {{"e_c_ghz", e_c_ghz}, {"e_j_ghz", e_j_ghz}, {"n_g", n_g}};
  r["drive"] = {{"omega_d_ghz", omega_d_ghz}};
  r["resonator"] = {{"omega_r_ghz", omega_r_ghz}, {"g_ghz", g_ghz}, {"kappa_ex_ghz", kappa_ex_ghz},
                    {"kappa_o_ghz", kappa_o_ghz}};
  r["numerical"] = {{"dim", num.dim},     {"k_max", num.k_max},      {"n_t", num.n_t},
                    {"n_big_t", num.n_big_t}, {"n_active", cfg.n_active}};
  r["bath"] = {{"q_rad", bath.q_rad},
               {"q_diel", bath.q_diel},
               {"omega_diel_c_ghz", bath.omega_diel_c_ghz},
               {"omega_qpg_c_ghz", bath.omega_qpg_c_ghz},
               {"delta_al_uev", bath.delta_al_uev}};
  if (cfg.bath_scan) r["bath_scan"] = {{"parameter", cfg.bath_scan->parameter}, {"values", cfg.bath_scan->values}};
  r["sweep"] = {{cfg.axis_kind == AxisKind::OmegaQ ? "omega_q_ghz" : "n_r", cfg.axis}};
  json mech = json::array();
  for (Mechanism m : cfg.mechanisms) mech.push_back(std::string(to_string(m)));
  r["mechanisms"] = mech;
  r["parity_average"] = cfg.parity_average;
  r["n_g_values"] = cfg.n_g_values;
  r["output"] = {{"hbar_modes", cfg.hbar_modes}};
  cfg.hash = fnv1a_hex(r.dump());
  r["output"]["directory"] = cfg.output_dir;
  r["output"]["checkpoint_interval"] = cfg.checkpoint_interval;
  cfg.resolved = r;
  return cfg;
}

SweepConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("config " + path + " is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

}  // namespace floquet_loss
