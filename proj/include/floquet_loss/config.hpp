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

// Sweep configuration: JSON with sections transmon, drive, resonator, numerical, bath,
// sweep, mechanisms and output. Frequencies are GHz meaning (value)/2pi, energies h*GHz,
// the superconducting gap in ueV. A `device` key preloads one of the Q1-Q4 profiles.

#include "floquet_loss/dissipation.hpp"
#include "floquet_loss/resonator.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace floquet_loss {

inline constexpr const char* kVersion = "floquet-loss 0.1.0";

struct DeviceProfile {
  std::string name;
  double e_c_ghz = 0.0;
  double e_j_ghz = 0.0;
  double g_ghz = 0.0;
  double omega_r_ghz = 0.0;
  double kappa_ex_ghz = 0.0;
  double kappa_o_ghz = 0.0;
  double omega_qpg_c_ghz = 0.0;
};

const std::vector<DeviceProfile>& device_profiles();
const DeviceProfile& device_profile(const std::string& name);

struct BathConfig {
  double q_rad = 3830.0;
  double q_diel = 4.8e5;
  double omega_diel_c_ghz = 1000.0;
  double omega_qpg_c_ghz = 17.0;
  double delta_al_uev = 180.0;
};

/// Bath parameters accepted by a scan, by config key.
inline constexpr const char* kScanParameters[] = {"q_rad", "q_diel", "omega_diel_c_ghz", "omega_qpg_c_ghz",
                                                 "delta_al_uev"};

struct BathScan {
  std::string parameter;
  std::vector<double> values;
};

enum class AxisKind { OmegaQ, PhotonNumber };

inline constexpr int kRadiativeDimCap = 201;

struct SweepConfig {
  std::string device;
  TransmonParams transmon;
  double omega_d = 0.0;  // rad/s
  ResonatorParams resonator;
  NumericalConfig numerical;
  int n_active = 0;
  BathConfig bath;
  std::optional<BathScan> bath_scan;
  AxisKind axis_kind = AxisKind::OmegaQ;
  std::vector<double> axis;  // GHz for OmegaQ, photons for PhotonNumber
  std::vector<Mechanism> mechanisms;
  bool parity_average = false;
  std::vector<double> n_g_values;
  std::string output_dir = "out";
  int checkpoint_interval = 1;
  int hbar_modes = 10;
  double dump_omega_from_ghz = 1.0;
  double dump_omega_to_ghz = 1000.0;
  int dump_omega_count = 1000;
  std::optional<double> dump_omega_q_ghz;

  nlohmann::json resolved;  // every field with defaults filled in
  std::string hash;         // FNV-1a of the fields that affect results
  std::vector<std::string> warnings;

  std::size_t point_count() const { return n_g_values.size() * axis.size(); }
  double omega_q_at(std::size_t axis_index) const;  // rad/s
  double n_r_at(std::size_t axis_index) const;
  /// Baths for `mechanisms`, with the scanned parameter (if any) set to `scan_value`.
  BathSet baths(const TransmonParams& params, std::optional<double> scan_value = std::nullopt) const;
  std::vector<std::optional<double>> scan_values() const;
};

/// Validates and resolves. Errors name the offending key.
SweepConfig parse_config(const nlohmann::json& j);
SweepConfig load_config(const std::string& path);

std::string fnv1a_hex(const std::string& text);

}  // namespace floquet_loss
