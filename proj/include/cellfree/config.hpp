// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace cellfree {

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct PathlossParams {
  double l_db = 140.72;    // fixed loss at the reference heights / carrier
  double d0_m = 10.0;      // inner breakpoint
  double d1_m = 50.0;      // outer breakpoint
  double carrier_hz = 1.9e9;
  double h_ap_m = 15.0;
  double h_user_m = 1.65;
};

enum class PowerNormalization {
  kPerSubcarrier,  // p_d, p_u used directly as per-subcarrier powers
  kTotalSplit,     // device totals divided evenly over the N subcarriers
};

enum class GroupPreset {
  kMbb,     // one group of all K users owning every RB
  kMtc,     // N_RB groups of K/N_RB users, one RB each
  kCustom,  // explicit group_sizes + rb_assignment
};

// Scenario description. Field names in the config file follow the usual
// cell-free MIMO-OFDM notation (M, K, N, N_RB, lambda_RB, tau_p, ...);
// see configs/mbb_m128_k6.cfg for the canonical example.
struct SimConfig {
  double area_side_m = 1000.0;

  std::size_t num_antennas = 128;   // M, total service antennas
  std::size_t antennas_per_ap = 1;  // N_t
  std::size_t num_users = 6;        // K

  GroupPreset preset = GroupPreset::kMbb;
  std::vector<std::size_t> group_sizes;                       // custom preset
  std::vector<std::vector<std::size_t>> rb_assignment;        // custom preset, 0-based RB ids per group

  std::size_t num_subcarriers = 1200;  // N
  std::size_t num_rb = 100;            // N_RB
  std::size_t rb_width = 12;           // lambda_RB, subcarriers per RB
  double subcarrier_spacing_hz = 15000.0;
  std::size_t symbols_per_frame = 10;  // N_T
  std::size_t tau_p = 0;               // 0 = auto: ceil(max group / lambda_RB)
  std::size_t tau_u = 0;

  double p_d_watt = 0.2;
  double p_u_watt = 0.1;
  double noise_density_dbm_hz = -174.0;
  double noise_figure_db = 9.0;

  double shadowing_sigma_db = 8.0;
  bool shadowing_below_d1 = true;
  PathlossParams pathloss;

  std::vector<double> pdp_delays_us;  // empty = ETU preset
  std::vector<double> pdp_powers_db;

  PowerNormalization power_normalization = PowerNormalization::kTotalSplit;

  std::size_t drops = 500;
  std::uint64_t seed = 1;
  std::size_t waveform_realizations = 200;  // per drop, waveform engine only

  // --- derived quantities ---
  std::size_t num_aps() const { return num_antennas / antennas_per_ap; }
  double bandwidth_hz() const { return static_cast<double>(num_subcarriers) * subcarrier_spacing_hz; }
  double sample_interval_s() const { return 1.0 / bandwidth_hz(); }

  // Per-subcarrier noise power sigma_z^2 [W].
  double noise_power_w() const;

  // Per-subcarrier transmit powers under the selected normalization.
  double pd_subcarrier_w() const;
  double pu_subcarrier_w() const;

  // Resolved pilot-phase length (tau_p, or the minimum feasible value when
  // tau_p is configured as auto).
  std::size_t effective_tau_p() const;
  double frame_overhead_factor() const;  // 1 - (tau_p + tau_u) / N_T

  std::size_t largest_group() const;
};

// Parse a flat key=value config file, apply defaults for omitted keys, and
// validate every invariant. Throws ConfigError naming the offending field.
SimConfig load_config(const std::string& path);
SimConfig parse_config_text(const std::string& text);

// Validate an already-populated config. Throws ConfigError on violation.
void validate_config(const SimConfig& cfg);

std::string to_string(PowerNormalization n);
std::string to_string(GroupPreset p);

}  // namespace cellfree
