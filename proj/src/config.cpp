// SPDX-License-Identifier: Apache-2.0
#include "cellfree/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace cellfree {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError(key + ": cannot parse '" + v + "' as a number");
  }
}

std::size_t parse_size(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    long long n = std::stoll(v, &pos);
    if (pos != v.size() || n < 0) throw std::invalid_argument(v);
    return static_cast<std::size_t>(n);
  } catch (const std::exception&) {
    throw ConfigError(key + ": cannot parse '" + v + "' as a non-negative integer");
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    unsigned long long n = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return n;
  } catch (const std::exception&) {
    throw ConfigError(key + ": cannot parse '" + v + "' as an unsigned integer");
  }
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "on" || v == "1") return true;
  if (v == "false" || v == "off" || v == "0") return false;
  throw ConfigError(key + ": expected true/false, got '" + v + "'");
}

std::vector<double> parse_double_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const auto& tok : split(v, ',')) out.push_back(parse_double(key, tok));
  return out;
}

std::vector<std::size_t> parse_size_list(const std::string& key, const std::string& v) {
  std::vector<std::size_t> out;
  for (const auto& tok : split(v, ',')) out.push_back(parse_size(key, tok));
  return out;
}

// "1-50, 60" -> RB ids {0..49, 59} (file uses 1-based ids).
std::vector<std::size_t> parse_rb_set(const std::string& key, const std::string& v) {
  std::vector<std::size_t> out;
  for (const auto& tok : split(v, ',')) {
    if (tok.empty()) continue;
    auto dash = tok.find('-');
    if (dash == std::string::npos) {
      std::size_t r = parse_size(key, tok);
      if (r == 0) throw ConfigError(key + ": RB ids are 1-based, got 0");
      out.push_back(r - 1);
    } else {
      std::size_t a = parse_size(key, trim(tok.substr(0, dash)));
      std::size_t b = parse_size(key, trim(tok.substr(dash + 1)));
      if (a == 0 || b < a) throw ConfigError(key + ": bad RB range '" + tok + "'");
      for (std::size_t r = a; r <= b; ++r) out.push_back(r - 1);
    }
  }
  return out;
}

}  // namespace

double SimConfig::noise_power_w() const {
  return std::pow(10.0, (noise_density_dbm_hz + noise_figure_db - 30.0) / 10.0) *
         subcarrier_spacing_hz;
}

double SimConfig::pd_subcarrier_w() const {
  return power_normalization == PowerNormalization::kPerSubcarrier
             ? p_d_watt
             : p_d_watt / static_cast<double>(num_subcarriers);
}

double SimConfig::pu_subcarrier_w() const {
  return power_normalization == PowerNormalization::kPerSubcarrier
             ? p_u_watt
             : p_u_watt / static_cast<double>(num_subcarriers);
}

std::size_t SimConfig::largest_group() const {
  switch (preset) {
    case GroupPreset::kMbb:
      return num_users;
    case GroupPreset::kMtc:
      return num_rb == 0 ? num_users : (num_users + num_rb - 1) / num_rb;
    case GroupPreset::kCustom: {
      std::size_t m = 0;
      for (auto g : group_sizes) m = std::max(m, g);
      return m;
    }
  }
  return num_users;
}

std::size_t SimConfig::effective_tau_p() const {
  if (tau_p > 0) return tau_p;
  std::size_t g = largest_group();
  return rb_width == 0 ? 1 : std::max<std::size_t>(1, (g + rb_width - 1) / rb_width);
}

double SimConfig::frame_overhead_factor() const {
  return 1.0 - static_cast<double>(effective_tau_p() + tau_u) /
                   static_cast<double>(symbols_per_frame);
}

std::string to_string(PowerNormalization n) {
  return n == PowerNormalization::kPerSubcarrier ? "per_subcarrier" : "total_split";
}

std::string to_string(GroupPreset p) {
  switch (p) {
    case GroupPreset::kMbb: return "mbb";
    case GroupPreset::kMtc: return "mtc";
    case GroupPreset::kCustom: return "custom";
  }
  return "?";
}

SimConfig parse_config_text(const std::string& text) {
  SimConfig cfg;
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  std::vector<std::string> rb_lists;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    if (!kv.emplace(key, val).second)
      throw ConfigError("duplicate key '" + key + "'");
  }

  for (const auto& [key, val] : kv) {
    if (key == "area_side") cfg.area_side_m = parse_double(key, val);
    else if (key == "M") cfg.num_antennas = parse_size(key, val);
    else if (key == "N_t") cfg.antennas_per_ap = parse_size(key, val);
    else if (key == "K") cfg.num_users = parse_size(key, val);
    else if (key == "preset") {
      if (val == "mbb") cfg.preset = GroupPreset::kMbb;
      else if (val == "mtc") cfg.preset = GroupPreset::kMtc;
      else if (val == "custom") cfg.preset = GroupPreset::kCustom;
      else throw ConfigError("preset: expected mbb|mtc|custom, got '" + val + "'");
    }
    else if (key == "group_sizes") cfg.group_sizes = parse_size_list(key, val);
    else if (key == "rb_assignment") {
      for (const auto& part : split(val, ';'))
        cfg.rb_assignment.push_back(parse_rb_set(key, part));
    }
    else if (key == "N") cfg.num_subcarriers = parse_size(key, val);
    else if (key == "N_RB") cfg.num_rb = parse_size(key, val);
    else if (key == "lambda_RB") cfg.rb_width = parse_size(key, val);
    else if (key == "delta_f") cfg.subcarrier_spacing_hz = parse_double(key, val);
    else if (key == "N_T") cfg.symbols_per_frame = parse_size(key, val);
    else if (key == "tau_p") cfg.tau_p = parse_size(key, val);
    else if (key == "tau_u") cfg.tau_u = parse_size(key, val);
    else if (key == "p_d") cfg.p_d_watt = parse_double(key, val);
    else if (key == "p_u") cfg.p_u_watt = parse_double(key, val);
    else if (key == "noise_density_dBm_per_Hz") cfg.noise_density_dbm_hz = parse_double(key, val);
    else if (key == "noise_figure_dB") cfg.noise_figure_db = parse_double(key, val);
    else if (key == "shadowing_sigma_dB") cfg.shadowing_sigma_db = parse_double(key, val);
    else if (key == "shadowing_below_d1") cfg.shadowing_below_d1 = parse_bool(key, val);
    else if (key == "pathloss_L_dB") cfg.pathloss.l_db = parse_double(key, val);
    else if (key == "pathloss_d0") cfg.pathloss.d0_m = parse_double(key, val);
    else if (key == "pathloss_d1") cfg.pathloss.d1_m = parse_double(key, val);
    else if (key == "f_c") cfg.pathloss.carrier_hz = parse_double(key, val);
    else if (key == "h_AP") cfg.pathloss.h_ap_m = parse_double(key, val);
    else if (key == "h_u") cfg.pathloss.h_user_m = parse_double(key, val);
    else if (key == "pdp") {
      if (val != "etu") throw ConfigError("pdp: only the 'etu' preset is known; "
                                          "use pdp_delays_us/pdp_powers_dB for custom profiles");
      cfg.pdp_delays_us.clear();
      cfg.pdp_powers_db.clear();
    }
    else if (key == "pdp_delays_us") cfg.pdp_delays_us = parse_double_list(key, val);
    else if (key == "pdp_powers_dB") cfg.pdp_powers_db = parse_double_list(key, val);
    else if (key == "power_normalization") {
      if (val == "per_subcarrier") cfg.power_normalization = PowerNormalization::kPerSubcarrier;
      else if (val == "total_split") cfg.power_normalization = PowerNormalization::kTotalSplit;
      else throw ConfigError("power_normalization: expected per_subcarrier|total_split");
    }
    else if (key == "drops") cfg.drops = parse_size(key, val);
    else if (key == "seed") cfg.seed = parse_u64(key, val);
    else if (key == "waveform_realizations") cfg.waveform_realizations = parse_size(key, val);
    else throw ConfigError("unknown key '" + key + "'");
  }

  validate_config(cfg);
  return cfg;
}

SimConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str());
}

void validate_config(const SimConfig& cfg) {
  auto fail = [](const std::string& msg) { throw ConfigError(msg); };

  if (cfg.area_side_m <= 0) fail("area_side: must be > 0");
  if (cfg.num_antennas == 0) fail("M: must be >= 1");
  if (cfg.antennas_per_ap == 0) fail("N_t: must be >= 1");
  if (cfg.num_users == 0) fail("K: must be >= 1");
  if (cfg.num_subcarriers == 0 || cfg.num_rb == 0 || cfg.rb_width == 0)
    fail("N, N_RB, lambda_RB: must be >= 1");
  if (cfg.num_subcarriers != cfg.num_rb * cfg.rb_width)
    fail("N != N_RB*lambda_RB (N=" + std::to_string(cfg.num_subcarriers) +
         ", N_RB*lambda_RB=" + std::to_string(cfg.num_rb * cfg.rb_width) + ")");
  if (cfg.num_antennas % cfg.antennas_per_ap != 0)
    fail("M must be an integer multiple of N_t (M=" + std::to_string(cfg.num_antennas) +
         ", N_t=" + std::to_string(cfg.antennas_per_ap) + ")");
  if (cfg.subcarrier_spacing_hz <= 0) fail("delta_f: must be > 0");
  if (cfg.symbols_per_frame == 0) fail("N_T: must be >= 1");
  if (cfg.p_d_watt <= 0) fail("p_d: must be > 0");
  if (cfg.p_u_watt <= 0) fail("p_u: must be > 0");
  if (cfg.shadowing_sigma_db < 0) fail("shadowing_sigma_dB: must be >= 0");
  if (cfg.drops == 0) fail("drops: must be >= 1");

  if (cfg.effective_tau_p() + cfg.tau_u >= cfg.symbols_per_frame)
    fail("tau_p + tau_u < N_T violated (tau_p=" + std::to_string(cfg.effective_tau_p()) +
         ", tau_u=" + std::to_string(cfg.tau_u) +
         ", N_T=" + std::to_string(cfg.symbols_per_frame) + ")");

  // Grouping invariants.
  switch (cfg.preset) {
    case GroupPreset::kMbb:
      break;
    case GroupPreset::kMtc:
      if (cfg.num_users % cfg.num_rb != 0)
        fail("mtc preset requires K divisible by N_RB (K=" + std::to_string(cfg.num_users) +
             ", N_RB=" + std::to_string(cfg.num_rb) + ")");
      break;
    case GroupPreset::kCustom: {
      if (cfg.group_sizes.empty()) fail("group_sizes: required for preset=custom");
      if (cfg.rb_assignment.size() != cfg.group_sizes.size())
        fail("rb_assignment: need one RB set per group (" +
             std::to_string(cfg.group_sizes.size()) + " groups, " +
             std::to_string(cfg.rb_assignment.size()) + " sets)");
      std::size_t total = 0;
      for (auto g : cfg.group_sizes) {
        if (g == 0) fail("group_sizes: groups must be non-empty");
        total += g;
      }
      if (total != cfg.num_users)
        fail("group_sizes: sum " + std::to_string(total) + " != K=" +
             std::to_string(cfg.num_users));
      std::set<std::size_t> seen;
      for (std::size_t s = 0; s < cfg.rb_assignment.size(); ++s) {
        for (auto r : cfg.rb_assignment[s]) {
          if (r >= cfg.num_rb)
            fail("rb_assignment: RB id " + std::to_string(r + 1) + " out of range 1.." +
                 std::to_string(cfg.num_rb));
          if (!seen.insert(r).second)
            fail("rb_assignment: RB " + std::to_string(r + 1) +
                 " assigned to more than one group");
        }
      }
      break;
    }
  }

  // Pilot capacity per RB-carrying group.
  std::size_t capacity = cfg.effective_tau_p() * cfg.rb_width;
  std::size_t largest = 0;
  if (cfg.preset == GroupPreset::kCustom) {
    for (std::size_t s = 0; s < cfg.group_sizes.size(); ++s)
      if (!cfg.rb_assignment[s].empty()) largest = std::max(largest, cfg.group_sizes[s]);
  } else {
    largest = cfg.largest_group();
  }
  if (largest > capacity)
    fail("pilot capacity exceeded: group of " + std::to_string(largest) +
         " users > tau_p*lambda_RB = " + std::to_string(capacity));

  // Custom PDP sanity.
  if (cfg.pdp_delays_us.size() != cfg.pdp_powers_db.size())
    fail("pdp_delays_us and pdp_powers_dB must have equal length");
  for (std::size_t i = 0; i < cfg.pdp_delays_us.size(); ++i) {
    if (cfg.pdp_delays_us[i] < 0) fail("pdp_delays_us: delays must be >= 0");
    if (i > 0 && cfg.pdp_delays_us[i] <= cfg.pdp_delays_us[i - 1])
      fail("pdp_delays_us: delays must be strictly increasing");
  }
}

}  // namespace cellfree
