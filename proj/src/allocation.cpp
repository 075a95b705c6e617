// SPDX-License-Identifier: Apache-2.0
#include "cellfree/allocation.hpp"

#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

namespace cellfree {

std::size_t AllocationPlan::group_of_user(std::size_t user) const {
  for (std::size_t s = 0; s < groups.size(); ++s)
    for (auto u : groups[s])
      if (u == user) return s;
  throw std::out_of_range("group_of_user: user not in any group");
}

AllocationPlan build_plan(const SimConfig& cfg) {
  AllocationPlan plan;
  plan.n_rb_total = cfg.num_rb;

  switch (cfg.preset) {
    case GroupPreset::kMbb: {
      std::vector<std::size_t> all_users(cfg.num_users);
      std::iota(all_users.begin(), all_users.end(), 0);
      std::vector<std::size_t> all_rbs(cfg.num_rb);
      std::iota(all_rbs.begin(), all_rbs.end(), 0);
      plan.groups.push_back(std::move(all_users));
      plan.rb_sets.push_back(std::move(all_rbs));
      break;
    }
    case GroupPreset::kMtc: {
      if (cfg.num_users % cfg.num_rb != 0)
        throw ConfigError("mtc preset requires K divisible by N_RB");
      std::size_t per_group = cfg.num_users / cfg.num_rb;
      for (std::size_t s = 0; s < cfg.num_rb; ++s) {
        std::vector<std::size_t> users(per_group);
        std::iota(users.begin(), users.end(), s * per_group);
        plan.groups.push_back(std::move(users));
        plan.rb_sets.push_back({s});
      }
      break;
    }
    case GroupPreset::kCustom: {
      std::size_t next = 0;
      for (std::size_t s = 0; s < cfg.group_sizes.size(); ++s) {
        std::vector<std::size_t> users(cfg.group_sizes[s]);
        std::iota(users.begin(), users.end(), next);
        next += cfg.group_sizes[s];
        plan.groups.push_back(std::move(users));
        plan.rb_sets.push_back(cfg.rb_assignment[s]);
      }
      if (next != cfg.num_users)
        throw ConfigError("group_sizes do not cover all K users");
      break;
    }
  }

  // invariants: disjoint RB sets, in-range ids, pilot capacity
  std::set<std::size_t> seen;
  std::size_t capacity = cfg.effective_tau_p() * cfg.rb_width;
  for (std::size_t s = 0; s < plan.groups.size(); ++s) {
    for (auto r : plan.rb_sets[s]) {
      if (r >= cfg.num_rb) throw ConfigError("RB id out of range");
      if (!seen.insert(r).second)
        throw ConfigError("RB " + std::to_string(r + 1) + " assigned twice");
    }
    if (!plan.rb_sets[s].empty() && plan.groups[s].size() > capacity)
      throw ConfigError("pilot capacity exceeded for group " + std::to_string(s + 1));
  }
  return plan;
}

double user_rate(std::span<const double> gamma_per_rb, const SimConfig& cfg) {
  if (cfg.effective_tau_p() + cfg.tau_u > cfg.symbols_per_frame)
    throw ConfigError("tau_p + tau_u exceeds N_T");
  double sum = 0.0;
  for (double g : gamma_per_rb) {
    if (!(g >= 0.0) || !std::isfinite(g))
      throw std::invalid_argument("user_rate: SINR must be finite and >= 0");
    sum += std::log2(1.0 + g);
  }
  return cfg.frame_overhead_factor() * static_cast<double>(cfg.rb_width) *
         cfg.subcarrier_spacing_hz * sum;
}

double sum_throughput(std::span<const double> user_rates) {
  double sum = 0.0;
  double comp = 0.0;
  for (double r : user_rates) {
    double y = r - comp;
    double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum;
}

}  // namespace cellfree
