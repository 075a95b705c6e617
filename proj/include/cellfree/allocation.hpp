// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "cellfree/config.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace cellfree {

// Partition of the users into groups and of the RB pool into disjoint
// per-group sets.
struct AllocationPlan {
  std::vector<std::vector<std::size_t>> groups;   // user ids per group
  std::vector<std::vector<std::size_t>> rb_sets;  // 0-based RB ids per group
  std::size_t n_rb_total = 0;

  std::size_t group_of_user(std::size_t user) const;
};

// Materialize the configured grouping. Presets: mbb = one group of all K
// users owning every RB; mtc = N_RB groups of K/N_RB users, one RB each.
// Throws ConfigError on coverage/overlap/capacity violations.
AllocationPlan build_plan(const SimConfig& cfg);

// Per-user downlink rate [bit/s] from the per-RB SINRs of the user's
// group: (1 - (tau_p + tau_u)/N_T) * sum_r lambda_RB * delta_f * log2(1 + gamma_r).
double user_rate(std::span<const double> gamma_per_rb, const SimConfig& cfg);

// Compensated (Kahan) sum of the per-user rates.
double sum_throughput(std::span<const double> user_rates);

}  // namespace cellfree
