// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "cellfree/allocation.hpp"
#include "cellfree/config.hpp"
#include "cellfree/geometry.hpp"

#include <string>
#include <vector>

namespace cellfree {

enum class Engine {
  kClosedForm,  // SINR lower bound evaluated from large-scale statistics
  kWaveform,    // measured through the explicit OFDM chain (small N only)
};

struct ExperimentOptions {
  Engine engine = Engine::kClosedForm;
  unsigned threads = 0;  // 0 = hardware concurrency
  bool dump_geometry = false;
  bool dump_sinr = false;
};

struct DropResult {
  std::vector<double> gamma;     // per user, identical across the group's RBs
  std::vector<double> rate_bps;  // per user
  double sum_bps = 0.0;
};

struct RateReport {
  SimConfig cfg;
  AllocationPlan plan;
  Engine engine = Engine::kClosedForm;
  std::vector<std::size_t> user_group;  // group id per user
  std::vector<DropResult> drops;

  // pooled summaries
  std::vector<double> pooled_rates;  // one sample per (drop, user)
  double p95_likely_bps = 0.0;       // 5th percentile of pooled per-user rates
  double median_bps = 0.0;
  double mean_sum_bps = 0.0;
  std::vector<double> group_mean_sum_bps;

  // optional dumps (filled when requested)
  std::vector<std::string> geometry_csv_rows;
  std::vector<std::string> sinr_csv_rows;
};

// Run `cfg.drops` independent geometry drops, evaluate every user's SINR
// and rate, and aggregate. Deterministic for a fixed seed regardless of
// the thread count.
RateReport run_experiment(const SimConfig& cfg, const ExperimentOptions& opt = {});

// Evaluate one drop's SINRs with the closed-form engine. Exposed for
// tests; `state` must match cfg's dimensions.
DropResult evaluate_drop_closed_form(const SimConfig& cfg, const AllocationPlan& plan,
                                     const LargeScaleState& state);

// Output files. rates.csv: drop,user,group,rate_bps. cdf.csv: rate_bps,cdf
// (1000 evaluation points over the pooled per-user rates).
void write_rates_csv(const RateReport& report, const std::string& path);
void write_cdf_csv(const RateReport& report, const std::string& path);
std::string summary_json(const RateReport& report);
void write_summary_json(const RateReport& report, const std::string& path);

}  // namespace cellfree
