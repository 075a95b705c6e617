// SPDX-License-Identifier: Apache-2.0
#include "cellfree/harness.hpp"

#include "cellfree/beamforming.hpp"
#include "cellfree/rng.hpp"
#include "cellfree/stats.hpp"
#include "cellfree/training.hpp"
#include "cellfree/waveform.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace cellfree {

namespace {

// AP-level (N_AP x K_r) submatrices for one group, taking one row per AP
// block (collocated antennas share beta).
struct GroupMatrices {
  Matrix<double> beta;
  Matrix<double> alpha;
  Matrix<double> eta;
};

GroupMatrices group_matrices(const SimConfig& cfg, const LargeScaleState& state,
                             const std::vector<std::size_t>& users) {
  const std::size_t n_ap = cfg.num_aps();
  const std::size_t n_t = cfg.antennas_per_ap;
  const double p_u = cfg.pu_subcarrier_w();
  const double sigma_z2 = cfg.noise_power_w();
  GroupMatrices g{Matrix<double>(n_ap, users.size()), Matrix<double>(n_ap, users.size()),
                  Matrix<double>()};
  for (std::size_t q = 0; q < n_ap; ++q) {
    for (std::size_t j = 0; j < users.size(); ++j) {
      double b = state.beta(q * n_t, users[j]);
      g.beta(q, j) = b;
      g.alpha(q, j) = estimate_variance(b, p_u, sigma_z2);
    }
  }
  g.eta = full_power_eta(g.alpha);
  return g;
}

std::string format_row(const char* fmt, ...) {
  char buf[256];
  va_list args;
  va_start(args, fmt);
  vsnprintf(buf, sizeof(buf), fmt, args);
  va_end(args);
  return buf;
}

DropResult evaluate_drop_waveform(const SimConfig& cfg, const AllocationPlan& plan,
                                  const LargeScaleState& state, std::uint64_t drop,
                                  std::vector<std::string>* sinr_rows) {
  DropResult result;
  result.gamma.assign(cfg.num_users, 0.0);
  result.rate_bps.assign(cfg.num_users, 0.0);

  Rng chan_rng = substream(cfg.seed, drop, RngLane::kChannel);
  Rng pilot_rng = substream(cfg.seed, drop, RngLane::kPilot);
  Rng noise_rng = substream(cfg.seed, drop, RngLane::kNoise);
  Rng data_rng = substream(cfg.seed, drop, RngLane::kData);

  const std::size_t data_symbols =
      cfg.symbols_per_frame - cfg.effective_tau_p() - cfg.tau_u;

  for (std::size_t s = 0; s < plan.groups.size(); ++s) {
    if (plan.rb_sets[s].empty()) continue;
    const auto& users = plan.groups[s];

    WaveformRunConfig wcfg;
    wcfg.n_subcarriers = cfg.num_subcarriers;
    wcfg.n_rb = cfg.num_rb;
    wcfg.rb_width = cfg.rb_width;
    wcfg.rb_list = plan.rb_sets[s];
    wcfg.tau_p = cfg.effective_tau_p();
    wcfg.data_symbols = data_symbols;
    wcfg.ts = cfg.sample_interval_s();
    wcfg.p_d = cfg.pd_subcarrier_w();
    wcfg.p_u = cfg.pu_subcarrier_w();
    wcfg.sigma_z2 = cfg.noise_power_w();
    wcfg.pdp = PowerDelayProfile::from_config(cfg);

    // full antenna-level beta for this group's users
    Matrix<double> beta(cfg.num_antennas, users.size());
    for (std::size_t m = 0; m < cfg.num_antennas; ++m)
      for (std::size_t j = 0; j < users.size(); ++j)
        beta(m, j) = state.beta(m, users[j]);

    auto stats = run_waveform_group(wcfg, beta, cfg.waveform_realizations, chan_rng,
                                    pilot_rng, noise_rng, data_rng);

    std::vector<double> gammas(plan.rb_sets[s].size());
    for (std::size_t j = 0; j < users.size(); ++j) {
      for (std::size_t ri = 0; ri < plan.rb_sets[s].size(); ++ri) {
        gammas[ri] = stats.per_user_rb(j, ri).hardened_sinr();
        if (!std::isfinite(gammas[ri]))
          throw std::runtime_error("waveform engine produced non-finite SINR");
        if (sinr_rows) {
          const auto& p = stats.per_user_rb(j, ri);
          sinr_rows->push_back(format_row(
              "%llu,%zu,%zu,%.10g,%.10g,%.10g,%.10g",
              static_cast<unsigned long long>(drop), users[j], plan.rb_sets[s][ri] + 1,
              gammas[ri], p.desired_coherent, p.residual(), p.noise));
        }
      }
      result.gamma[users[j]] = gammas.front();
      result.rate_bps[users[j]] = user_rate(gammas, cfg);
    }
  }
  result.sum_bps = sum_throughput(result.rate_bps);
  return result;
}

}  // namespace

DropResult evaluate_drop_closed_form(const SimConfig& cfg, const AllocationPlan& plan,
                                     const LargeScaleState& state) {
  DropResult result;
  result.gamma.assign(cfg.num_users, 0.0);
  result.rate_bps.assign(cfg.num_users, 0.0);
  const double p_d = cfg.pd_subcarrier_w();
  const double sigma_z2 = cfg.noise_power_w();

  for (std::size_t s = 0; s < plan.groups.size(); ++s) {
    if (plan.rb_sets[s].empty()) continue;
    const auto& users = plan.groups[s];
    GroupMatrices g = group_matrices(cfg, state, users);
    std::vector<double> gammas(plan.rb_sets[s].size());
    for (std::size_t j = 0; j < users.size(); ++j) {
      double gamma = sinr_multi(g.eta, g.alpha, g.beta, j, cfg.antennas_per_ap, p_d,
                                sigma_z2);
      if (!std::isfinite(gamma))
        throw std::runtime_error("closed-form engine produced non-finite SINR");
      // the bound is RB-invariant: same gamma on each RB of the group
      std::fill(gammas.begin(), gammas.end(), gamma);
      result.gamma[users[j]] = gamma;
      result.rate_bps[users[j]] = user_rate(gammas, cfg);
    }
  }
  result.sum_bps = sum_throughput(result.rate_bps);
  return result;
}

RateReport run_experiment(const SimConfig& cfg, const ExperimentOptions& opt) {
  validate_config(cfg);

  RateReport report;
  report.cfg = cfg;
  report.plan = build_plan(cfg);
  report.engine = opt.engine;
  report.user_group.assign(cfg.num_users, 0);
  for (std::size_t s = 0; s < report.plan.groups.size(); ++s)
    for (auto u : report.plan.groups[s]) report.user_group[u] = s;

  report.drops.resize(cfg.drops);
  std::vector<std::vector<std::string>> geo_rows(opt.dump_geometry ? cfg.drops : 0);
  std::vector<std::vector<std::string>> sinr_rows(opt.dump_sinr ? cfg.drops : 0);

  auto run_drop = [&](std::size_t d) {
    Rng geometry_rng = substream(cfg.seed, d, RngLane::kGeometry);
    LargeScaleState state = drop_geometry(cfg, geometry_rng);
    if (opt.dump_geometry) {
      auto& rows = geo_rows[d];
      for (std::size_t i = 0; i < state.ap_positions.size(); ++i)
        rows.push_back(format_row("%zu,ap,%zu,%.10g,%.10g", d, i,
                                  state.ap_positions[i].x, state.ap_positions[i].y));
      for (std::size_t i = 0; i < state.user_positions.size(); ++i)
        rows.push_back(format_row("%zu,user,%zu,%.10g,%.10g", d, i,
                                  state.user_positions[i].x, state.user_positions[i].y));
    }
    if (opt.engine == Engine::kClosedForm) {
      report.drops[d] = evaluate_drop_closed_form(cfg, report.plan, state);
      if (opt.dump_sinr) {
        const double p_d = cfg.pd_subcarrier_w();
        const double sigma_z2 = cfg.noise_power_w();
        for (std::size_t s = 0; s < report.plan.groups.size(); ++s) {
          if (report.plan.rb_sets[s].empty()) continue;
          GroupMatrices g = group_matrices(cfg, state, report.plan.groups[s]);
          for (std::size_t j = 0; j < report.plan.groups[s].size(); ++j) {
            std::size_t u = report.plan.groups[s][j];
            double coherent = 0.0, leak = 0.0;
            for (std::size_t q = 0; q < g.alpha.rows(); ++q) {
              coherent += std::sqrt(g.eta(q, j)) * g.alpha(q, j);
              double load = 0.0;
              for (std::size_t kp = 0; kp < g.alpha.cols(); ++kp)
                load += g.eta(q, kp) * g.alpha(q, kp);
              leak += g.beta(q, j) * load;
            }
            double nt = static_cast<double>(cfg.antennas_per_ap);
            double desired = p_d * nt * nt * coherent * coherent;
            double mui_err = p_d * nt * leak;
            for (auto r : report.plan.rb_sets[s])
              sinr_rows[d].push_back(format_row("%zu,%zu,%zu,%.10g,%.10g,%.10g,%.10g",
                                                d, u, r + 1, report.drops[d].gamma[u],
                                                desired, mui_err, sigma_z2));
          }
        }
      }
    } else {
      report.drops[d] = evaluate_drop_waveform(cfg, report.plan, state, d,
                                               opt.dump_sinr ? &sinr_rows[d] : nullptr);
    }
  };

  unsigned n_threads = opt.threads ? opt.threads : std::thread::hardware_concurrency();
  if (n_threads == 0) n_threads = 1;
  n_threads = static_cast<unsigned>(
      std::min<std::size_t>(n_threads, cfg.drops));

  if (n_threads <= 1) {
    for (std::size_t d = 0; d < cfg.drops; ++d) run_drop(d);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> workers;
    workers.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) {
      workers.emplace_back([&] {
        for (;;) {
          std::size_t d = next.fetch_add(1);
          if (d >= cfg.drops) return;
          try {
            run_drop(d);
          } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
            return;
          }
        }
      });
    }
    for (auto& w : workers) w.join();
    if (first_error) std::rethrow_exception(first_error);
  }

  // deterministic merge in drop order
  report.pooled_rates.reserve(cfg.drops * cfg.num_users);
  std::vector<double> drop_sums;
  drop_sums.reserve(cfg.drops);
  std::vector<std::vector<double>> group_sums(report.plan.groups.size());
  for (std::size_t d = 0; d < cfg.drops; ++d) {
    const auto& dr = report.drops[d];
    report.pooled_rates.insert(report.pooled_rates.end(), dr.rate_bps.begin(),
                               dr.rate_bps.end());
    drop_sums.push_back(dr.sum_bps);
    for (std::size_t s = 0; s < report.plan.groups.size(); ++s) {
      std::vector<double> rates;
      rates.reserve(report.plan.groups[s].size());
      for (auto u : report.plan.groups[s]) rates.push_back(dr.rate_bps[u]);
      group_sums[s].push_back(sum_throughput(rates));
    }
  }
  EmpiricalCdf cdf(report.pooled_rates);
  report.p95_likely_bps = cdf.percentile(0.05);
  report.median_bps = cdf.percentile(0.5);
  report.mean_sum_bps = mean(drop_sums);
  report.group_mean_sum_bps.resize(report.plan.groups.size());
  for (std::size_t s = 0; s < report.plan.groups.size(); ++s)
    report.group_mean_sum_bps[s] = mean(group_sums[s]);

  for (auto& rows : geo_rows)
    report.geometry_csv_rows.insert(report.geometry_csv_rows.end(), rows.begin(),
                                    rows.end());
  for (auto& rows : sinr_rows)
    report.sinr_csv_rows.insert(report.sinr_csv_rows.end(), rows.begin(), rows.end());
  return report;
}

void write_rates_csv(const RateReport& report, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  f << "drop,user,group,rate_bps\n";
  char buf[128];
  for (std::size_t d = 0; d < report.drops.size(); ++d) {
    const auto& dr = report.drops[d];
    for (std::size_t u = 0; u < dr.rate_bps.size(); ++u) {
      std::snprintf(buf, sizeof(buf), "%zu,%zu,%zu,%.10g\n", d, u,
                    report.user_group[u] + 1, dr.rate_bps[u]);
      f << buf;
    }
  }
}

void write_cdf_csv(const RateReport& report, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  f << "rate_bps,cdf\n";
  EmpiricalCdf cdf(report.pooled_rates);
  const std::size_t kPoints = 1000;
  double lo = cdf.min();
  double hi = cdf.max();
  char buf[96];
  for (std::size_t i = 0; i < kPoints; ++i) {
    double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(kPoints - 1);
    std::snprintf(buf, sizeof(buf), "%.10g,%.10g\n", x, cdf(x));
    f << buf;
  }
}

std::string summary_json(const RateReport& report) {
  nlohmann::ordered_json j;
  const SimConfig& cfg = report.cfg;
  j["engine"] = report.engine == Engine::kClosedForm ? "closed-form" : "waveform";
  j["seed"] = cfg.seed;
  j["drops"] = cfg.drops;
  j["power_normalization"] = to_string(cfg.power_normalization);
  j["p95_likely_bps"] = report.p95_likely_bps;
  j["median_bps"] = report.median_bps;
  j["sum_bps"] = report.mean_sum_bps;
  j["samples"] = report.pooled_rates.size();

  nlohmann::ordered_json groups = nlohmann::ordered_json::array();
  for (std::size_t s = 0; s < report.plan.groups.size(); ++s) {
    nlohmann::ordered_json g;
    g["group"] = s + 1;
    g["users"] = report.plan.groups[s].size();
    g["rb_count"] = report.plan.rb_sets[s].size();
    g["mean_sum_bps"] = report.group_mean_sum_bps[s];
    groups.push_back(g);
  }
  j["groups"] = groups;

  nlohmann::ordered_json c;
  c["area_side"] = cfg.area_side_m;
  c["M"] = cfg.num_antennas;
  c["N_t"] = cfg.antennas_per_ap;
  c["K"] = cfg.num_users;
  c["preset"] = to_string(cfg.preset);
  c["N"] = cfg.num_subcarriers;
  c["N_RB"] = cfg.num_rb;
  c["lambda_RB"] = cfg.rb_width;
  c["delta_f"] = cfg.subcarrier_spacing_hz;
  c["N_T"] = cfg.symbols_per_frame;
  c["tau_p"] = cfg.effective_tau_p();
  c["tau_u"] = cfg.tau_u;
  c["p_d"] = cfg.p_d_watt;
  c["p_u"] = cfg.p_u_watt;
  c["noise_density_dBm_per_Hz"] = cfg.noise_density_dbm_hz;
  c["noise_figure_dB"] = cfg.noise_figure_db;
  c["shadowing_sigma_dB"] = cfg.shadowing_sigma_db;
  c["pathloss_L_dB"] = cfg.pathloss.l_db;
  c["pathloss_d0"] = cfg.pathloss.d0_m;
  c["pathloss_d1"] = cfg.pathloss.d1_m;
  j["config"] = c;
  return j.dump(2) + "\n";
}

void write_summary_json(const RateReport& report, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  f << summary_json(report);
}

}  // namespace cellfree
