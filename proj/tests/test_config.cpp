// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cellfree/config.hpp"

#include <cmath>

using namespace cellfree;

TEST_CASE("empty config yields the standard defaults") {
  SimConfig cfg = parse_config_text("");
  CHECK(cfg.num_antennas == 128);
  CHECK(cfg.num_users == 6);
  CHECK(cfg.antennas_per_ap == 1);
  CHECK(cfg.num_subcarriers == 1200);
  CHECK(cfg.num_rb == 100);
  CHECK(cfg.rb_width == 12);
  CHECK(cfg.subcarrier_spacing_hz == 15000.0);
  CHECK(cfg.symbols_per_frame == 10);
  CHECK(cfg.tau_u == 0);
  CHECK(cfg.p_d_watt == 0.2);
  CHECK(cfg.p_u_watt == 0.1);
  CHECK(cfg.noise_density_dbm_hz == -174.0);
  CHECK(cfg.noise_figure_db == 9.0);
  CHECK(cfg.shadowing_sigma_db == 8.0);
  CHECK(cfg.pathloss.l_db == 140.72);
  CHECK(cfg.pathloss.d0_m == 10.0);
  CHECK(cfg.pathloss.d1_m == 50.0);
  CHECK(cfg.area_side_m == 1000.0);
  CHECK(cfg.preset == GroupPreset::kMbb);
  CHECK(cfg.effective_tau_p() == 1);  // ceil(6/12)
  CHECK(cfg.frame_overhead_factor() == doctest::Approx(0.9));
}

TEST_CASE("derived noise and power quantities") {
  SimConfig cfg;
  // -174 dBm/Hz + 9 dB over 15 kHz
  double want = std::pow(10.0, (-174.0 + 9.0 - 30.0) / 10.0) * 15000.0;
  CHECK(cfg.noise_power_w() == doctest::Approx(want).epsilon(1e-12));
  CHECK(want == doctest::Approx(4.7434e-16).epsilon(1e-4));

  cfg.power_normalization = PowerNormalization::kPerSubcarrier;
  CHECK(cfg.pd_subcarrier_w() == 0.2);
  CHECK(cfg.pu_subcarrier_w() == 0.1);
  cfg.power_normalization = PowerNormalization::kTotalSplit;
  CHECK(cfg.pd_subcarrier_w() == doctest::Approx(0.2 / 1200.0));
  CHECK(cfg.pu_subcarrier_w() == doctest::Approx(0.1 / 1200.0));
}

TEST_CASE("key parsing") {
  SimConfig cfg = parse_config_text(
      "# comment line\n"
      "M = 64\n"
      "K = 12   # trailing comment\n"
      "N = 120\n"
      "N_RB = 10\n"
      "lambda_RB = 12\n"
      "drops = 7\n"
      "seed = 42\n"
      "power_normalization = per_subcarrier\n");
  CHECK(cfg.num_antennas == 64);
  CHECK(cfg.num_users == 12);
  CHECK(cfg.num_subcarriers == 120);
  CHECK(cfg.drops == 7);
  CHECK(cfg.seed == 42);
  CHECK(cfg.power_normalization == PowerNormalization::kPerSubcarrier);
}

TEST_CASE("grid identity enforced") {
  CHECK_THROWS_WITH_AS(parse_config_text("N = 1200\nN_RB = 100\nlambda_RB = 13\n"),
                       doctest::Contains("N != N_RB*lambda_RB"), ConfigError);
}

TEST_CASE("pilot capacity enforced") {
  // one group of 13 users on a single RB with tau_p=1, lambda_RB=12
  CHECK_THROWS_WITH_AS(parse_config_text("K = 13\n"
                                         "N = 12\n"
                                         "N_RB = 1\n"
                                         "lambda_RB = 12\n"
                                         "tau_p = 1\n"),
                       doctest::Contains("pilot capacity"), ConfigError);
}

TEST_CASE("antenna blocking enforced") {
  CHECK_THROWS_WITH_AS(parse_config_text("M = 10\nN_t = 4\n"),
                       doctest::Contains("multiple of N_t"), ConfigError);
}

TEST_CASE("frame split enforced") {
  CHECK_THROWS_WITH_AS(parse_config_text("tau_p = 6\ntau_u = 4\n"),
                       doctest::Contains("tau_p + tau_u"), ConfigError);
}

TEST_CASE("custom preset round trip") {
  SimConfig cfg = parse_config_text(
      "preset = custom\n"
      "K = 10\n"
      "group_sizes = 6, 4\n"
      "rb_assignment = 1-50 ; 51-100\n");
  REQUIRE(cfg.group_sizes.size() == 2);
  CHECK(cfg.rb_assignment[0].size() == 50);
  CHECK(cfg.rb_assignment[1].front() == 50);  // 0-based

  CHECK_THROWS_WITH_AS(parse_config_text("preset = custom\n"
                                         "K = 10\n"
                                         "group_sizes = 6, 4\n"
                                         "rb_assignment = 1-50 ; 50-100\n"),
                       doctest::Contains("more than one group"), ConfigError);
}

TEST_CASE("parse errors carry context") {
  CHECK_THROWS_AS(parse_config_text("M 128\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("M = twelve\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("unknown_key = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("M = 1\nM = 2\n"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/path.cfg"), ConfigError);
}

TEST_CASE("auto tau_p follows the largest group") {
  SimConfig cfg = parse_config_text("preset = mtc\nK = 3600\n");
  CHECK(cfg.largest_group() == 36);
  CHECK(cfg.effective_tau_p() == 3);  // ceil(36/12)
  CHECK(cfg.frame_overhead_factor() == doctest::Approx(0.7));

  SimConfig cfg2 = parse_config_text("preset = mtc\nK = 1200\n");
  CHECK(cfg2.effective_tau_p() == 1);
}

TEST_CASE("custom pdp lists validated") {
  CHECK_THROWS_AS(parse_config_text("pdp_delays_us = 0, 1\npdp_powers_dB = 0\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config_text("pdp_delays_us = 0, 1, 0.5\n"
                                    "pdp_powers_dB = 0, 0, 0\n"),
                  ConfigError);
  SimConfig ok = parse_config_text("pdp_delays_us = 0, 1, 2\npdp_powers_dB = 0, -3, -6\n");
  CHECK(ok.pdp_delays_us.size() == 3);
}
