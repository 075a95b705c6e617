// SPDX-License-Identifier: Apache-2.0
#include "cellfree/geometry.hpp"

#include <cmath>

namespace cellfree {

double pathloss_db(double distance_m, const PathlossParams& pl) {
  double d = std::max(distance_m, 1.0);
  double d1_km = pl.d1_m / 1000.0;
  if (d > pl.d1_m) {
    return -pl.l_db - 35.0 * std::log10(d / 1000.0);
  }
  double mid = -pl.l_db - 15.0 * std::log10(d1_km);
  if (d > pl.d0_m) {
    return mid - 20.0 * std::log10(d / 1000.0);
  }
  return mid - 20.0 * std::log10(pl.d0_m / 1000.0);
}

double beta_from(double pathloss_db_value, double shadow_db) {
  return std::pow(10.0, (pathloss_db_value + shadow_db) / 10.0);
}

LargeScaleState drop_geometry(const SimConfig& cfg, Rng& rng) {
  const std::size_t n_ap = cfg.num_aps();
  const std::size_t n_t = cfg.antennas_per_ap;
  const std::size_t k = cfg.num_users;

  LargeScaleState st;
  st.ap_positions.resize(n_ap);
  for (auto& p : st.ap_positions) {
    p.x = rng.uniform(0.0, cfg.area_side_m);
    p.y = rng.uniform(0.0, cfg.area_side_m);
  }
  st.user_positions.resize(k);
  for (auto& p : st.user_positions) {
    p.x = rng.uniform(0.0, cfg.area_side_m);
    p.y = rng.uniform(0.0, cfg.area_side_m);
  }

  st.beta = Matrix<double>(cfg.num_antennas, k);
  for (std::size_t q = 0; q < n_ap; ++q) {
    for (std::size_t u = 0; u < k; ++u) {
      double dx = st.ap_positions[q].x - st.user_positions[u].x;
      double dy = st.ap_positions[q].y - st.user_positions[u].y;
      double d = std::sqrt(dx * dx + dy * dy);
      double pl = pathloss_db(d, cfg.pathloss);
      double shadow = 0.0;
      if (cfg.shadowing_sigma_db > 0 &&
          (cfg.shadowing_below_d1 || d > cfg.pathloss.d1_m)) {
        shadow = rng.normal(0.0, cfg.shadowing_sigma_db);
      }
      double b = beta_from(pl, shadow);
      // collocated antennas share the AP's large-scale fading
      for (std::size_t a = 0; a < n_t; ++a) st.beta(q * n_t + a, u) = b;
    }
  }
  return st;
}

}  // namespace cellfree
