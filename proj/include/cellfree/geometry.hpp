// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "cellfree/config.hpp"
#include "cellfree/matrix.hpp"
#include "cellfree/rng.hpp"

#include <vector>

namespace cellfree {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

// One geometry drop: positions plus the large-scale gain matrix.
// beta has M rows (antennas); the N_t rows of one AP are identical.
struct LargeScaleState {
  std::vector<Point> ap_positions;    // N_AP entries
  std::vector<Point> user_positions;  // K entries
  Matrix<double> beta;                // M x K, linear power gain
};

// Three-slope path loss [dB], negative-valued. Distances are clamped to
// 1 m so co-located endpoints stay finite.
double pathloss_db(double distance_m, const PathlossParams& pl);

// beta = 10^((PL + X)/10) with PL and shadowing X in dB.
double beta_from(double pathloss_db_value, double shadow_db);

// Uniform AP/user placement over the square and the resulting beta matrix.
// Consumes rng in a fixed order: AP positions, user positions, then
// shadowing draws row-major over (AP, user).
LargeScaleState drop_geometry(const SimConfig& cfg, Rng& rng);

}  // namespace cellfree
