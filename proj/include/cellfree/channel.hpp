// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "cellfree/config.hpp"
#include "cellfree/matrix.hpp"
#include "cellfree/ofdm.hpp"
#include "cellfree/rng.hpp"

#include <cstddef>
#include <vector>

namespace cellfree {

struct PowerDelayProfile {
  std::vector<double> delays_s;   // strictly increasing, first usually 0
  std::vector<double> powers_db;  // relative path powers

  // 3GPP Extended Typical Urban profile (9 paths, 0..5 us).
  static PowerDelayProfile etu();
  // cfg's custom profile when given, ETU otherwise.
  static PowerDelayProfile from_config(const SimConfig& cfg);

  std::size_t size() const { return delays_s.size(); }
  double max_delay_s() const;
  double linear_power_sum() const;                    // before normalization
  std::vector<double> normalized_linear_powers() const;  // sums to 1

  // Delays rounded to the nearest multiple of ts; coinciding paths are
  // merged by adding their linear powers. Produces uncorrelated taps on
  // the sampling grid (standard tapped-delay-line discretization).
  PowerDelayProfile snapped_to_grid(double ts) const;

  void validate() const;  // throws std::invalid_argument
};

// Tap count used for this profile at sampling interval ts: one more than
// the last path position in samples, so the final path's center is kept.
std::size_t filter_length(const PowerDelayProfile& pdp, double ts,
                          std::size_t min_taps = 0);

// Draw one link's tap vector. Per-path gains are CN(0, p_i) with p_i the
// normalized linear powers; paths are placed on the ts grid by sinc
// interpolation and the vector is scaled so E[sum_l |h_l|^2] = 1 exactly,
// then by sqrt(beta).
cvec draw_taps(const PowerDelayProfile& pdp, double beta, double ts, Rng& rng,
               std::size_t min_taps = 0);

// Frequency response over n subcarriers: dft of the zero-padded taps.
cvec freq_response(const cvec& taps, std::size_t n);

// Block-fading reduction: one representative gain per RB, taken at the
// RB's center subcarrier (index r*rb_width + rb_width/2).
cvec rb_gains(const cvec& freq, std::size_t n_rb, std::size_t rb_width);

// Channels of every (antenna, user) link for one small-scale realization.
struct ChannelSet {
  std::size_t n_antennas = 0;
  std::size_t n_users = 0;
  std::size_t n_subcarriers = 0;
  std::size_t n_taps = 0;
  std::vector<cvec> taps;  // indexed m * n_users + k
  std::vector<cvec> freq;

  const cvec& link_taps(std::size_t m, std::size_t k) const {
    return taps[m * n_users + k];
  }
  const cvec& link_freq(std::size_t m, std::size_t k) const {
    return freq[m * n_users + k];
  }
};

// Draws all M*K links with a shared interpolation kernel. rng is consumed
// row-major over (antenna, user).
ChannelSet draw_channel_set(const PowerDelayProfile& pdp, const Matrix<double>& beta,
                            std::size_t n_subcarriers, double ts, Rng& rng,
                            std::size_t min_taps = 0);

}  // namespace cellfree
