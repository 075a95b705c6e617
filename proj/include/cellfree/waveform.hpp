// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "cellfree/beamforming.hpp"
#include "cellfree/channel.hpp"
#include "cellfree/matrix.hpp"
#include "cellfree/ofdm.hpp"
#include "cellfree/rng.hpp"
#include "cellfree/training.hpp"

#include <cstddef>
#include <vector>

namespace cellfree {

// One OFDM symbol through the physical chain for every transmitter at
// once: IDFT -> CP -> per-link linear convolution -> superposition at each
// receiver -> additive noise -> CP removal -> DFT.
//
// tx_freq holds one frequency block per transmit antenna. When `downlink`
// is true transmitters are the chan's antennas and receivers its users;
// false swaps the roles (reciprocal channel). noise_var is the target
// per-subcarrier noise power sigma_z^2; the equivalent time-domain noise
// of variance sigma_z^2/N is injected, matching the unnormalized DFT.
// Throws if l_cp does not exceed the channel memory (taps - 1).
std::vector<cvec> transmit_symbol(const ChannelSet& chan, const std::vector<cvec>& tx_freq,
                                  double noise_var, std::size_t l_cp, Rng& noise_rng,
                                  bool downlink = true);

// Whole-frame convenience wrapper over transmit_symbol: tx[antenna][symbol]
// frequency blocks in, rx[user][symbol] frequency blocks out.
std::vector<std::vector<cvec>> simulate_downlink_frame(
    const ChannelSet& chan, const std::vector<std::vector<cvec>>& tx_blocks,
    double noise_var, std::size_t l_cp, Rng& noise_rng);

// Setup for a waveform-level run of one user group.
struct WaveformRunConfig {
  std::size_t n_subcarriers = 64;
  std::size_t n_rb = 64;
  std::size_t rb_width = 1;
  std::vector<std::size_t> rb_list;  // RBs carrying this group; empty = all
  std::size_t tau_p = 1;
  std::size_t data_symbols = 1;  // downlink payload symbols per realization
  double ts = 1.0 / (64.0 * 15000.0);
  double p_d = 0.2;
  double p_u = 0.1;
  double sigma_z2 = 1e-15;
  PowerDelayProfile pdp = PowerDelayProfile::etu();
  std::size_t l_cp = 0;  // 0 = auto: channel taps + 1
};

struct WaveformGroupStats {
  // decomposition per (user, RB in rb_list order), pooled over data RUs
  // and realizations
  Matrix<PowerDecomposition> per_user_rb;
  std::vector<PowerDecomposition> per_user;  // pooled over the group's RBs
  std::vector<double> gamma_closed_form;     // per user, RB-invariant
};

// Full pilot + MMSE + conjugate-beamforming + downlink waveform loop for
// one group of users sharing the RBs in rb_list, repeated `realizations`
// times over independent small-scale channels. beta is (antennas x users).
WaveformGroupStats run_waveform_group(const WaveformRunConfig& wcfg,
                                      const Matrix<double>& beta,
                                      std::size_t realizations, Rng& chan_rng,
                                      Rng& pilot_rng, Rng& noise_rng, Rng& data_rng);

}  // namespace cellfree
