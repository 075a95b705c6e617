// SPDX-License-Identifier: Apache-2.0
#include "cellfree/waveform.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace cellfree {

std::vector<cvec> transmit_symbol(const ChannelSet& chan, const std::vector<cvec>& tx_freq,
                                  double noise_var, std::size_t l_cp, Rng& noise_rng,
                                  bool downlink) {
  const std::size_t n = chan.n_subcarriers;
  const std::size_t n_tx = downlink ? chan.n_antennas : chan.n_users;
  const std::size_t n_rx = downlink ? chan.n_users : chan.n_antennas;
  if (tx_freq.size() != n_tx)
    throw std::invalid_argument("transmit_symbol: one block per transmitter required");
  if (l_cp <= chan.n_taps)
    throw std::invalid_argument("transmit_symbol: L_cp must exceed the channel filter length (L_cp=" +
                                std::to_string(l_cp) + ", taps=" + std::to_string(chan.n_taps) + ")");

  // modulate every transmitter once
  std::vector<cvec> tx_time(n_tx);
  for (std::size_t i = 0; i < n_tx; ++i) {
    if (tx_freq[i].size() != n)
      throw std::invalid_argument("transmit_symbol: block length != N");
    tx_time[i] = add_cp(idft(tx_freq[i]), l_cp);
  }

  const double time_noise_var = noise_var / static_cast<double>(n);
  std::vector<cvec> rx(n_rx);
  const std::size_t stream_len = n + l_cp + chan.n_taps - 1;
  for (std::size_t r = 0; r < n_rx; ++r) {
    cvec stream(stream_len, 0.0);
    for (std::size_t t = 0; t < n_tx; ++t) {
      const cvec& taps = downlink ? chan.link_taps(t, r) : chan.link_taps(r, t);
      cvec contrib = linear_convolve(tx_time[t], taps);
      for (std::size_t i = 0; i < contrib.size(); ++i) stream[i] += contrib[i];
    }
    if (noise_var > 0.0) {
      for (auto& v : stream) v += noise_rng.cnormal(time_noise_var);
    }
    rx[r] = dft(remove_cp(stream, l_cp, n));
  }
  return rx;
}

std::vector<std::vector<cvec>> simulate_downlink_frame(
    const ChannelSet& chan, const std::vector<std::vector<cvec>>& tx_blocks,
    double noise_var, std::size_t l_cp, Rng& noise_rng) {
  if (tx_blocks.empty()) return {};
  const std::size_t n_symbols = tx_blocks.front().size();
  for (const auto& per_ap : tx_blocks)
    if (per_ap.size() != n_symbols)
      throw std::invalid_argument("simulate_downlink_frame: ragged symbol counts");

  std::vector<std::vector<cvec>> rx(chan.n_users, std::vector<cvec>(n_symbols));
  std::vector<cvec> tx_one(chan.n_antennas);
  for (std::size_t t = 0; t < n_symbols; ++t) {
    for (std::size_t m = 0; m < chan.n_antennas; ++m) tx_one[m] = tx_blocks[m][t];
    auto rx_one = transmit_symbol(chan, tx_one, noise_var, l_cp, noise_rng, true);
    for (std::size_t k = 0; k < chan.n_users; ++k) rx[k][t] = std::move(rx_one[k]);
  }
  return rx;
}

WaveformGroupStats run_waveform_group(const WaveformRunConfig& wcfg,
                                      const Matrix<double>& beta,
                                      std::size_t realizations, Rng& chan_rng,
                                      Rng& pilot_rng, Rng& noise_rng, Rng& data_rng) {
  const std::size_t n_ant = beta.rows();
  const std::size_t n_usr = beta.cols();
  const std::size_t n = wcfg.n_subcarriers;
  if (n != wcfg.n_rb * wcfg.rb_width)
    throw std::invalid_argument("run_waveform_group: N != N_RB * lambda_RB");

  std::vector<std::size_t> rb_list = wcfg.rb_list;
  if (rb_list.empty()) {
    rb_list.resize(wcfg.n_rb);
    std::iota(rb_list.begin(), rb_list.end(), 0);
  }

  // statistics-level quantities, fixed across realizations
  Matrix<double> alpha(n_ant, n_usr);
  for (std::size_t m = 0; m < n_ant; ++m)
    for (std::size_t k = 0; k < n_usr; ++k)
      alpha(m, k) = estimate_variance(beta(m, k), wcfg.p_u, wcfg.sigma_z2);
  Matrix<double> eta = full_power_eta(alpha);

  // pilot reservations per RB (same layout on each)
  std::vector<PilotPlan> plans;
  plans.reserve(rb_list.size());
  for (auto r : rb_list)
    plans.push_back(assign_pilots(n_usr, wcfg.tau_p, wcfg.rb_width, r));

  Matrix<DecompositionAccumulator> acc(n_usr, rb_list.size());
  std::vector<DecompositionAccumulator> acc_user(n_usr);

  for (std::size_t real = 0; real < realizations; ++real) {
    ChannelSet chan = draw_channel_set(wcfg.pdp, beta, n, wcfg.ts, chan_rng);
    const std::size_t l_cp = wcfg.l_cp ? wcfg.l_cp : chan.n_taps + 1;
    auto pilots = make_pilot_symbols(n_usr, pilot_rng);

    // ---- uplink training through the physical chain ----
    // per-RB estimate matrices (antennas x users)
    std::vector<Matrix<std::complex<double>>> g_hat(
        rb_list.size(), Matrix<std::complex<double>>(n_ant, n_usr));
    std::vector<cvec> ul_tx(n_usr, cvec(n, 0.0));
    for (std::size_t t = 0; t < wcfg.tau_p; ++t) {
      for (auto& blk : ul_tx) std::fill(blk.begin(), blk.end(), std::complex<double>(0.0));
      bool any = false;
      for (std::size_t ri = 0; ri < rb_list.size(); ++ri) {
        for (std::size_t k = 0; k < n_usr; ++k) {
          if (plans[ri].ru[k].symbol == t) {
            ul_tx[k][plans[ri].ru[k].subcarrier] = std::sqrt(wcfg.p_u) * pilots[k];
            any = true;
          }
        }
      }
      if (!any) continue;
      auto ul_rx = transmit_symbol(chan, ul_tx, wcfg.sigma_z2, l_cp, noise_rng,
                                   /*downlink=*/false);
      for (std::size_t ri = 0; ri < rb_list.size(); ++ri) {
        for (std::size_t k = 0; k < n_usr; ++k) {
          if (plans[ri].ru[k].symbol != t) continue;
          std::size_t sc = plans[ri].ru[k].subcarrier;
          for (std::size_t m = 0; m < n_ant; ++m) {
            g_hat[ri](m, k) = mmse_estimate(ul_rx[m][sc], beta(m, k), wcfg.p_u,
                                            wcfg.sigma_z2, pilots[k]);
          }
        }
      }
    }

    // ---- downlink payload ----
    std::vector<cvec> dl_tx(n_ant, cvec(n, 0.0));
    Matrix<std::complex<double>> symbols(n_usr, n);
    std::vector<std::complex<double>> s_col(n_usr);
    std::vector<std::complex<double>> xi_col(n_ant);
    for (std::size_t t = 0; t < wcfg.data_symbols; ++t) {
      for (auto& blk : dl_tx) std::fill(blk.begin(), blk.end(), std::complex<double>(0.0));
      for (std::size_t ri = 0; ri < rb_list.size(); ++ri) {
        std::size_t base = rb_list[ri] * wcfg.rb_width;
        for (std::size_t off = 0; off < wcfg.rb_width; ++off) {
          std::size_t sc = base + off;
          for (std::size_t k = 0; k < n_usr; ++k) {
            symbols(k, sc) = data_rng.qpsk();
            s_col[k] = symbols(k, sc);
          }
          auto x = beamform_transmit(g_hat[ri], eta, wcfg.p_d, s_col);
          for (std::size_t m = 0; m < n_ant; ++m) dl_tx[m][sc] = x[m];
        }
      }
      auto dl_rx = transmit_symbol(chan, dl_tx, wcfg.sigma_z2, l_cp, noise_rng, true);
      for (std::size_t ri = 0; ri < rb_list.size(); ++ri) {
        std::size_t base = rb_list[ri] * wcfg.rb_width;
        for (std::size_t off = 0; off < wcfg.rb_width; ++off) {
          std::size_t sc = base + off;
          for (std::size_t k = 0; k < n_usr; ++k) s_col[k] = symbols(k, sc);
          for (std::size_t k = 0; k < n_usr; ++k) {
            for (std::size_t m = 0; m < n_ant; ++m)
              xi_col[m] = chan.link_freq(m, k)[sc] - g_hat[ri](m, k);
            RuTerms terms = split_received_ru(dl_rx[k][sc], g_hat[ri], xi_col, eta,
                                              s_col, k, wcfg.p_d);
            acc(k, ri).add(terms, s_col[k]);
            acc_user[k].add(terms, s_col[k]);
          }
        }
      }
    }
  }

  WaveformGroupStats out;
  out.per_user_rb = Matrix<PowerDecomposition>(n_usr, rb_list.size());
  for (std::size_t k = 0; k < n_usr; ++k)
    for (std::size_t ri = 0; ri < rb_list.size(); ++ri)
      out.per_user_rb(k, ri) = acc(k, ri).finalize();
  out.per_user.resize(n_usr);
  out.gamma_closed_form.resize(n_usr);
  for (std::size_t k = 0; k < n_usr; ++k) {
    out.per_user[k] = acc_user[k].finalize();
    out.gamma_closed_form[k] = sinr_single(eta, alpha, beta, k, wcfg.p_d, wcfg.sigma_z2);
  }
  return out;
}

}  // namespace cellfree
