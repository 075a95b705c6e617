// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "cellfree/matrix.hpp"

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace cellfree {

// Full-power coefficients eta_mk = (sum_k' alpha_mk')^-1, identical across
// users for a fixed antenna. Values may exceed 1; they are used unclamped
// so that sum_k eta_mk alpha_mk = 1 holds per antenna (per-subcarrier
// transmit power exactly p_d).
Matrix<double> full_power_eta(const Matrix<double>& alpha);

// Closed-form SINR lower bound for user `k` (column index) on an RB whose
// users are the columns of the M x K_r matrices:
//   gamma = p_d (sum_m sqrt(eta_mk) alpha_mk)^2 /
//           (sigma_z^2 + p_d sum_m beta_mk sum_k' eta_mk' alpha_mk').
double sinr_single(const Matrix<double>& eta, const Matrix<double>& alpha,
                   const Matrix<double>& beta, std::size_t k, double p_d,
                   double sigma_z2);

// Multi-antenna-AP form over N_AP x K_r per-AP matrices:
//   gamma = p_d N_t^2 (sum_q sqrt(eta_qk) alpha_qk)^2 /
//           (sigma_z^2 + p_d N_t sum_q beta_qk sum_k' eta_qk' alpha_qk').
// With n_t = 1 this evaluates the exact same arithmetic as sinr_single.
double sinr_multi(const Matrix<double>& eta, const Matrix<double>& alpha,
                  const Matrix<double>& beta, std::size_t k, std::size_t n_t,
                  double p_d, double sigma_z2);

// Conjugate beamforming on one subcarrier: per-antenna transmit symbols
// x_m = sqrt(p_d) sum_k sqrt(eta_mk) conj(g_hat_mk) s_k.
std::vector<std::complex<double>> beamform_transmit(
    const Matrix<std::complex<double>>& g_hat, const Matrix<double>& eta, double p_d,
    std::span<const std::complex<double>> symbols);

// The four additive terms of one received RU, from user k's viewpoint.
struct RuTerms {
  std::complex<double> desired;    // sqrt(p_d) sum_m sqrt(eta_mk) |g_hat_mk|^2 s_k
  std::complex<double> mui;        // other users' precoded symbols through g_hat_mk
  std::complex<double> est_error;  // everything riding on xi_mk = g_true - g_hat
  std::complex<double> noise;      // y minus the three terms above
};

// Splits a received sample using the known estimates, estimation errors
// and transmitted symbols. g_hat and xi are the M-vectors for this RU
// (xi_m = true channel minus the estimate the precoder used).
RuTerms split_received_ru(std::complex<double> y,
                          const Matrix<std::complex<double>>& g_hat,
                          std::span<const std::complex<double>> xi,
                          const Matrix<double>& eta,
                          std::span<const std::complex<double>> symbols,
                          std::size_t k, double p_d);

// Average powers of the decomposition, accumulated over RUs/realizations.
struct PowerDecomposition {
  double desired_coherent = 0.0;  // |mean of desired/s_k|^2, the hardened part
  double desired_total = 0.0;     // E|desired|^2
  double mui = 0.0;
  double est_error = 0.0;
  double noise = 0.0;
  std::size_t samples = 0;

  // everything the bound counts against the signal:
  // fluctuation of the desired term + MUI + estimation error
  double residual() const { return desired_total - desired_coherent + mui + est_error; }
  // empirical SINR using the full desired-term power
  double measured_sinr() const { return desired_total / (mui + est_error + noise); }
  // hardened SINR estimate matching the closed-form bound's structure
  double hardened_sinr() const { return desired_coherent / (residual() + noise); }
};

class DecompositionAccumulator {
 public:
  void add(const RuTerms& t, std::complex<double> s_k);
  PowerDecomposition finalize() const;

 private:
  std::complex<double> coherent_sum_{0.0, 0.0};
  double desired2_ = 0.0, mui2_ = 0.0, err2_ = 0.0, noise2_ = 0.0;
  std::size_t n_ = 0;
};

}  // namespace cellfree
