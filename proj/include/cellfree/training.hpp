// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "cellfree/matrix.hpp"
#include "cellfree/rng.hpp"

#include <complex>
#include <cstddef>
#include <vector>

namespace cellfree {

// Reserved resource unit for one user's pilot inside an RB.
struct PilotRu {
  std::size_t symbol;      // 0-based OFDM symbol index, < tau_p
  std::size_t subcarrier;  // absolute subcarrier index
};

// Pilot reservations for the users of one RB. User j transmits only on
// ru[j]; every other pilot-phase RU of the RB is silent for that user, so
// observations are contamination-free by construction.
struct PilotPlan {
  std::size_t rb_index = 0;
  std::size_t tau_p = 0;
  std::size_t rb_width = 0;
  std::vector<PilotRu> ru;  // one entry per user on the RB
};

// Deterministic row-major fill: user j gets symbol floor(j / rb_width) and
// subcarrier rb_index*rb_width + (j mod rb_width). Throws when the RB's
// pilot capacity tau_p*rb_width is exceeded.
PilotPlan assign_pilots(std::size_t n_users, std::size_t tau_p, std::size_t rb_width,
                        std::size_t rb_index);

// Unit-modulus pilot symbols with random phases, one per user.
std::vector<std::complex<double>> make_pilot_symbols(std::size_t n_users, Rng& rng);

// Observation on the reserved RU: y = sqrt(p_u) * g * pilot + noise.
std::complex<double> receive_pilot(std::complex<double> g_true, double p_u,
                                   std::complex<double> pilot, std::complex<double> noise);

// Estimator variance alpha = p_u beta^2 / (p_u beta + sigma_z^2).
double estimate_variance(double beta, double p_u, double sigma_z2);

// MMSE estimate from the pilot observation. Includes the sqrt(p_u)
// transmit amplitude of the observation model, so the estimate is
// CN(0, alpha) with alpha = estimate_variance(...).
std::complex<double> mmse_estimate(std::complex<double> y_obs, double beta, double p_u,
                                   double sigma_z2, std::complex<double> pilot);

// Per-antenna-vector variant for a collocated AP: elementwise scalar rule
// with R_gg = beta_q I and R_nn = sigma_z^2 I.
std::vector<std::complex<double>> mmse_estimate_vector(
    const std::vector<std::complex<double>>& y_obs, double beta_q, double p_u,
    double sigma_z2, std::complex<double> pilot);

// Uplink payload weighting: x = sqrt(psi * p_u) * q with 0 <= psi <= 1.
std::complex<double> uplink_payload_symbol(std::complex<double> q, double psi, double p_u);

// Closed-form shortcut: draw the estimate and the estimation error from
// their exact MMSE statistics, CN(0, alpha) and CN(0, beta - alpha).
std::complex<double> draw_estimate(double beta, double p_u, double sigma_z2, Rng& rng);

}  // namespace cellfree
