// SPDX-License-Identifier: Apache-2.0
#include "cellfree/training.hpp"

#include <cmath>
#include <stdexcept>

namespace cellfree {

PilotPlan assign_pilots(std::size_t n_users, std::size_t tau_p, std::size_t rb_width,
                        std::size_t rb_index) {
  if (tau_p == 0 || rb_width == 0)
    throw std::invalid_argument("assign_pilots: tau_p and rb_width must be >= 1");
  if (n_users > tau_p * rb_width)
    throw std::invalid_argument("assign_pilots: pilot capacity exceeded (" +
                                std::to_string(n_users) + " users > " +
                                std::to_string(tau_p * rb_width) + " pilots)");
  PilotPlan plan;
  plan.rb_index = rb_index;
  plan.tau_p = tau_p;
  plan.rb_width = rb_width;
  plan.ru.resize(n_users);
  for (std::size_t j = 0; j < n_users; ++j) {
    plan.ru[j].symbol = j / rb_width;
    plan.ru[j].subcarrier = rb_index * rb_width + (j % rb_width);
  }
  return plan;
}

std::vector<std::complex<double>> make_pilot_symbols(std::size_t n_users, Rng& rng) {
  std::vector<std::complex<double>> out(n_users);
  for (auto& p : out) p = rng.random_phase();
  return out;
}

std::complex<double> receive_pilot(std::complex<double> g_true, double p_u,
                                   std::complex<double> pilot,
                                   std::complex<double> noise) {
  return std::sqrt(p_u) * g_true * pilot + noise;
}

double estimate_variance(double beta, double p_u, double sigma_z2) {
  return p_u * beta * beta / (p_u * beta + sigma_z2);
}

std::complex<double> mmse_estimate(std::complex<double> y_obs, double beta, double p_u,
                                   double sigma_z2, std::complex<double> pilot) {
  if (beta <= 0.0) throw std::invalid_argument("mmse_estimate: beta must be > 0");
  if (sigma_z2 < 0.0 || p_u <= 0.0)
    throw std::invalid_argument("mmse_estimate: non-positive variance inputs");
  double p2 = std::norm(pilot);
  std::complex<double> coeff =
      std::sqrt(p_u) * beta * std::conj(pilot) / (p_u * beta * p2 + sigma_z2);
  return coeff * y_obs;
}

std::vector<std::complex<double>> mmse_estimate_vector(
    const std::vector<std::complex<double>>& y_obs, double beta_q, double p_u,
    double sigma_z2, std::complex<double> pilot) {
  std::vector<std::complex<double>> out(y_obs.size());
  for (std::size_t i = 0; i < y_obs.size(); ++i)
    out[i] = mmse_estimate(y_obs[i], beta_q, p_u, sigma_z2, pilot);
  return out;
}

std::complex<double> uplink_payload_symbol(std::complex<double> q, double psi, double p_u) {
  if (psi < 0.0 || psi > 1.0)
    throw std::invalid_argument("uplink_payload_symbol: psi must be in [0, 1]");
  return std::sqrt(psi * p_u) * q;
}

std::complex<double> draw_estimate(double beta, double p_u, double sigma_z2, Rng& rng) {
  return rng.cnormal(estimate_variance(beta, p_u, sigma_z2));
}

}  // namespace cellfree
