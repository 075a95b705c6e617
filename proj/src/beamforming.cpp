// SPDX-License-Identifier: Apache-2.0
#include "cellfree/beamforming.hpp"

#include <cmath>
#include <stdexcept>

namespace cellfree {

Matrix<double> full_power_eta(const Matrix<double>& alpha) {
  Matrix<double> eta(alpha.rows(), alpha.cols());
  for (std::size_t m = 0; m < alpha.rows(); ++m) {
    double sum = 0.0;
    for (std::size_t k = 0; k < alpha.cols(); ++k) {
      if (alpha(m, k) <= 0.0)
        throw std::invalid_argument("full_power_eta: alpha must be positive");
      sum += alpha(m, k);
    }
    double v = 1.0 / sum;
    for (std::size_t k = 0; k < alpha.cols(); ++k) eta(m, k) = v;
  }
  return eta;
}

double sinr_single(const Matrix<double>& eta, const Matrix<double>& alpha,
                   const Matrix<double>& beta, std::size_t k, double p_d,
                   double sigma_z2) {
  const std::size_t m_rows = alpha.rows();
  const std::size_t users = alpha.cols();
  double coherent = 0.0;
  double leak = 0.0;
  for (std::size_t m = 0; m < m_rows; ++m) {
    coherent += std::sqrt(eta(m, k)) * alpha(m, k);
    double load = 0.0;
    for (std::size_t kp = 0; kp < users; ++kp) load += eta(m, kp) * alpha(m, kp);
    leak += beta(m, k) * load;
  }
  return p_d * coherent * coherent / (sigma_z2 + p_d * leak);
}

double sinr_multi(const Matrix<double>& eta, const Matrix<double>& alpha,
                  const Matrix<double>& beta, std::size_t k, std::size_t n_t,
                  double p_d, double sigma_z2) {
  const std::size_t n_ap = alpha.rows();
  const std::size_t users = alpha.cols();
  const auto nt = static_cast<double>(n_t);
  double coherent = 0.0;
  double leak = 0.0;
  for (std::size_t q = 0; q < n_ap; ++q) {
    coherent += std::sqrt(eta(q, k)) * alpha(q, k);
    double load = 0.0;
    for (std::size_t kp = 0; kp < users; ++kp) load += eta(q, kp) * alpha(q, kp);
    leak += beta(q, k) * load;
  }
  return p_d * (nt * nt) * coherent * coherent / (sigma_z2 + p_d * nt * leak);
}

std::vector<std::complex<double>> beamform_transmit(
    const Matrix<std::complex<double>>& g_hat, const Matrix<double>& eta, double p_d,
    std::span<const std::complex<double>> symbols) {
  if (g_hat.cols() != symbols.size() || eta.rows() != g_hat.rows() ||
      eta.cols() != g_hat.cols())
    throw std::invalid_argument("beamform_transmit: dimension mismatch");
  const double amp = std::sqrt(p_d);
  std::vector<std::complex<double>> x(g_hat.rows(), 0.0);
  for (std::size_t m = 0; m < g_hat.rows(); ++m) {
    std::complex<double> acc = 0.0;
    for (std::size_t k = 0; k < g_hat.cols(); ++k)
      acc += std::sqrt(eta(m, k)) * std::conj(g_hat(m, k)) * symbols[k];
    x[m] = amp * acc;
  }
  return x;
}

RuTerms split_received_ru(std::complex<double> y,
                          const Matrix<std::complex<double>>& g_hat,
                          std::span<const std::complex<double>> xi,
                          const Matrix<double>& eta,
                          std::span<const std::complex<double>> symbols,
                          std::size_t k, double p_d) {
  const std::size_t m_rows = g_hat.rows();
  const std::size_t users = g_hat.cols();
  const double amp = std::sqrt(p_d);

  RuTerms t{};
  std::complex<double> desired = 0.0;
  std::complex<double> mui = 0.0;
  std::complex<double> err = 0.0;
  for (std::size_t m = 0; m < m_rows; ++m) {
    // per-antenna precoded aggregate sum_k' sqrt(eta) conj(g_hat) s_k'
    std::complex<double> precoded = 0.0;
    for (std::size_t kp = 0; kp < users; ++kp)
      precoded += std::sqrt(eta(m, kp)) * std::conj(g_hat(m, kp)) * symbols[kp];
    std::complex<double> own =
        std::sqrt(eta(m, k)) * std::conj(g_hat(m, k)) * symbols[k];
    desired += g_hat(m, k) * own;
    mui += g_hat(m, k) * (precoded - own);
    err += xi[m] * precoded;
  }
  t.desired = amp * desired;
  t.mui = amp * mui;
  t.est_error = amp * err;
  t.noise = y - t.desired - t.mui - t.est_error;
  return t;
}

void DecompositionAccumulator::add(const RuTerms& t, std::complex<double> s_k) {
  coherent_sum_ += t.desired / s_k;
  desired2_ += std::norm(t.desired);
  mui2_ += std::norm(t.mui);
  err2_ += std::norm(t.est_error);
  noise2_ += std::norm(t.noise);
  ++n_;
}

PowerDecomposition DecompositionAccumulator::finalize() const {
  PowerDecomposition p;
  if (n_ == 0) return p;
  const auto n = static_cast<double>(n_);
  p.desired_coherent = std::norm(coherent_sum_ / n);
  p.desired_total = desired2_ / n;
  p.mui = mui2_ / n;
  p.est_error = err2_ / n;
  p.noise = noise2_ / n;
  p.samples = n_;
  return p;
}

}  // namespace cellfree
