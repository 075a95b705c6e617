// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cellfree/beamforming.hpp"
#include "cellfree/rng.hpp"
#include "cellfree/training.hpp"

#include <cmath>
#include <complex>

using namespace cellfree;
using cd = std::complex<double>;

namespace {

Matrix<double> random_positive(std::size_t rows, std::size_t cols, Rng& rng,
                               double lo = 1e-13, double hi = 1e-10) {
  Matrix<double> m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      m(r, c) = lo * std::pow(hi / lo, rng.uniform());
  return m;
}

}  // namespace

TEST_CASE("full-power coefficients") {
  SUBCASE("reciprocal of the alpha row sum, may exceed 1") {
    Matrix<double> alpha(1, 1, 0.5);
    auto eta = full_power_eta(alpha);
    CHECK(eta(0, 0) == doctest::Approx(2.0));
  }
  SUBCASE("uniform row") {
    Matrix<double> alpha(1, 2);
    alpha(0, 0) = 0.5;
    alpha(0, 1) = 0.5;
    auto eta = full_power_eta(alpha);
    CHECK(eta(0, 0) == doctest::Approx(1.0));
    CHECK(eta(0, 1) == doctest::Approx(1.0));
  }
  SUBCASE("sum_k eta alpha = 1 per antenna, any alpha") {
    Rng rng(1);
    auto alpha = random_positive(16, 7, rng, 1e-3, 10.0);
    auto eta = full_power_eta(alpha);
    for (std::size_t m = 0; m < 16; ++m) {
      double s = 0.0;
      for (std::size_t k = 0; k < 7; ++k) {
        s += eta(m, k) * alpha(m, k);
        CHECK(eta(m, k) == eta(m, 0));  // identical across users
      }
      CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
  SUBCASE("rejects non-positive alpha") {
    Matrix<double> alpha(1, 1, 0.0);
    CHECK_THROWS(full_power_eta(alpha));
  }
}

TEST_CASE("closed-form SINR, single-antenna APs") {
  SUBCASE("scalar substitution") {
    // M=1, K_r=1: p_d=1, beta=1, p_u=1, sigma2=1 -> alpha=1/2, eta=1/alpha=2
    // gamma = p_d eta alpha^2 / (sigma2 + p_d beta eta alpha) = 0.5/2 = 0.25
    Matrix<double> beta(1, 1, 1.0);
    Matrix<double> alpha(1, 1, estimate_variance(1.0, 1.0, 1.0));
    auto eta = full_power_eta(alpha);
    CHECK(sinr_single(eta, alpha, beta, 0, 1.0, 1.0) == doctest::Approx(0.25).epsilon(1e-12));
  }
  SUBCASE("interference-limited ceiling as p_d grows") {
    Rng rng(2);
    auto beta = random_positive(8, 2, rng);
    Matrix<double> alpha(8, 2);
    for (std::size_t m = 0; m < 8; ++m)
      for (std::size_t k = 0; k < 2; ++k)
        alpha(m, k) = estimate_variance(beta(m, k), 0.1, 1e-15);
    auto eta = full_power_eta(alpha);

    double coh = 0.0, denom = 0.0;
    for (std::size_t m = 0; m < 8; ++m) {
      coh += std::sqrt(eta(m, 0)) * alpha(m, 0);
      denom += beta(m, 0);  // sum_k eta alpha = 1 per antenna
    }
    double ceiling = coh * coh / denom;
    double g = sinr_single(eta, alpha, beta, 0, 1e9, 1e-15);
    CHECK(g == doctest::Approx(ceiling).epsilon(1e-6));
  }
  SUBCASE("adding a user strictly lowers incumbents") {
    Rng rng(3);
    auto beta3 = random_positive(16, 3, rng);
    Matrix<double> beta2(16, 2);
    Matrix<double> alpha3(16, 3), alpha2(16, 2);
    for (std::size_t m = 0; m < 16; ++m) {
      for (std::size_t k = 0; k < 3; ++k)
        alpha3(m, k) = estimate_variance(beta3(m, k), 0.1, 1e-16);
      for (std::size_t k = 0; k < 2; ++k) {
        beta2(m, k) = beta3(m, k);
        alpha2(m, k) = alpha3(m, k);
      }
    }
    auto eta2 = full_power_eta(alpha2);
    auto eta3 = full_power_eta(alpha3);
    for (std::size_t k = 0; k < 2; ++k) {
      double before = sinr_single(eta2, alpha2, beta2, k, 0.2, 1e-16);
      double after = sinr_single(eta3, alpha3, beta3, k, 0.2, 1e-16);
      CHECK(after < before);
    }
  }
}

TEST_CASE("multi-antenna SINR reductions") {
  Rng rng(4);
  SUBCASE("N_t=1 equals sinr_single bitwise") {
    for (int inst = 0; inst < 1000; ++inst) {
      auto beta = random_positive(6, 3, rng);
      Matrix<double> alpha(6, 3);
      for (std::size_t m = 0; m < 6; ++m)
        for (std::size_t k = 0; k < 3; ++k)
          alpha(m, k) = estimate_variance(beta(m, k), 0.1, 4.7e-16);
      auto eta = full_power_eta(alpha);
      for (std::size_t k = 0; k < 3; ++k) {
        double a = sinr_single(eta, alpha, beta, k, 0.2, 4.7e-16);
        double b = sinr_multi(eta, alpha, beta, k, 1, 0.2, 4.7e-16);
        CHECK(a == b);  // exact bit equality
      }
    }
  }
  SUBCASE("block-replicated inputs agree with the per-AP form") {
    const std::size_t n_ap = 5, n_t = 4, users = 3;
    for (int inst = 0; inst < 50; ++inst) {
      auto beta_ap = random_positive(n_ap, users, rng);
      Matrix<double> alpha_ap(n_ap, users);
      for (std::size_t q = 0; q < n_ap; ++q)
        for (std::size_t k = 0; k < users; ++k)
          alpha_ap(q, k) = estimate_variance(beta_ap(q, k), 0.1, 4.7e-16);
      auto eta_ap = full_power_eta(alpha_ap);

      Matrix<double> beta_full(n_ap * n_t, users), alpha_full(n_ap * n_t, users),
          eta_full(n_ap * n_t, users);
      for (std::size_t q = 0; q < n_ap; ++q)
        for (std::size_t a = 0; a < n_t; ++a)
          for (std::size_t k = 0; k < users; ++k) {
            beta_full(q * n_t + a, k) = beta_ap(q, k);
            alpha_full(q * n_t + a, k) = alpha_ap(q, k);
            eta_full(q * n_t + a, k) = eta_ap(q, k);
          }
      for (std::size_t k = 0; k < users; ++k) {
        double multi = sinr_multi(eta_ap, alpha_ap, beta_ap, k, n_t, 0.2, 4.7e-16);
        double single = sinr_single(eta_full, alpha_full, beta_full, k, 0.2, 4.7e-16);
        CHECK(multi == doctest::Approx(single).epsilon(1e-12));
      }
    }
  }
  SUBCASE("array gain: numerator N_t^2 vs denominator N_t") {
    Matrix<double> beta(1, 1, 1.0);
    Matrix<double> alpha(1, 1, 0.5);
    Matrix<double> eta(1, 1, 2.0);
    double sigma2 = 0.0;  // isolate the scaling
    double g1 = sinr_multi(eta, alpha, beta, 0, 1, 1.0, sigma2);
    double g4 = sinr_multi(eta, alpha, beta, 0, 4, 1.0, sigma2);
    CHECK(g4 == doctest::Approx(4.0 * g1).epsilon(1e-12));
  }
}

TEST_CASE("conjugate beamforming transmit") {
  SUBCASE("single user, real estimate: zero phase") {
    Matrix<cd> g_hat(3, 1);
    g_hat(0, 0) = cd(0.5);
    g_hat(1, 0) = cd(1.5);
    g_hat(2, 0) = cd(0.3);
    Matrix<double> eta(3, 1, 1.0);
    std::vector<cd> s = {cd(1.0)};
    auto x = beamform_transmit(g_hat, eta, 2.0, s);
    for (auto& v : x) {
      CHECK(v.imag() == doctest::Approx(0.0));
      CHECK(v.real() > 0.0);
    }
  }
  SUBCASE("zero power control gives silence") {
    Matrix<cd> g_hat(2, 2, cd(1.0, 1.0));
    Matrix<double> eta(2, 2, 0.0);
    std::vector<cd> s = {cd(1.0), cd(1.0)};
    auto x = beamform_transmit(g_hat, eta, 1.0, s);
    for (auto& v : x) CHECK(std::abs(v) == 0.0);
  }
  SUBCASE("mean transmit power is p_d under full-power control") {
    Rng rng(6);
    const double p_u = 0.5, sigma2 = 0.3, p_d = 0.7;
    Matrix<double> beta(2, 3);
    for (std::size_t m = 0; m < 2; ++m)
      for (std::size_t k = 0; k < 3; ++k) beta(m, k) = 0.5 + rng.uniform();
    Matrix<double> alpha(2, 3);
    for (std::size_t m = 0; m < 2; ++m)
      for (std::size_t k = 0; k < 3; ++k)
        alpha(m, k) = estimate_variance(beta(m, k), p_u, sigma2);
    auto eta = full_power_eta(alpha);

    const int trials = 100000;
    std::vector<double> acc(2, 0.0);
    Matrix<cd> g_hat(2, 3);
    std::vector<cd> s(3);
    for (int t = 0; t < trials; ++t) {
      for (std::size_t m = 0; m < 2; ++m)
        for (std::size_t k = 0; k < 3; ++k)
          g_hat(m, k) = draw_estimate(beta(m, k), p_u, sigma2, rng);
      for (auto& v : s) v = rng.qpsk();
      auto x = beamform_transmit(g_hat, eta, p_d, s);
      for (std::size_t m = 0; m < 2; ++m) acc[m] += std::norm(x[m]);
    }
    for (std::size_t m = 0; m < 2; ++m)
      CHECK(acc[m] / trials == doctest::Approx(p_d).epsilon(0.02));
  }
}

TEST_CASE("received-term split bookkeeping") {
  Rng rng(7);
  const std::size_t m_ant = 4, users = 3;
  Matrix<cd> g_hat(m_ant, users);
  Matrix<cd> g_true(m_ant, users);
  Matrix<double> eta(m_ant, users, 0.4);
  for (std::size_t m = 0; m < m_ant; ++m)
    for (std::size_t k = 0; k < users; ++k) {
      g_hat(m, k) = rng.cnormal(1.0);
      g_true(m, k) = g_hat(m, k) + rng.cnormal(0.25);
    }
  std::vector<cd> s(users);
  for (auto& v : s) v = rng.qpsk();
  const double p_d = 1.3;

  // received sample built directly from the model
  const std::size_t k = 1;
  cd y = 0.0;
  for (std::size_t m = 0; m < m_ant; ++m) {
    cd precoded = 0.0;
    for (std::size_t kp = 0; kp < users; ++kp)
      precoded += std::sqrt(eta(m, kp)) * std::conj(g_hat(m, kp)) * s[kp];
    y += g_true(m, k) * precoded;
  }
  y *= std::sqrt(p_d);
  cd z(0.05, -0.02);
  y += z;

  std::vector<cd> xi(m_ant);
  for (std::size_t m = 0; m < m_ant; ++m) xi[m] = g_true(m, k) - g_hat(m, k);
  auto terms = split_received_ru(y, g_hat, xi, eta, s, k, p_d);
  // the three modeled terms plus the remainder reconstruct y exactly
  CHECK(std::abs(terms.desired + terms.mui + terms.est_error + terms.noise - y) < 1e-12);
  // remainder equals the injected noise
  CHECK(std::abs(terms.noise - z) < 1e-12);

  SUBCASE("perfect csi: zero estimation error term") {
    std::vector<cd> xi0(m_ant, cd(0.0));
    auto t = split_received_ru(y, g_hat, xi0, eta, s, k, p_d);
    CHECK(std::abs(t.est_error) == 0.0);
  }
  SUBCASE("single user: zero MUI term") {
    Matrix<cd> g1(m_ant, 1);
    Matrix<double> eta1(m_ant, 1, 0.4);
    std::vector<cd> s1 = {s[0]};
    std::vector<cd> xi1(m_ant, cd(0.0));
    for (std::size_t m = 0; m < m_ant; ++m) g1(m, 0) = g_hat(m, 0);
    auto t = split_received_ru(cd(0.0), g1, xi1, eta1, s1, 0, p_d);
    CHECK(std::abs(t.mui) == 0.0);
  }
}

TEST_CASE("decomposition accumulator moments match the closed form") {
  // frequency-domain Monte Carlo of the received-signal split:
  // coherent power -> p_d (sum sqrt(eta) alpha)^2,
  // residual -> p_d sum_m beta sum_k' eta alpha
  Rng rng(8);
  const std::size_t m_ant = 8, users = 2;
  const double p_u = 0.5, sigma2 = 0.8, p_d = 1.1;
  Matrix<double> beta(m_ant, users);
  for (std::size_t m = 0; m < m_ant; ++m)
    for (std::size_t k = 0; k < users; ++k) beta(m, k) = 0.4 + rng.uniform();
  Matrix<double> alpha(m_ant, users);
  for (std::size_t m = 0; m < m_ant; ++m)
    for (std::size_t k = 0; k < users; ++k)
      alpha(m, k) = estimate_variance(beta(m, k), p_u, sigma2);
  auto eta = full_power_eta(alpha);

  const std::size_t k = 0;
  DecompositionAccumulator acc;
  Matrix<cd> g_hat(m_ant, users);
  std::vector<cd> xi(m_ant);
  std::vector<cd> s(users);
  const int trials = 200000;
  for (int t = 0; t < trials; ++t) {
    for (std::size_t m = 0; m < m_ant; ++m) {
      for (std::size_t kp = 0; kp < users; ++kp)
        g_hat(m, kp) = draw_estimate(beta(m, kp), p_u, sigma2, rng);
      xi[m] = rng.cnormal(beta(m, k) - estimate_variance(beta(m, k), p_u, sigma2));
    }
    for (auto& v : s) v = rng.qpsk();
    cd y = 0.0;
    for (std::size_t m = 0; m < m_ant; ++m) {
      cd precoded = 0.0;
      for (std::size_t kp = 0; kp < users; ++kp)
        precoded += std::sqrt(eta(m, kp)) * std::conj(g_hat(m, kp)) * s[kp];
      y += (g_hat(m, k) + xi[m]) * precoded;
    }
    y *= std::sqrt(p_d);
    cd z = rng.cnormal(sigma2);
    y += z;
    acc.add(split_received_ru(y, g_hat, xi, eta, s, k, p_d), s[k]);
  }
  auto p = acc.finalize();

  double coh_want = 0.0, leak_want = 0.0;
  for (std::size_t m = 0; m < m_ant; ++m) {
    coh_want += std::sqrt(eta(m, k)) * alpha(m, k);
    double load = 0.0;
    for (std::size_t kp = 0; kp < users; ++kp) load += eta(m, kp) * alpha(m, kp);
    leak_want += beta(m, k) * load;
  }
  coh_want = p_d * coh_want * coh_want;
  leak_want *= p_d;

  CHECK(p.desired_coherent == doctest::Approx(coh_want).epsilon(0.02));
  CHECK(p.residual() == doctest::Approx(leak_want).epsilon(0.02));
  CHECK(p.noise == doctest::Approx(sigma2).epsilon(0.02));
  // the bound never exceeds the measured ratio
  double gamma = sinr_single(eta, alpha, beta, k, p_d, sigma2);
  CHECK(gamma <= p.measured_sinr() * 1.05);
  CHECK(p.hardened_sinr() == doctest::Approx(gamma).epsilon(0.05));
}
