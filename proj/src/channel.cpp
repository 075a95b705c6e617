// SPDX-License-Identifier: Apache-2.0
#include "cellfree/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cellfree {

namespace {

// Normalized interpolation kernel: sin(pi x)/(pi x), 1 at x = 0. Evaluated
// through the fractional part so it vanishes exactly at nonzero integers
// and on-grid paths map to single taps.
double sinc_norm(double x) {
  if (x == 0.0) return 1.0;
  double r = std::round(x);
  double f = x - r;
  double s = std::sin(std::numbers::pi * f);
  if (static_cast<long long>(r) % 2 != 0) s = -s;
  return s / (std::numbers::pi * x);
}

// kernel(i, l) = sinc(l - delay_i/ts), plus the global energy-normalization
// factor making E[sum_l |h_l|^2] = 1.
struct TapKernel {
  Matrix<double> w;  // paths x taps
  std::vector<double> path_power;
  double scale = 1.0;

  TapKernel(const PowerDelayProfile& pdp, double ts, std::size_t n_taps)
      : w(pdp.size(), n_taps), path_power(pdp.normalized_linear_powers()) {
    double energy = 0.0;
    for (std::size_t i = 0; i < pdp.size(); ++i) {
      double pos = pdp.delays_s[i] / ts;
      double e_i = 0.0;
      for (std::size_t l = 0; l < n_taps; ++l) {
        double v = sinc_norm(static_cast<double>(l) - pos);
        w(i, l) = v;
        e_i += v * v;
      }
      energy += path_power[i] * e_i;
    }
    scale = 1.0 / std::sqrt(energy);
  }

  void draw(double beta, Rng& rng, cvec& out) const {
    out.assign(w.cols(), 0.0);
    double amp = scale * std::sqrt(beta);
    for (std::size_t i = 0; i < w.rows(); ++i) {
      std::complex<double> a = rng.cnormal(path_power[i]) * amp;
      for (std::size_t l = 0; l < w.cols(); ++l) {
        if (w(i, l) != 0.0) out[l] += a * w(i, l);
      }
    }
  }
};

}  // namespace

PowerDelayProfile PowerDelayProfile::etu() {
  PowerDelayProfile p;
  p.delays_s = {0.0, 0.05e-6, 0.12e-6, 0.2e-6, 0.23e-6, 0.5e-6, 1.6e-6, 2.3e-6, 5.0e-6};
  p.powers_db = {-1.0, -1.0, -1.0, 0.0, 0.0, 0.0, -3.0, -5.0, -7.0};
  return p;
}

PowerDelayProfile PowerDelayProfile::from_config(const SimConfig& cfg) {
  if (cfg.pdp_delays_us.empty()) return etu();
  PowerDelayProfile p;
  for (double d : cfg.pdp_delays_us) p.delays_s.push_back(d * 1e-6);
  p.powers_db = cfg.pdp_powers_db;
  p.validate();
  return p;
}

double PowerDelayProfile::max_delay_s() const {
  return delays_s.empty() ? 0.0 : delays_s.back();
}

double PowerDelayProfile::linear_power_sum() const {
  double s = 0.0;
  for (double p : powers_db) s += std::pow(10.0, p / 10.0);
  return s;
}

std::vector<double> PowerDelayProfile::normalized_linear_powers() const {
  std::vector<double> out(powers_db.size());
  double total = linear_power_sum();
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = std::pow(10.0, powers_db[i] / 10.0) / total;
  return out;
}

PowerDelayProfile PowerDelayProfile::snapped_to_grid(double ts) const {
  validate();
  PowerDelayProfile out;
  for (std::size_t i = 0; i < size(); ++i) {
    double d = std::round(delays_s[i] / ts) * ts;
    double p_lin = std::pow(10.0, powers_db[i] / 10.0);
    if (!out.delays_s.empty() && std::abs(out.delays_s.back() - d) < ts * 0.5) {
      // merge paths landing on the same tap
      double merged = std::pow(10.0, out.powers_db.back() / 10.0) + p_lin;
      out.powers_db.back() = 10.0 * std::log10(merged);
    } else {
      out.delays_s.push_back(d);
      out.powers_db.push_back(10.0 * std::log10(p_lin));
    }
  }
  return out;
}

void PowerDelayProfile::validate() const {
  if (delays_s.empty()) throw std::invalid_argument("pdp: no paths");
  if (delays_s.size() != powers_db.size())
    throw std::invalid_argument("pdp: delays/powers length mismatch");
  for (std::size_t i = 0; i < delays_s.size(); ++i) {
    if (delays_s[i] < 0.0) throw std::invalid_argument("pdp: negative delay");
    if (i > 0 && delays_s[i] <= delays_s[i - 1])
      throw std::invalid_argument("pdp: delays must be strictly increasing");
  }
}

std::size_t filter_length(const PowerDelayProfile& pdp, double ts, std::size_t min_taps) {
  double span = pdp.max_delay_s() / ts;
  // guard against quotients landing a few ulps above an integer
  double rounded = std::round(span);
  if (std::abs(span - rounded) < 1e-9 * std::max(1.0, rounded)) span = rounded;
  auto l = static_cast<std::size_t>(std::ceil(span)) + 1;
  return std::max(l, std::max<std::size_t>(min_taps, 1));
}

cvec draw_taps(const PowerDelayProfile& pdp, double beta, double ts, Rng& rng,
               std::size_t min_taps) {
  pdp.validate();
  TapKernel kernel(pdp, ts, filter_length(pdp, ts, min_taps));
  cvec out;
  kernel.draw(beta, rng, out);
  return out;
}

cvec freq_response(const cvec& taps, std::size_t n) {
  if (taps.size() > n)
    throw std::invalid_argument("freq_response: more taps than subcarriers");
  cvec padded(n, 0.0);
  std::copy(taps.begin(), taps.end(), padded.begin());
  return dft(padded);
}

cvec rb_gains(const cvec& freq, std::size_t n_rb, std::size_t rb_width) {
  if (freq.size() != n_rb * rb_width)
    throw std::invalid_argument("rb_gains: N != N_RB * lambda_RB");
  cvec out(n_rb);
  for (std::size_t r = 0; r < n_rb; ++r) out[r] = freq[r * rb_width + rb_width / 2];
  return out;
}

ChannelSet draw_channel_set(const PowerDelayProfile& pdp, const Matrix<double>& beta,
                            std::size_t n_subcarriers, double ts, Rng& rng,
                            std::size_t min_taps) {
  pdp.validate();
  ChannelSet set;
  set.n_antennas = beta.rows();
  set.n_users = beta.cols();
  set.n_subcarriers = n_subcarriers;
  set.n_taps = filter_length(pdp, ts, min_taps);
  TapKernel kernel(pdp, ts, set.n_taps);

  set.taps.resize(set.n_antennas * set.n_users);
  set.freq.resize(set.taps.size());
  for (std::size_t m = 0; m < set.n_antennas; ++m) {
    for (std::size_t k = 0; k < set.n_users; ++k) {
      auto& t = set.taps[m * set.n_users + k];
      kernel.draw(beta(m, k), rng, t);
      set.freq[m * set.n_users + k] = freq_response(t, n_subcarriers);
    }
  }
  return set;
}

}  // namespace cellfree
