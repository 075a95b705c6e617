// SPDX-License-Identifier: Apache-2.0
#include "cellfree/ofdm.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cellfree {

namespace {

std::size_t smallest_factor(std::size_t n) {
  if (n % 2 == 0) return 2;
  for (std::size_t f = 3; f * f <= n; f += 2)
    if (n % f == 0) return f;
  return n;
}

// Recursive mixed-radix transform of the sequence x[offset + i*stride],
// i = 0..n-1, with kernel exp(sign * 2*pi*j*k*i/n).
void transform(const std::complex<double>* x, std::size_t offset, std::size_t stride,
               std::size_t n, double sign, std::complex<double>* out) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  if (n == 1) {
    out[0] = x[offset];
    return;
  }
  std::size_t p = smallest_factor(n);
  if (p == n) {
    // prime length: direct evaluation
    for (std::size_t k = 0; k < n; ++k) {
      std::complex<double> acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double ang = sign * kTwoPi * static_cast<double>((k * i) % n) / static_cast<double>(n);
        acc += x[offset + i * stride] * std::complex<double>(std::cos(ang), std::sin(ang));
      }
      out[k] = acc;
    }
    return;
  }
  const std::size_t m = n / p;
  // p interleaved subtransforms of length m
  std::vector<std::complex<double>> sub(n);
  for (std::size_t j = 0; j < p; ++j)
    transform(x, offset + j * stride, stride * p, m, sign, sub.data() + j * m);
  // combine: X[k] = sum_j w^(j*k) * S_j[k mod m]
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
      double ang = sign * kTwoPi * static_cast<double>((j * k) % n) / static_cast<double>(n);
      acc += sub[j * m + k % m] * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    out[k] = acc;
  }
}

}  // namespace

cvec dft(const cvec& x) {
  if (x.empty()) throw std::invalid_argument("dft: empty input");
  cvec out(x.size());
  transform(x.data(), 0, 1, x.size(), +1.0, out.data());
  return out;
}

cvec idft(const cvec& x) {
  if (x.empty()) throw std::invalid_argument("idft: empty input");
  cvec out(x.size());
  transform(x.data(), 0, 1, x.size(), -1.0, out.data());
  double inv = 1.0 / static_cast<double>(x.size());
  for (auto& v : out) v *= inv;
  return out;
}

cvec cyclic_convolve(const cvec& g, const cvec& x) {
  if (g.size() != x.size())
    throw std::invalid_argument("cyclic_convolve: length mismatch");
  const std::size_t n = g.size();
  cvec y(n, 0.0);
  for (std::size_t l = 0; l < n; ++l) {
    if (g[l] == std::complex<double>(0.0)) continue;
    for (std::size_t k = 0; k < n; ++k) {
      y[(k + l) % n] += g[l] * x[k];
    }
  }
  return y;
}

cvec linear_convolve(const cvec& a, const cvec& b) {
  if (a.empty() || b.empty())
    throw std::invalid_argument("linear_convolve: empty input");
  cvec y(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == std::complex<double>(0.0)) continue;
    for (std::size_t j = 0; j < b.size(); ++j) y[i + j] += a[i] * b[j];
  }
  return y;
}

cvec add_cp(const cvec& x, std::size_t l_cp) {
  if (l_cp == 0 || l_cp >= x.size())
    throw std::invalid_argument("add_cp: need 0 < L_cp < N");
  cvec out;
  out.reserve(x.size() + l_cp);
  out.insert(out.end(), x.end() - static_cast<std::ptrdiff_t>(l_cp), x.end());
  out.insert(out.end(), x.begin(), x.end());
  return out;
}

cvec remove_cp(const cvec& y, std::size_t l_cp, std::size_t n) {
  if (n == 0) {
    if (y.size() <= l_cp) throw std::invalid_argument("remove_cp: stream shorter than L_cp");
    n = y.size() - l_cp;
  }
  if (y.size() < l_cp + n)
    throw std::invalid_argument("remove_cp: stream shorter than L_cp + N");
  return cvec(y.begin() + static_cast<std::ptrdiff_t>(l_cp),
              y.begin() + static_cast<std::ptrdiff_t>(l_cp + n));
}

}  // namespace cellfree
