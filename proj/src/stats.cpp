// SPDX-License-Identifier: Apache-2.0
#include "cellfree/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cellfree {

EmpiricalCdf::EmpiricalCdf(std::vector<double> samples) : sorted_(std::move(samples)) {
  if (sorted_.empty()) throw std::invalid_argument("EmpiricalCdf: empty sample");
  std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCdf::operator()(double x) const {
  auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double EmpiricalCdf::percentile(double p) const {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("percentile: p must be in (0, 1)");
  if (sorted_.size() == 1) return sorted_.front();
  double h = p * static_cast<double>(sorted_.size() - 1);
  auto lo = static_cast<std::size_t>(std::floor(h));
  double frac = h - static_cast<double>(lo);
  if (lo + 1 >= sorted_.size()) return sorted_.back();
  return sorted_[lo] + frac * (sorted_[lo + 1] - sorted_[lo]);
}

EmpiricalCdf build_cdf(std::vector<double> samples) {
  return EmpiricalCdf(std::move(samples));
}

double percentile(const EmpiricalCdf& cdf, double p) { return cdf.percentile(p); }

double mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double sum = 0.0;
  double comp = 0.0;
  for (double x : v) {
    double y = x - comp;
    double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum / static_cast<double>(v.size());
}

}  // namespace cellfree
