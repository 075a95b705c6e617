// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <vector>

namespace cellfree {

// Right-continuous empirical CDF over a sample.
class EmpiricalCdf {
 public:
  explicit EmpiricalCdf(std::vector<double> samples);

  // F(x) = fraction of samples <= x.
  double operator()(double x) const;

  // Linearly interpolated quantile (the R-7 / numpy-default convention):
  // h = (n-1) p, value = s[floor(h)] + frac(h) * (s[floor(h)+1] - s[floor(h)]).
  double percentile(double p) const;

  std::size_t size() const { return sorted_.size(); }
  double min() const { return sorted_.front(); }
  double max() const { return sorted_.back(); }
  const std::vector<double>& sorted_samples() const { return sorted_; }

 private:
  std::vector<double> sorted_;
};

EmpiricalCdf build_cdf(std::vector<double> samples);
double percentile(const EmpiricalCdf& cdf, double p);

double mean(const std::vector<double>& v);

}  // namespace cellfree
