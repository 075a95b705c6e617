// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace cellfree {

using cvec = std::vector<std::complex<double>>;

// DFT convention used throughout: F[n,n'] = exp(+2*pi*j*n*n'/N),
// unnormalized, with the inverse F^-1 = (1/N) F*. A mixed-radix
// Cooley-Tukey transform; prime lengths fall back to the direct sum.
cvec dft(const cvec& x);
cvec idft(const cvec& x);

// y_n = sum_l g_l x_{(n-l) mod N}; vectors must have equal length.
cvec cyclic_convolve(const cvec& g, const cvec& x);

// Full linear convolution, output length a.size() + b.size() - 1.
cvec linear_convolve(const cvec& a, const cvec& b);

// Prepend the last l_cp samples: [x_{N-Lcp..N-1}, x_0..x_{N-1}].
// Requires 0 < l_cp < N.
cvec add_cp(const cvec& x, std::size_t l_cp);
// Drop the first l_cp samples and keep the next n (or all remaining when
// n == 0). Accepts streams longer than l_cp + n, e.g. convolution tails.
cvec remove_cp(const cvec& y, std::size_t l_cp, std::size_t n = 0);

}  // namespace cellfree
