#pragma once

#include <complex>
#include <vector>

namespace gapforce::detail {

// Direct O(N^2) transforms. Grid sizes in this pipeline are desk-scale and
// the twiddle lookup keeps trig arguments in [0, 2*pi), so results are
// bit-reproducible for any worker count and accurate to a few ulp per term.

// X[k] = sum_n x[n] * exp(-2*pi*i*k*n/N)
std::vector<std::complex<double>> dft_forward(const std::vector<std::complex<double>>& x);

// X[k] = sum_n x[n] * exp(+2*pi*i*k*n/N)   (unnormalized)
std::vector<std::complex<double>> dft_backward(const std::vector<std::complex<double>>& x);

std::vector<std::complex<double>> dft_forward_real(const std::vector<double>& x);
std::vector<std::complex<double>> dft_backward_real(const std::vector<double>& x);

}  // namespace gapforce::detail
