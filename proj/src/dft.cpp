#include "dft.hpp"

#include <numbers>

namespace gapforce::detail {

namespace {

std::vector<std::complex<double>> twiddles(std::size_t n, double sign) {
    std::vector<std::complex<double>> w(n);
    const double step = sign * 2.0 * std::numbers::pi / static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j) {
        w[j] = std::polar(1.0, step * static_cast<double>(j));
    }
    return w;
}

template <typename T>
std::vector<std::complex<double>> dft_impl(const std::vector<T>& x, double sign) {
    const std::size_t n = x.size();
    std::vector<std::complex<double>> out(n);
    if (n == 0) return out;
    const std::vector<std::complex<double>> w = twiddles(n, sign);
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            acc += x[j] * w[(k * j) % n];
        }
        out[k] = acc;
    }
    return out;
}

}  // namespace

std::vector<std::complex<double>> dft_forward(const std::vector<std::complex<double>>& x) {
    return dft_impl(x, -1.0);
}

std::vector<std::complex<double>> dft_backward(const std::vector<std::complex<double>>& x) {
    return dft_impl(x, 1.0);
}

std::vector<std::complex<double>> dft_forward_real(const std::vector<double>& x) {
    return dft_impl(x, -1.0);
}

std::vector<std::complex<double>> dft_backward_real(const std::vector<double>& x) {
    return dft_impl(x, 1.0);
}

}  // namespace gapforce::detail
