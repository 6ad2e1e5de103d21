#pragma once

#include <complex>
#include <span>
#include <vector>

namespace bloodflow::detail {

/// Half spectrum (n/2 + 1 bins) of `signal` zero-padded to length n.
std::vector<std::complex<double>> real_fft(std::span<const double> signal, std::size_t n);

/// Inverse of real_fft for a length-n signal, scaled so that
/// inverse_real_fft(real_fft(x, n), n) == x.
std::vector<double> inverse_real_fft(std::span<const std::complex<double>> spectrum, std::size_t n);

}  // namespace bloodflow::detail
