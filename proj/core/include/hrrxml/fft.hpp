#pragma once

#include <complex>
#include <span>
#include <vector>

namespace hrrxml::fft {

using Spectrum = std::vector<std::complex<double>>;

// Unnormalized forward DFT of a real signal (full complex spectrum, any length).
Spectrum forward(std::span<const double> signal);
Spectrum forward(std::span<const std::complex<double>> signal);

// Real part of the inverse DFT scaled by 1/n. Throws NumericError if the
// Parseval bound on the discarded imaginary part reaches 1e-8 * (1 + max |real|),
// i.e. the spectrum was not conjugate-symmetric.
std::vector<double> inverse_real(std::span<const std::complex<double>> spectrum);

// Inverse DFT scaled by 1/n, complex result.
Spectrum inverse(std::span<const std::complex<double>> spectrum);

}  // namespace hrrxml::fft
