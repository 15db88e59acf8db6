#pragma once

#include <complex>
#include <vector>

namespace hurstci::detail {

// In-place DFT with exponent sign -1 (forward) or +1 (inverse, unnormalized).
// Radix-2 in place for power-of-two sizes, Bluestein otherwise.
void fft(std::vector<std::complex<double>>& data, bool inverse);

}  // namespace hurstci::detail
