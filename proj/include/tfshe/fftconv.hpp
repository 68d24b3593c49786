#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace tfshe {

// Linear convolution of real sequences through FFTW (power-of-two transforms,
// plans cached per size). out[k] = sum_j a[j] b[k - j], length |a| + |b| - 1.
void fft_convolve(std::span<const double> a, std::span<const double> b, std::vector<double>& out);

} // namespace tfshe
