#pragma once

#include "holoflow/types.hpp"

namespace holoflow {

bool is_power_of_two(std::size_t n);

/// Radix-2 decimation-in-time transform, forward convention
/// X_k = sum_j x_j e^{-2 pi i j k / N}, returned in two-sided order:
/// output index i holds frequency index k = i - N/2.
/// N must be a power of two, N >= 2.
std::vector<Complex> fft(const std::vector<Complex>& x);

/// Inverse of fft (two-sided input, 1/N normalized).
std::vector<Complex> ifft(const std::vector<Complex>& x);

}  // namespace holoflow
