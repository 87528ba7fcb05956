// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sbench Authors

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace sbench {

// Forward real-to-complex DFT of `x` zero-padded (or truncated) to `nfft`
// points. Returns bins 0..nfft/2. Safe to call from several threads.
std::vector<std::complex<double>> real_fft(std::span<const double> x, std::size_t nfft);

// |X_k|^2 for k = 0..nfft/2.
std::vector<double> power_bins(std::span<const double> x, std::size_t nfft);

std::size_t next_pow2(std::size_t n);

}  // namespace sbench
