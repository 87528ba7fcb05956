// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sbench Authors

#include "sbench/fft.hpp"

#include <algorithm>
#include <mutex>
#include <stdexcept>

#include <fftw3.h>

namespace sbench {

namespace {

// FFTW's planner is not re-entrant; plan creation and destruction share a lock.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

std::vector<std::complex<double>> real_fft(std::span<const double> x, std::size_t nfft) {
  if (nfft == 0) throw std::invalid_argument("FFT length must be positive");
  const std::size_t bins = nfft / 2 + 1;
  double* in = fftw_alloc_real(nfft);
  fftw_complex* out = fftw_alloc_complex(bins);
  fftw_plan plan = nullptr;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(nfft), in, out, FFTW_ESTIMATE);
  }
  const std::size_t used = std::min(nfft, x.size());
  std::copy_n(x.begin(), used, in);
  std::fill(in + used, in + nfft, 0.0);
  fftw_execute(plan);

  std::vector<std::complex<double>> result(bins);
  for (std::size_t k = 0; k < bins; ++k) result[k] = {out[k][0], out[k][1]};
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(in);
  fftw_free(out);
  return result;
}

std::vector<double> power_bins(std::span<const double> x, std::size_t nfft) {
  const auto spectrum = real_fft(x, nfft);
  std::vector<double> power(spectrum.size());
  std::transform(spectrum.begin(), spectrum.end(), power.begin(),
                 [](const std::complex<double>& c) { return std::norm(c); });
  return power;
}

}  // namespace sbench
