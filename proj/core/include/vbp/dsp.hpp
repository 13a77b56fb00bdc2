#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace vbp::dsp {

std::size_t next_pow2(std::size_t n);

// In-place radix-2 FFT; data.size() must be a power of two.
void fft(std::vector<std::complex<double>>& data);

std::vector<double> hann_window(std::size_t n);
std::vector<double> hamming_window(std::size_t n);

// One-sided power spectrum (bins 0..fft_size/2) of the samples zero-padded
// to fft_size. Any window is applied by the caller beforehand.
std::vector<double> power_spectrum(std::span<const double> samples, std::size_t fft_size);

// r[tau] = sum_n x[n] * x[n + tau] for tau = 0..max_lag (max_lag < len).
std::vector<double> autocorrelation(std::span<const double> x, std::size_t max_lag);

struct LpcModel {
    std::vector<double> coeffs;  // [1, a1, ..., ap]; A(z) = 1 + sum a_k z^-k
    double gain = 0.0;           // sqrt of the final residual energy
};

// Autocorrelation-method linear prediction via Levinson-Durbin recursion.
// Returns an all-pass model (gain 0) for silent input.
LpcModel lpc(std::span<const double> samples, std::size_t order);

// Roots of the monic polynomial z^p + c[1] z^(p-1) + ... + c[p], where
// c = monic_coeffs and c[0] == 1. Durand-Kerner simultaneous iteration.
std::vector<std::complex<double>> polynomial_roots(std::span<const double> monic_coeffs);

} // namespace vbp::dsp
