#include "vbp/dsp.hpp"

#include "vbp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace vbp::dsp {

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

void fft(std::vector<std::complex<double>>& data) {
    const std::size_t n = data.size();
    if (n == 0 || (n & (n - 1)) != 0) {
        throw InvalidWindow("fft size must be a power of two, got " + std::to_string(n));
    }
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(data[i], data[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
        const std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t j = 0; j < len / 2; ++j) {
                const auto u = data[i + j];
                const auto v = data[i + j + len / 2] * w;
                data[i + j] = u + v;
                data[i + j + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

std::vector<double> hann_window(std::size_t n) {
    std::vector<double> w(n, 1.0);
    if (n < 2) return w;
    for (std::size_t i = 0; i < n; ++i) {
        w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                    static_cast<double>(n - 1));
    }
    return w;
}

std::vector<double> hamming_window(std::size_t n) {
    std::vector<double> w(n, 1.0);
    if (n < 2) return w;
    for (std::size_t i = 0; i < n; ++i) {
        w[i] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                      static_cast<double>(n - 1));
    }
    return w;
}

std::vector<double> power_spectrum(std::span<const double> samples, std::size_t fft_size) {
    if (fft_size == 0 || (fft_size & (fft_size - 1)) != 0 || samples.size() > fft_size) {
        throw InvalidWindow("power_spectrum needs a power-of-two size >= sample count");
    }
    std::vector<std::complex<double>> buf(fft_size, {0.0, 0.0});
    for (std::size_t i = 0; i < samples.size(); ++i) buf[i] = {samples[i], 0.0};
    fft(buf);
    std::vector<double> power(fft_size / 2 + 1);
    for (std::size_t k = 0; k < power.size(); ++k) power[k] = std::norm(buf[k]);
    return power;
}

std::vector<double> autocorrelation(std::span<const double> x, std::size_t max_lag) {
    if (x.empty() || max_lag >= x.size()) {
        throw InvalidWindow("autocorrelation max_lag must be < sample count");
    }
    std::vector<double> r(max_lag + 1, 0.0);
    for (std::size_t tau = 0; tau <= max_lag; ++tau) {
        double acc = 0.0;
        for (std::size_t n = 0; n + tau < x.size(); ++n) acc += x[n] * x[n + tau];
        r[tau] = acc;
    }
    return r;
}

LpcModel lpc(std::span<const double> samples, std::size_t order) {
    if (order == 0 || samples.size() <= order) {
        throw InvalidWindow("lpc order must be >= 1 and < sample count");
    }
    const std::vector<double> r = autocorrelation(samples, order);

    LpcModel model;
    model.coeffs.assign(order + 1, 0.0);
    model.coeffs[0] = 1.0;
    double err = r[0];
    if (err <= 0.0) return model;  // silent frame: A(z) = 1, gain 0

    std::vector<double> prev(order + 1, 0.0);
    for (std::size_t i = 1; i <= order; ++i) {
        double acc = r[i];
        for (std::size_t j = 1; j < i; ++j) acc += model.coeffs[j] * r[i - j];
        const double reflection = -acc / err;

        prev = model.coeffs;
        for (std::size_t j = 1; j <= i; ++j) {
            model.coeffs[j] = prev[j] + reflection * prev[i - j];
        }
        err *= 1.0 - reflection * reflection;
        if (err <= 0.0) {
            err = 0.0;
            break;
        }
    }
    model.gain = std::sqrt(err);
    return model;
}

namespace {

std::complex<double> horner(std::span<const double> coeffs, std::complex<double> z) {
    // coeffs are descending powers: c[0] z^p + ... + c[p]
    std::complex<double> acc(coeffs[0], 0.0);
    for (std::size_t i = 1; i < coeffs.size(); ++i) acc = acc * z + coeffs[i];
    return acc;
}

} // namespace

std::vector<std::complex<double>> polynomial_roots(std::span<const double> monic_coeffs) {
    if (monic_coeffs.size() < 2 || monic_coeffs[0] != 1.0) {
        throw InvalidConfig("polynomial_roots expects a monic polynomial of degree >= 1");
    }
    const std::size_t degree = monic_coeffs.size() - 1;

    // Start from points spread on a non-unit circle (the classic choice);
    // being neither real nor symmetric avoids stalling on real-coefficient
    // polynomials.
    std::vector<std::complex<double>> roots(degree);
    const std::complex<double> base(0.4, 0.9);
    std::complex<double> p(1.0, 0.0);
    for (std::size_t i = 0; i < degree; ++i) {
        p *= base;
        roots[i] = p;
    }

    constexpr int kMaxIterations = 500;
    constexpr double kTolerance = 1e-13;
    for (int iter = 0; iter < kMaxIterations; ++iter) {
        double max_step = 0.0;
        for (std::size_t i = 0; i < degree; ++i) {
            std::complex<double> denom(1.0, 0.0);
            for (std::size_t j = 0; j < degree; ++j) {
                if (j != i) denom *= roots[i] - roots[j];
            }
            if (std::abs(denom) < 1e-300) {
                // Coincident iterates: nudge and carry on.
                roots[i] += std::complex<double>(1e-8, 1e-8);
                max_step = 1.0;
                continue;
            }
            const std::complex<double> step = horner(monic_coeffs, roots[i]) / denom;
            roots[i] -= step;
            max_step = std::max(max_step, std::abs(step));
        }
        if (max_step < kTolerance) break;
    }
    return roots;
}

} // namespace vbp::dsp
