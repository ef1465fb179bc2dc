#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

#include "errors.hpp"

namespace motohashi {

using Complex = std::complex<double>;

inline constexpr Complex I{0.0, 1.0};
inline constexpr double kPi = std::numbers::pi;
inline constexpr double kLog2Pi = 1.8378770664093454836;  // log(2*pi)

inline bool is_finite(Complex z) noexcept { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

inline void require_finite(Complex z, const char* what) {
    if (!is_finite(z)) fail(ErrorKind::precondition, std::string(what) + " must be finite");
}

namespace detail {

// B_2, B_4, ..., B_16
inline constexpr std::array<double, 8> kBernoulli = {
    1.0 / 6.0,       -1.0 / 30.0,  1.0 / 42.0, -1.0 / 30.0,
    5.0 / 66.0, -691.0 / 2730.0,   7.0 / 6.0, -3617.0 / 510.0,
};

// Shifts z to the right until Re z >= 12 so the asymptotic series is
// accurate to double precision.
inline constexpr double kAsymptoticShift = 12.0;

}  // namespace detail

/// Principal-branch log Gamma for Re z > 0 (Stirling series after upward
/// recurrence). The imaginary part is the continuous branch, so it can be
/// used for the Riemann-Siegel theta function.
inline Complex log_gamma(Complex z) {
    require(z.real() > 0.0, "log_gamma requires Re z > 0");
    Complex shift_log{0.0, 0.0};
    while (z.real() < detail::kAsymptoticShift) {
        shift_log += std::log(z);
        z += 1.0;
    }
    const Complex inv = 1.0 / z;
    const Complex inv2 = inv * inv;
    Complex series{0.0, 0.0};
    Complex power = inv;
    for (std::size_t k = 0; k < detail::kBernoulli.size(); ++k) {
        const double n = 2.0 * static_cast<double>(k + 1);
        series += detail::kBernoulli[k] / (n * (n - 1.0)) * power;
        power *= inv2;
    }
    return (z - 0.5) * std::log(z) - z + 0.5 * kLog2Pi + series - shift_log;
}

/// Digamma psi(z) for Re z > 0.
inline Complex digamma(Complex z) {
    require(z.real() > 0.0, "digamma requires Re z > 0");
    Complex shift{0.0, 0.0};
    while (z.real() < detail::kAsymptoticShift) {
        shift += 1.0 / z;
        z += 1.0;
    }
    const Complex inv2 = 1.0 / (z * z);
    Complex series{0.0, 0.0};
    Complex power = inv2;
    for (std::size_t k = 0; k < detail::kBernoulli.size(); ++k) {
        const double n = 2.0 * static_cast<double>(k + 1);
        series += detail::kBernoulli[k] / n * power;
        power *= inv2;
    }
    return std::log(z) - 0.5 / z - series - shift;
}

/// cot z without overflow for large |Im z|.
inline Complex cot(Complex z) {
    if (z.imag() >= 0.0) {
        const Complex e2 = std::exp(2.0 * I * z);
        return I * (e2 + 1.0) / (e2 - 1.0);
    }
    const Complex e2 = std::exp(-2.0 * I * z);
    return I * (1.0 + e2) / (1.0 - e2);
}

/// log sin z on a branch continuous in each half plane; only exp() of the
/// result is used, so the branch is irrelevant to callers.
inline Complex log_sin(Complex z) {
    if (z.imag() >= 0.0) {
        // sin z = e^{-iz} (e^{2iz} - 1) / (2i), |e^{2iz}| <= 1
        return -I * z + std::log((std::exp(2.0 * I * z) - 1.0) / (2.0 * I));
    }
    return std::conj(log_sin(std::conj(z)));
}

/// Riemann-Siegel theta: arg Gamma(1/4 + it/2) - (t/2) log pi.
inline double riemann_siegel_theta(double t) {
    return log_gamma(Complex{0.25, 0.5 * t}).imag() - 0.5 * t * std::log(kPi);
}

}  // namespace motohashi
