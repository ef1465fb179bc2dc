#pragma once

// Riemann zeta on the region needed by the product: Euler-Maclaurin with
// eight Bernoulli corrections for Re s >= -1, functional equation to the
// left of that. Derivatives are the term-wise derivative of the same
// formula.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "special.hpp"
#include "zero_table.hpp"

namespace motohashi {

struct ZetaValue {
    Complex value;
    Complex derivative;
    /// Set when the caller asked for fewer terms than the adaptive cutoff.
    bool accuracy_warning = false;
};

/// Euler-Maclaurin cutoff max(50, ceil(2|Im s|)).
inline std::size_t adaptive_terms(Complex s) {
    return std::max<std::size_t>(50, static_cast<std::size_t>(std::ceil(2.0 * std::abs(s.imag()))));
}

namespace detail {

inline constexpr double kPoleRadius = 1e-12;
inline constexpr double kReflectionEdge = -1.0;

inline constexpr std::array<double, 8> kEvenFactorial = {
    2.0, 24.0, 720.0, 40320.0, 3628800.0, 479001600.0, 87178291200.0, 20922789888000.0,
};

inline ZetaValue euler_maclaurin(Complex s, std::size_t terms) {
    const auto N = static_cast<double>(terms);
    Complex sum{0.0, 0.0};
    Complex dsum{0.0, 0.0};
    for (std::size_t n = terms - 1; n >= 1; --n) {  // small terms first
        const double logn = std::log(static_cast<double>(n));
        const Complex t = std::exp(-s * logn);
        sum += t;
        dsum -= logn * t;
    }
    const double logN = std::log(N);
    const Complex a = std::exp(-s * logN);  // N^{-s}

    const Complex tail = N * a / (s - 1.0);
    sum += tail;
    dsum += -logN * tail - tail / (s - 1.0);
    sum += 0.5 * a;
    dsum += -0.5 * logN * a;

    // s(s+1)...(s+2k-2) and its derivative, built incrementally.
    Complex poch = s;
    Complex dpoch{1.0, 0.0};
    double npow = 1.0 / N;  // N^{-(2k-1)}
    for (std::size_t k = 0; k < kBernoulli.size(); ++k) {
        const double c = kBernoulli[k] / kEvenFactorial[k];
        sum += c * poch * a * npow;
        dsum += c * (dpoch - logN * poch) * a * npow;
        const double j = 2.0 * static_cast<double>(k) + 1.0;
        const Complex f1 = s + j;
        const Complex f2 = s + (j + 1.0);
        dpoch = dpoch * f1 * f2 + poch * (f1 + f2);
        poch = poch * f1 * f2;
        npow /= N * N;
    }
    return {sum, dsum, false};
}

}  // namespace detail

/// zeta(s) and zeta'(s) with an explicit Euler-Maclaurin length. For
/// Re s < -1 the functional equation is applied and `terms` is used for
/// zeta(1-s).
inline ZetaValue zeta_with_derivative(Complex s, std::size_t terms) {
    require_finite(s, "s");
    require(terms >= 10, "zeta needs at least 10 terms");
    if (std::abs(s - 1.0) < detail::kPoleRadius) fail(ErrorKind::pole_at_one, "zeta has a pole at s = 1");
    if (s.real() >= detail::kReflectionEdge) {
        ZetaValue v = detail::euler_maclaurin(s, terms);
        v.accuracy_warning = terms < adaptive_terms(s);
        return v;
    }
    const Complex w = 1.0 - s;
    const ZetaValue r = zeta_with_derivative(w, terms);
    const Complex log_factor = s * std::log(2.0) + (s - 1.0) * std::log(kPi) + log_sin(0.5 * kPi * s) + log_gamma(w);
    const Complex value = std::exp(log_factor) * r.value;
    const Complex log_deriv =
        kLog2Pi + 0.5 * kPi * cot(0.5 * kPi * s) - digamma(w) - r.derivative / r.value;
    return {value, value * log_deriv, r.accuracy_warning};
}

inline ZetaValue zeta(Complex s, std::size_t terms) { return zeta_with_derivative(s, terms); }

inline Complex zeta(Complex s) { return zeta_with_derivative(s, adaptive_terms(s)).value; }

/// Identifies the nearest zeta singularity of zeta'/zeta within `radius`:
/// the pole at 1, a trivial zero, or a tabulated critical zero.
inline std::optional<std::string> zeta_singularity_near(Complex s, double radius, const ZeroTable* zeros) {
    if (std::abs(s - 1.0) < radius) return "pole at s = 1";
    if (s.real() < -1.0) {
        const double q = std::round(-s.real() / 2.0);
        if (q >= 1.0 && std::abs(s - Complex{-2.0 * q, 0.0}) < radius)
            return "trivial zero at s = " + std::to_string(static_cast<long>(-2.0 * q));
    }
    if (zeros && std::abs(s.real() - 0.5) < radius && zeros->distance_to_nearest(s.imag()) < radius)
        return "critical zero near 1/2 + i*" + std::to_string(s.imag());
    return std::nullopt;
}

/// zeta'/zeta(s). Throws near-singularity when s is within 1e-8 of the pole,
/// a trivial zero or (when a table is supplied) a tabulated zero.
inline Complex zeta_log_deriv(Complex s, const ZeroTable* zeros = nullptr) {
    require_finite(s, "s");
    if (auto near = zeta_singularity_near(s, 1e-8, zeros)) fail(ErrorKind::near_singularity, "zeta'/zeta undefined: " + *near, *near);
    const auto [value, derivative, warn] = zeta_with_derivative(s, adaptive_terms(s));
    (void)warn;
    return derivative / value;
}

/// Hardy's function: real-valued, |Z(t)| = |zeta(1/2 + it)|.
inline double hardy_z(double t) {
    const Complex v = zeta(Complex{0.5, t});
    return (std::exp(I * riemann_siegel_theta(t)) * v).real();
}

namespace detail {

/// Bisection to width 1e-6, then Illinois regula falsi down to `tol`,
/// inside a bracket [a, b] where Hardy's function changes sign.
inline double refine_bracket(double a, double b, double fa, double fb, double tol) {
    while (b - a > 1e-6) {
        const double m = 0.5 * (a + b);
        const double fm = hardy_z(m);
        if (fm == 0.0) return m;
        if ((fm < 0.0) == (fa < 0.0)) a = m, fa = fm;
        else b = m, fb = fm;
    }
    int side = 0;
    for (int iter = 0; iter < 100 && b - a > tol; ++iter) {
        const double c = (a * fb - b * fa) / (fb - fa);
        if (!(c > a && c < b)) break;
        const double fc = hardy_z(c);
        if (fc == 0.0) return c;
        if ((fc < 0.0) == (fa < 0.0)) {
            a = c, fa = fc;
            if (side == -1) fb *= 0.5;
            side = -1;
        } else {
            b = c, fb = fc;
            if (side == 1) fa *= 0.5;
            side = 1;
        }
        if (std::abs(fc) < 1e-300) break;
    }
    return std::abs(fa) < std::abs(fb) ? a : b;
}

}  // namespace detail

/// Locates the critical zero nearest gamma_approx by a sign change of
/// Hardy's function in [gamma_approx - 0.5, gamma_approx + 0.5], then
/// bisection and Illinois regula falsi down to `tol`.
inline double refine_zero(double gamma_approx, double tol = 1e-12) {
    require(std::isfinite(gamma_approx) && gamma_approx > 0.5, "refine_zero needs a positive ordinate estimate");
    require(tol > 0.0, "refine_zero needs tol > 0");
    constexpr int kScan = 128;
    const double lo = gamma_approx - 0.5;
    const double step = 1.0 / kScan;

    double best_a = 0.0, best_b = 0.0, fa = 0.0, fb = 0.0;
    double best_dist = INFINITY;
    double prev_t = lo;
    double prev_f = hardy_z(prev_t);
    for (int i = 1; i <= kScan; ++i) {
        const double t = lo + i * step;
        const double f = hardy_z(t);
        if (prev_f == 0.0) return prev_t;
        if ((prev_f < 0.0) != (f < 0.0)) {
            const double dist = std::abs(0.5 * (prev_t + t) - gamma_approx);
            if (dist < best_dist) {
                best_dist = dist;
                best_a = prev_t, best_b = t, fa = prev_f, fb = f;
            }
        }
        prev_t = t;
        prev_f = f;
    }
    if (!std::isfinite(best_dist))
        fail(ErrorKind::no_sign_change, "no sign change of Hardy's function within 0.5 of " + std::to_string(gamma_approx));
    return detail::refine_bracket(best_a, best_b, fa, fb, tol);
}

/// Critical zeros in [t_lo, t_hi] found as sign changes of Hardy's function
/// on a grid of spacing `step`, each refined to `tol`. Pairs closer than
/// the step can be missed; the caller picks the step.
inline std::vector<double> scan_critical_zeros(double t_lo, double t_hi, double step = 0.05, double tol = 1e-12) {
    require(std::isfinite(t_lo) && std::isfinite(t_hi) && 0.0 <= t_lo && t_lo < t_hi, "scan needs 0 <= t_lo < t_hi");
    require(t_hi <= 1000.0, "scan supports ordinates up to 1000");
    require(step > 0.0 && step <= 1.0, "scan step must lie in (0, 1]");
    std::vector<double> out;
    const auto n = static_cast<std::size_t>(std::ceil((t_hi - t_lo) / step));
    double prev_t = t_lo, prev_f = hardy_z(t_lo);
    for (std::size_t i = 1; i <= n; ++i) {
        const double t = (i == n) ? t_hi : t_lo + step * static_cast<double>(i);
        const double f = hardy_z(t);
        if (prev_f == 0.0) out.push_back(prev_t);
        else if (f != 0.0 && (prev_f < 0.0) != (f < 0.0)) out.push_back(detail::refine_bracket(prev_t, t, prev_f, f, tol));
        prev_t = t;
        prev_f = f;
    }
    if (prev_f == 0.0) out.push_back(prev_t);
    return out;
}

/// Admissible ordinate T_m in (m + 0.1, m + 0.9): of 64 equally spaced
/// candidates, the one farthest from every tabulated zero ordinate.
inline double select_contour_ordinate(int m, const ZeroTable& zeros) {
    require(m >= 2, "contour index m must be at least 2");
    if (zeros.max_ordinate() < m + 1.0 && !zeros.empty())
        fail(ErrorKind::coverage, "zeros table does not reach ordinate " + std::to_string(m + 1));
    constexpr int kCandidates = 64;
    double best_t = m + 0.5, best_dist = -1.0;
    for (int j = 0; j < kCandidates; ++j) {
        const double t = m + 0.1 + 0.8 * (j + 1) / (kCandidates + 1);
        const double d = zeros.distance_to_nearest(t);
        if (d > best_dist) best_dist = d, best_t = t;
    }
    return best_t;
}

/// Largest |zeta'/zeta(s)| / log^2 m sampled on the contour
/// t = +-T_m, -m-1/2 <= sigma <= 2 and sigma = -m-1/2, |t| < T_m.
/// `samples` points per segment.
inline double probe_contour_bound(int m, int samples, const ZeroTable& zeros) {
    require(m >= 2 && m <= 50, "contour probe supports 2 <= m <= 50");
    require(samples >= 2, "contour probe needs at least 2 samples per segment");
    const double T = select_contour_ordinate(m, zeros);
    const double left = -m - 0.5;
    const double right = 2.0;
    const double scale = std::log(static_cast<double>(m));
    double sup = 0.0;
    auto visit = [&](Complex s) { sup = std::max(sup, std::abs(zeta_log_deriv(s))); };
    for (int i = 0; i < samples; ++i) {
        const double u = static_cast<double>(i) / (samples - 1);
        const double sigma = left + (right - left) * u;
        visit({sigma, T});
        visit({sigma, -T});
        visit({left, -T + 2.0 * T * u});
    }
    return sup / (scale * scale);
}

}  // namespace motohashi
