#pragma once

// Independent reference computations used only by the tests. Nothing here
// calls into the library's coefficient or evaluation code.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

namespace oracle {

using Complex = std::complex<double>;
using Series = std::vector<Complex>;  // index n, entry 0 unused

inline bool is_prime(std::size_t n) {
    if (n < 2) return false;
    for (std::size_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline int mobius(std::size_t n) {
    int mu = 1;
    for (std::size_t p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        n /= p;
        if (n % p == 0) return 0;
        mu = -mu;
    }
    if (n > 1) mu = -mu;
    return mu;
}

/// Lambda(n) by trial division.
inline double von_mangoldt(std::size_t n) {
    if (n < 2) return 0.0;
    std::size_t p = 2;
    while (p * p <= n && n % p) ++p;
    if (p * p > n) p = n;
    std::size_t m = n;
    while (m % p == 0) m /= p;
    return m == 1 ? std::log(static_cast<double>(p)) : 0.0;
}

inline Complex npow(std::size_t n, Complex a) { return std::exp(a * std::log(static_cast<double>(n))); }

/// Dirichlet convolution by direct double loop.
inline Series convolve(const Series& a, const Series& b) {
    const std::size_t N = a.size() - 1;
    Series out(N + 1, 0.0);
    for (std::size_t m = 1; m <= N; ++m) {
        if (a[m] == 0.0) continue;
        for (std::size_t k = 1; m * k <= N; ++k) out[m * k] += a[m] * b[k];
    }
    return out;
}

/// Coefficients of zeta(s - a): n^a.
inline Series shifted_zeta(std::size_t N, Complex a) {
    Series s(N + 1, 0.0);
    for (std::size_t n = 1; n <= N; ++n) s[n] = npow(n, a);
    return s;
}

/// Coefficients of 1/zeta(2s - i delta): mu(m) m^{i delta} at n = m^2.
inline Series inverse_square_zeta(std::size_t N, double delta) {
    Series s(N + 1, 0.0);
    for (std::size_t m = 1; m * m <= N; ++m) s[m * m] = static_cast<double>(mobius(m)) * npow(m, Complex{0.0, delta});
    return s;
}

/// Series of zeta(s)zeta(s-iT1)zeta(s+iT2)zeta(s-i(T1-T2))/zeta(2s-i(T1-T2)).
inline Series j_series(std::size_t N, double t1, double t2) {
    const double delta = t1 - t2;
    Series out = shifted_zeta(N, 0.0);
    out = convolve(out, shifted_zeta(N, Complex{0.0, t1}));
    out = convolve(out, shifted_zeta(N, Complex{0.0, -t2}));
    out = convolve(out, shifted_zeta(N, Complex{0.0, delta}));
    return convolve(out, inverse_square_zeta(N, delta));
}

/// The selberg-type weight lambda_d(z), straight from its definition.
inline double mollifier(std::size_t d, double z) {
    const double dd = static_cast<double>(d);
    if (dd >= z * z) return 0.0;
    const int mu = mobius(d);
    if (dd < z) return mu;
    return mu * std::log(z * z / dd) / std::log(z);
}

/// Dirichlet series (support on powers of p) of the single-prime factor
/// 1 - (1-p^-s)(1-p^-(s-iT1))(1-p^-(s+iT2))(1-p^-(s-i delta)) / (1-p^-(2s-i delta)).
inline Series local_series(std::size_t N, std::size_t p, double t1, double t2) {
    const double delta = t1 - t2;
    // Polynomial in u = p^-s with coefficients multiplying p^{i * shift}.
    std::vector<Complex> poly{1.0};
    for (const double a : {0.0, t1, -t2, delta}) {
        const Complex c = -npow(p, Complex{0.0, a});  // -(p^{ia}) u
        std::vector<Complex> next(poly.size() + 1, 0.0);
        for (std::size_t i = 0; i < poly.size(); ++i) {
            next[i] += poly[i];
            next[i + 1] += poly[i] * c;
        }
        poly = next;
    }
    // Times 1/(1 - p^{i delta} u^2).
    std::size_t kmax = 0;
    for (std::size_t q = 1; q <= N / p; q *= p) ++kmax;
    std::vector<Complex> series(kmax + 1, 0.0);
    const Complex r = npow(p, Complex{0.0, delta});
    for (std::size_t k = 0; k <= kmax; ++k) {
        Complex acc = 0.0;
        for (std::size_t j = 0; 2 * j <= k; ++j) {
            const std::size_t i = k - 2 * j;
            if (i < poly.size()) acc += poly[i] * std::pow(r, static_cast<double>(j));
        }
        series[k] = acc;
    }
    Series out(N + 1, 0.0);
    std::size_t q = 1;
    for (std::size_t k = 0; k <= kmax; ++k, q *= p) out[q] = (k == 0 ? 1.0 : 0.0) - series[k];
    return out;
}

/// Euler-type expansion of K = sum_d lambda_d prod_{p|d} (local series).
inline Series k_series(std::size_t N, double t1, double t2, double z) {
    Series out(N + 1, 0.0);
    for (std::size_t d = 1; static_cast<double>(d) < z * z; ++d) {
        const double lambda = mollifier(d, z);
        if (lambda == 0.0) continue;
        Series prod(N + 1, 0.0);
        prod[1] = 1.0;
        std::size_t m = d;
        for (std::size_t p = 2; p <= m; ++p) {
            if (m % p) continue;
            m /= p;
            prod = convolve(prod, local_series(N, p, t1, t2));
        }
        for (std::size_t n = 1; n <= N; ++n) out[n] += lambda * prod[n];
    }
    return out;
}

/// Single-prime factor straight from its formula.
inline Complex local_factor(std::size_t p, Complex s, double t1, double t2) {
    const double delta = t1 - t2;
    Complex num = 1.0;
    for (const double a : {0.0, t1, -t2, delta}) num *= 1.0 - npow(p, -(s - Complex{0.0, a}));
    return 1.0 - num / (1.0 - npow(p, -(2.0 * s - Complex{0.0, delta})));
}

/// K(s) summed over d in descending order.
inline Complex k_direct(Complex s, double t1, double t2, double z) {
    Complex acc = 0.0;
    for (auto d = static_cast<std::size_t>(std::ceil(z * z)); d >= 1; --d) {
        const double lambda = mollifier(d, z);
        if (lambda == 0.0) continue;
        Complex prod = 1.0;
        std::size_t m = d;
        for (std::size_t p = 2; p <= m; ++p)
            if (m % p == 0) {
                m /= p;
                prod *= local_factor(p, s, t1, t2);
            }
        acc += lambda * prod;
    }
    return acc;
}

/// Dirichlet inverse of a series with a[1] = 1.
inline Series dirichlet_inverse(const Series& a) {
    const std::size_t N = a.size() - 1;
    Series inv(N + 1, 0.0);
    inv[1] = 1.0 / a[1];
    for (std::size_t n = 2; n <= N; ++n) {
        Complex acc = 0.0;
        for (std::size_t d = 2; d <= n; ++d)
            if (n % d == 0) acc += a[d] * inv[n / d];
        inv[n] = -acc / a[1];
    }
    return inv;
}

/// Coefficients of F'/F as (-log n a_n) convolved with the inverse of a.
inline Series log_derivative(const Series& a) {
    Series d(a.size(), 0.0);
    for (std::size_t n = 1; n < a.size(); ++n) d[n] = -std::log(static_cast<double>(n)) * a[n];
    return convolve(d, dirichlet_inverse(a));
}

/// -sum_{n <= N} Lambda(n) n^-s.
inline Complex zeta_log_deriv_series(Complex s, std::size_t N) {
    Complex acc = 0.0;
    for (std::size_t n = N; n >= 2; --n) {
        const double L = von_mangoldt(n);
        if (L != 0.0) acc -= L * npow(n, -s);
    }
    return acc;
}

/// Plain partial sum of zeta.
inline Complex zeta_partial(Complex s, std::size_t N) {
    Complex acc = 0.0;
    for (std::size_t n = N; n >= 1; --n) acc += npow(n, -s);
    return acc;
}

/// (1/2pi) int_{-H}^{H} k(2+it) n^{-(2+it)} dt with
/// k(w) = x^w (1-x^w)^2 / (log^2 x w^3), composite Simpson.
inline double mellin_weight(double n, double x, double H = 2000.0, double h = 0.002) {
    const double L = std::log(x), ln = std::log(n);
    auto f = [&](double t) {
        const Complex w{2.0, t};
        const Complex xw = std::exp(w * L);
        const Complex one_minus = 1.0 - xw;
        return (xw * one_minus * one_minus / (L * L * w * w * w) * std::exp(-w * ln)).real();
    };
    const long m = 2 * static_cast<long>(std::ceil(H / h / 2.0));
    const double step = 2.0 * H / m;
    double acc = f(-H) + f(H);
    for (long i = 1; i < m; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(-H + i * step);
    return acc * step / 3.0 / (2.0 * std::numbers::pi);
}

/// Laurent coefficients a_j, j in [-jmax, jmax], of f around c from the
/// DFT of `points` samples on a circle of radius r.
template <class F>
std::vector<Complex> laurent_coefficients(const F& f, Complex c, double r, int points, int jmax) {
    std::vector<Complex> samples(points);
    for (int k = 0; k < points; ++k) samples[k] = f(c + std::polar(r, 2.0 * std::numbers::pi * k / points));
    std::vector<Complex> out;
    for (int j = -jmax; j <= jmax; ++j) {
        Complex acc = 0.0;
        for (int k = 0; k < points; ++k) acc += samples[k] * std::polar(1.0, -2.0 * std::numbers::pi * j * k / points);
        out.push_back(acc / static_cast<double>(points) / std::pow(r, j));
    }
    return out;
}

/// Pole order from Laurent coefficients: the most negative j whose term
/// a_j r^j is not negligible against the largest term.
template <class F>
int laurent_pole_order(const F& f, Complex c, double r, int points = 32, int jmax = 4) {
    const auto a = laurent_coefficients(f, c, r, points, jmax);
    double biggest = 0.0;
    for (int j = -jmax; j <= jmax; ++j) biggest = std::max(biggest, std::abs(a[j + jmax]) * std::pow(r, j));
    for (int j = -jmax; j < 0; ++j)
        if (std::abs(a[j + jmax]) * std::pow(r, j) > 1e-6 * biggest) return -j;
    return 0;
}

}  // namespace oracle
