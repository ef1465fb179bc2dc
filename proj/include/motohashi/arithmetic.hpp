#pragma once

// Integer substrate and Dirichlet-coefficient algebra for the product
// Z(s) = J(s) K(s): Mobius values, mollifier weights, complex divisor sums,
// the coefficients c_n of Z, the coefficients Sigma(n) of Z'/Z and their
// smoothed truncation.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "special.hpp"

namespace motohashi {

inline constexpr std::size_t kSieveLimit = 10'000'000;
inline constexpr std::size_t kCoefficientLimit = 1'000'000;
inline constexpr double kMollifierSquareLimit = 1e6;

/// Shift/mollifier configuration (T1, T2, z) of the product.
struct SpectralParams {
    double t1 = 0.0;
    double t2 = 0.0;
    double z = 2.0;

    SpectralParams() = default;
    SpectralParams(double t1_, double t2_, double z_) : t1(t1_), t2(t2_), z(z_) { validate(); }

    void validate() const {
        require(std::isfinite(t1) && std::isfinite(t2), "T1 and T2 must be finite");
        require(std::isfinite(z) && z > 1.0, "mollifier length z must exceed 1");
        require(z * z <= kMollifierSquareLimit, "z^2 must not exceed 1e6");
    }

    /// T1 - T2, the shift of the 2s-line.
    double delta() const noexcept { return t1 - t2; }

    /// Exclusive support bound of the weights: lambda_d = 0 for d >= z^2.
    std::size_t support_end() const noexcept { return static_cast<std::size_t>(std::ceil(z * z)); }

    friend bool operator==(const SpectralParams&, const SpectralParams&) = default;
};

/// Linear sieve: smallest prime factor, Mobius function and prime list.
class Sieve {
public:
    explicit Sieve(std::size_t limit) : limit_(limit) {
        if (limit > kSieveLimit) fail(ErrorKind::limit_too_large, "sieve limit exceeds 1e7");
        spf_.assign(limit + 1, 0);
        mu_.assign(limit + 1, 0);
        if (limit >= 1) mu_[1] = 1;
        for (std::uint32_t i = 2; i <= limit; ++i) {
            if (spf_[i] == 0) {
                spf_[i] = i;
                mu_[i] = -1;
                primes_.push_back(i);
            }
            for (const std::uint32_t p : primes_) {
                const std::uint64_t m = static_cast<std::uint64_t>(p) * i;
                if (p > spf_[i] || m > limit) break;
                spf_[m] = p;
                mu_[m] = (p == spf_[i]) ? 0 : static_cast<std::int8_t>(-mu_[i]);
            }
        }
    }

    std::size_t limit() const noexcept { return limit_; }
    int mu(std::size_t n) const { return mu_.at(n); }
    std::uint32_t smallest_prime_factor(std::size_t n) const { return spf_.at(n); }
    const std::vector<std::uint32_t>& primes() const noexcept { return primes_; }
    const std::vector<std::int8_t>& mobius() const noexcept { return mu_; }

    /// Distinct prime factors of n, ascending.
    std::vector<std::uint32_t> prime_factors(std::size_t n) const {
        std::vector<std::uint32_t> out;
        while (n > 1) {
            const std::uint32_t p = spf_.at(n);
            out.push_back(p);
            while (n % p == 0) n /= p;
        }
        return out;
    }

private:
    std::size_t limit_;
    std::vector<std::uint32_t> spf_;
    std::vector<std::int8_t> mu_;
    std::vector<std::uint32_t> primes_;
};

/// mu(n) for 0 <= n <= limit (mu(0) is reported as 0).
inline std::vector<int> mobius_sieve(std::size_t limit) {
    const Sieve sieve(limit);
    return {sieve.mobius().begin(), sieve.mobius().end()};
}

/// Selberg-type weights lambda_d(z): mu(d) below z, tapered by
/// log(z^2/d)/log z on [z, z^2), zero from z^2 on.
class MollifierWeights {
public:
    struct Entry {
        std::uint32_t d;
        double lambda;
        std::vector<std::uint32_t> primes;  // prime factors of d
    };

    explicit MollifierWeights(const SpectralParams& params) : z_(params.z) {
        params.validate();
        const std::size_t end = params.support_end();
        const Sieve sieve(end);
        dense_.assign(end, 0.0);
        const double logz = std::log(z_);
        const double z2 = z_ * z_;
        for (std::size_t d = 1; d < end; ++d) {
            const int mu = sieve.mu(d);
            if (mu == 0) continue;
            const auto dd = static_cast<double>(d);
            if (dd >= z2) continue;
            const double lambda = dd < z_ ? mu : mu * std::log(z2 / dd) / logz;
            dense_[d] = lambda;
            entries_.push_back({static_cast<std::uint32_t>(d), lambda, sieve.prime_factors(d)});
        }
        for (const std::uint32_t p : sieve.primes())
            if (static_cast<double>(p) < z2) primes_.push_back(p);
    }

    double z() const noexcept { return z_; }

    double operator()(std::size_t d) const noexcept { return d < dense_.size() ? dense_[d] : 0.0; }

    /// Squarefree d < z^2, ascending.
    const std::vector<Entry>& entries() const noexcept { return entries_; }

    /// Primes p < z^2.
    const std::vector<std::uint32_t>& primes() const noexcept { return primes_; }

    /// True when only d = 1 carries weight, i.e. K is identically 1.
    bool trivial() const noexcept { return entries_.size() == 1; }

private:
    double z_;
    std::vector<double> dense_;
    std::vector<Entry> entries_;
    std::vector<std::uint32_t> primes_;
};

inline MollifierWeights lambda_weights(const SpectralParams& params) { return MollifierWeights(params); }

/// sigma_a(n) = sum_{d | n} d^a, via the factorisation of n.
inline Complex complex_divisor_sum(std::size_t n, Complex a) {
    require(n >= 1 && n <= kSieveLimit, "complex_divisor_sum needs 1 <= n <= 1e7");
    Complex result{1.0, 0.0};
    std::size_t m = n;
    for (std::size_t p = 2; p * p <= m; ++p) {
        if (m % p != 0) continue;
        const Complex pa = std::exp(a * std::log(static_cast<double>(p)));
        Complex term{1.0, 0.0}, power{1.0, 0.0};
        while (m % p == 0) {
            m /= p;
            power *= pa;
            term += power;
        }
        result *= term;
    }
    if (m > 1) result *= 1.0 + std::exp(a * std::log(static_cast<double>(m)));
    return result;
}

enum class CoefficientKind { z_series, log_deriv, smoothed };

inline const char* to_string(CoefficientKind kind) noexcept {
    switch (kind) {
        case CoefficientKind::z_series: return "z";
        case CoefficientKind::log_deriv: return "log-deriv";
        case CoefficientKind::smoothed: return "smoothed";
    }
    return "?";
}

/// Dense Dirichlet coefficients over first <= n <= nmax; values[n] is the
/// coefficient of n^{-s}, entries below `first` are zero and not part of
/// the series.
struct CoefficientTable {
    CoefficientKind kind = CoefficientKind::z_series;
    SpectralParams params;
    std::optional<double> x;  // smoothing length, smoothed kind only
    std::size_t first = 1;
    std::vector<Complex> values;

    std::size_t nmax() const noexcept { return values.empty() ? 0 : values.size() - 1; }

    Complex operator[](std::size_t n) const {
        require(n >= first && n <= nmax(), "coefficient index out of table range");
        return values[n];
    }

    /// sum_{first <= n <= min(nmax, limit)} values[n] n^{-s}, summed from
    /// the largest n down.
    Complex evaluate(Complex s, std::size_t limit = SIZE_MAX) const {
        const std::size_t top = std::min(limit, nmax());
        Complex acc{0.0, 0.0};
        for (std::size_t n = top; n >= first && n >= 1; --n) {
            if (values[n] != Complex{0.0, 0.0}) acc += values[n] * std::exp(-s * std::log(static_cast<double>(n)));
            if (n == first) break;
        }
        return acc;
    }
};

namespace detail {

/// sigma_a(n) for all n <= nmax through the prime-power split n = p^e m.
inline std::vector<Complex> divisor_sum_table(const Sieve& sieve, std::size_t nmax, Complex a) {
    std::vector<Complex> sigma(nmax + 1, Complex{1.0, 0.0});
    std::vector<std::size_t> prime_power(nmax + 1, 1);
    for (std::size_t n = 2; n <= nmax; ++n) {
        const std::size_t p = sieve.smallest_prime_factor(n);
        const std::size_t m = n / p;
        prime_power[n] = (m % p == 0) ? prime_power[m] * p : p;
        const std::size_t pe = prime_power[n];
        if (pe == n) {
            // sigma_a(p^e) = sigma_a(p^{e-1}) + p^{e a}
            sigma[n] = sigma[n / p] + std::exp(a * std::log(static_cast<double>(n)));
        } else {
            sigma[n] = sigma[pe] * sigma[n / pe];
        }
    }
    return sigma;
}

}  // namespace detail

/// c_n = sigma_{iT1}(n) sigma_{-iT2}(n) sum_{d | n} lambda_d(z), 1 <= n <= nmax.
inline CoefficientTable z_coefficients(const SpectralParams& params, std::size_t nmax) {
    params.validate();
    require(nmax >= 1 && nmax <= kCoefficientLimit, "nmax must lie in [1, 1e6]");
    const MollifierWeights weights(params);
    const Sieve sieve(nmax);
    const auto sigma1 = detail::divisor_sum_table(sieve, nmax, Complex{0.0, params.t1});
    const auto sigma2 = detail::divisor_sum_table(sieve, nmax, Complex{0.0, -params.t2});

    std::vector<double> mollified(nmax + 1, 0.0);
    for (const auto& e : weights.entries())
        for (std::size_t n = e.d; n <= nmax; n += e.d) mollified[n] += e.lambda;

    CoefficientTable table;
    table.kind = CoefficientKind::z_series;
    table.params = params;
    table.first = 1;
    table.values.assign(nmax + 1, Complex{0.0, 0.0});
    for (std::size_t n = 1; n <= nmax; ++n) table.values[n] = sigma1[n] * sigma2[n] * mollified[n];
    return table;
}

/// Sigma(n), 2 <= n <= nmax, from Z' = Z (Z'/Z):
/// Sigma(n) = -c_n log n - sum_{d | n, 1 < d < n} Sigma(d) c_{n/d}.
inline CoefficientTable log_deriv_coefficients(const CoefficientTable& c) {
    require(c.kind == CoefficientKind::z_series, "log_deriv_coefficients needs a Z-coefficient table");
    if (c.nmax() < 1 || std::abs(c.values[1] - 1.0) > 1e-12)
        fail(ErrorKind::normalization, "Z-coefficient table must have c_1 = 1");
    const std::size_t nmax = c.nmax();
    CoefficientTable out;
    out.kind = CoefficientKind::log_deriv;
    out.params = c.params;
    out.first = 2;
    out.values.assign(nmax + 1, Complex{0.0, 0.0});
    std::vector<Complex> acc(nmax + 1, Complex{0.0, 0.0});
    for (std::size_t d = 2; d <= nmax; ++d) {
        const Complex sd = -c.values[d] * std::log(static_cast<double>(d)) - acc[d];
        out.values[d] = sd;
        if (sd == Complex{0.0, 0.0}) continue;
        for (std::size_t k = 2, n = 2 * d; n <= nmax; ++k, n += d)
            if (c.values[k] != Complex{0.0, 0.0}) acc[n] += sd * c.values[k];
    }
    return out;
}

/// Inverse of log_deriv_coefficients: rebuilds c_n (c_1 = 1) from Sigma(n)
/// through -c_n log n = sum_{d | n, d > 1} Sigma(d) c_{n/d}.
inline CoefficientTable coefficients_from_log_deriv(const CoefficientTable& sigma) {
    require(sigma.kind == CoefficientKind::log_deriv, "coefficients_from_log_deriv needs a Sigma table");
    const std::size_t nmax = sigma.nmax();
    CoefficientTable c;
    c.kind = CoefficientKind::z_series;
    c.params = sigma.params;
    c.first = 1;
    c.values.assign(nmax + 1, Complex{0.0, 0.0});
    if (nmax >= 1) c.values[1] = 1.0;
    std::vector<Complex> acc(nmax + 1, Complex{0.0, 0.0});
    for (std::size_t m = 1; m <= nmax; ++m) {
        if (m >= 2) c.values[m] = -acc[m] / std::log(static_cast<double>(m));
        if (c.values[m] == Complex{0.0, 0.0}) continue;
        // c_m contributes Sigma(d) c_m to index n = d m for every d >= 2
        for (std::size_t d = 2, n = 2 * m; n <= nmax; ++d, n += m) acc[n] += sigma.values[d] * c.values[m];
    }
    return c;
}

/// Smoothing weight w(n) = Sigma_x(n) / Sigma(n).
inline double selberg_weight(double n, double x) {
    require(x > 1.0, "smoothing length x must exceed 1");
    if (n <= x) return 1.0;
    if (n >= x * x * x) return 0.0;
    const double L = std::log(x);
    const double l = std::log(n);
    const double a = 3.0 * L - l;  // log(x^3/n)
    if (l <= 2.0 * L) {
        const double b = 2.0 * L - l;  // log(x^2/n)
        return (a * a - 2.0 * b * b) / (2.0 * L * L);
    }
    return a * a / (2.0 * L * L);
}

/// Largest integer n with n < x^3.
inline std::size_t smoothing_range(double x) {
    const double x3 = x * x * x;
    auto n = static_cast<std::size_t>(std::floor(x3));
    if (static_cast<double>(n) >= x3 && n > 0) --n;
    return n;
}

/// Sigma_x(n) = w(n) Sigma(n) for 2 <= n < x^3.
inline CoefficientTable selberg_smooth(const CoefficientTable& sigma, double x) {
    require(sigma.kind == CoefficientKind::log_deriv, "selberg_smooth needs a Sigma table");
    require(std::isfinite(x) && x > 1.0, "smoothing length x must exceed 1");
    const std::size_t top = smoothing_range(x);
    if (sigma.nmax() < top)
        fail(ErrorKind::coverage, "Sigma table ends at " + std::to_string(sigma.nmax()) + " but x^3 needs " + std::to_string(top));
    CoefficientTable out;
    out.kind = CoefficientKind::smoothed;
    out.params = sigma.params;
    out.x = x;
    out.first = 2;
    out.values.assign(std::max<std::size_t>(top, 1) + 1, Complex{0.0, 0.0});
    for (std::size_t n = 2; n <= top; ++n) out.values[n] = sigma.values[n] * selberg_weight(static_cast<double>(n), x);
    return out;
}

}  // namespace motohashi
