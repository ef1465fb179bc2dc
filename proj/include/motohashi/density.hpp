#pragma once

// Zero counting for K to the right of a vertical line, moment integrals on
// vertical lines, and the large-value grid scan of |J K|.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "argument_principle.hpp"
#include "errors.hpp"
#include "k_structure.hpp"
#include "parallel.hpp"
#include "product.hpp"
#include "zeta.hpp"

namespace motohashi {

struct DensityQuery {
    double sigma = 0.5;
    double T = 10.0;
    SpectralParams params;

    void validate() const {
        params.validate();
        require(std::isfinite(sigma) && sigma >= 0.5, "sigma must be at least 1/2");
        require(std::isfinite(T) && T > 0.0, "T must be positive");
    }
};

/// sum_{d > 1} |lambda_d| prod_{p | d} G_p(sigma) with
/// G_p = ((1 + y)^4 - 1 + y^2) / (1 - y^2), y = p^{-sigma}, bounds |K - 1|
/// on Re s >= sigma. Below 1 it certifies that K has no zeros there.
inline double K_zero_free_certificate(const MollifierWeights& weights, double sigma) {
    double total = 0.0;
    for (const auto& e : weights.entries()) {
        if (e.d == 1) continue;
        double prod = std::abs(e.lambda);
        for (const auto p : e.primes) {
            const double y = std::pow(static_cast<double>(p), -sigma);
            if (y >= 1.0) return INFINITY;
            prod *= (std::pow(1.0 + y, 4) - 1.0 + y * y) / (1.0 - y * y);
        }
        total += prod;
    }
    return total;
}

struct DensityResult {
    long count = 0;
    double sigma_right = 3.0;
    double certificate = 0.0;
    std::vector<LocatedZero> zeros;
};

/// N_K(sigma, T): zeros r of K with Re r > sigma and 0 < Im r <= T, with
/// multiplicity. The right edge is 3, moved right in unit steps if the
/// zero-free certificate fails there.
inline DensityResult count_K_zeros(const DensityQuery& q, const ZeroSearchOptions& opt = {}) {
    q.validate();
    DensityResult out;
    const MotohashiProduct product(q.params);
    if (product.trivial_mollifier()) return out;
    out.certificate = K_zero_free_certificate(product.weights(), out.sigma_right);
    while (out.certificate >= 1.0) {
        if (out.sigma_right >= 60.0) fail(ErrorKind::inconclusive, "no zero-free right edge found up to Re s = 60");
        out.sigma_right += 1.0;
        out.certificate = K_zero_free_certificate(product.weights(), out.sigma_right);
    }
    if (q.sigma >= out.sigma_right) return out;
    try {
        const auto found = find_K_zeros(product, Rect(q.sigma, out.sigma_right, 0.0, q.T), opt);
        out.zeros = found.zeros;
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::boundary_too_close) throw;
        fail(ErrorKind::boundary_too_close, std::string(e.what()) + "; nudge sigma or T by 1e-3");
    }
    for (const auto& z : out.zeros) out.count += z.multiplicity;
    return out;
}

struct QuadratureReport {
    double value = 0.0;
    /// Same rule with the step halved.
    double halved_value = 0.0;
    double relative_change = 0.0;
    /// Halving moved the value by more than 0.5 %.
    bool step_warning = false;
    std::size_t samples = 0;
};

namespace detail {

inline constexpr double kStepTolerance = 5e-3;

/// Composite Simpson on [a, b] with an even number n of intervals of size
/// at most h, plus the same rule on 2n intervals reusing the samples.
template <class F>
std::pair<double, double> simpson_pair(const F& f, double a, double b, double h, unsigned threads, std::size_t& samples) {
    if (b <= a) return {0.0, 0.0};
    std::size_t n = static_cast<std::size_t>(std::ceil((b - a) / h));
    n += n % 2;
    n = std::max<std::size_t>(n, 2);
    const std::size_t fine = 2 * n;
    const double step = (b - a) / fine;
    const auto v = parallel_map(fine + 1, threads, [&](std::size_t i) { return f(a + step * i); });
    samples += fine + 1;
    double coarse = v[0] + v[fine], refined = v[0] + v[fine];
    for (std::size_t i = 1; i < fine; ++i) refined += v[i] * ((i % 2) ? 4.0 : 2.0);
    for (std::size_t i = 2; i < fine; i += 2) coarse += v[i] * (((i / 2) % 2) ? 4.0 : 2.0);
    return {coarse * (2.0 * step) / 3.0, refined * step / 3.0};
}

inline QuadratureReport finish(double coarse, double refined, std::size_t samples) {
    QuadratureReport r;
    r.value = coarse;
    r.halved_value = refined;
    r.samples = samples;
    const double scale = std::max(std::abs(coarse), std::abs(refined));
    r.relative_change = scale > 0.0 ? std::abs(refined - coarse) / scale : 0.0;
    r.step_warning = r.relative_change > kStepTolerance;
    return r;
}

}  // namespace detail

struct ZetaMomentQuery {
    double k = 1.0;
    double T = 100.0;
    double quad_step = 0.05;
    double sigma_line = 0.5;
    unsigned threads = 1;

    void validate() const {
        require(std::isfinite(k) && k > 0.0 && k <= 4.0, "moment exponent k must lie in (0, 4]");
        require(std::isfinite(T) && T > 0.0 && T <= 500.0, "T must lie in (0, 500]");
        require(std::isfinite(quad_step) && quad_step > 0.0 && quad_step <= 0.05, "quad_step must lie in (0, 0.05]");
        require(std::isfinite(sigma_line), "sigma_line must be finite");
    }
};

struct ZetaMomentResult {
    QuadratureReport quadrature;
    /// value / (T (log T)^{k^2}), absent when T <= 1.
    std::optional<double> ratio;
};

/// Simpson quadrature of |zeta(sigma_line + it)|^{2k} over [0, T].
inline ZetaMomentResult zeta_moment(const ZetaMomentQuery& q) {
    q.validate();
    std::size_t samples = 0;
    const auto f = [&](double t) {
        const Complex s{q.sigma_line, t};
        if (std::abs(s - 1.0) < 1e-6) fail(ErrorKind::singularity, "moment line passes through the pole of zeta", "S1");
        return std::pow(std::abs(zeta(s)), 2.0 * q.k);
    };
    const auto [coarse, refined] = detail::simpson_pair(f, 0.0, q.T, q.quad_step, q.threads, samples);
    ZetaMomentResult out;
    out.quadrature = detail::finish(coarse, refined, samples);
    if (q.T > 1.0) out.ratio = out.quadrature.value / (q.T * std::pow(std::log(q.T), q.k * q.k));
    return out;
}

struct FxMomentQuery {
    double kappa = 0.6;
    double T = 50.0;
    double sigma_line = 2.0;
    double quad_step = 0.05;
    /// Throw pole-on-line instead of excluding windows.
    bool strict = false;
    unsigned threads = 1;

    void validate() const {
        require(std::isfinite(kappa) && kappa > 0.5 && kappa < 0.75, "kappa must lie in (1/2, 3/4)");
        require(std::isfinite(T) && T > 0.0, "T must be positive");
        require(std::isfinite(sigma_line) && sigma_line > 0.5, "sigma_line must exceed 1/2");
        require(std::isfinite(quad_step) && quad_step > 0.0 && quad_step <= 0.05, "quad_step must lie in (0, 0.05]");
    }
};

struct ExcludedWindow {
    double lo, hi;
    std::string cls;
};

struct FxMomentResult {
    QuadratureReport quadrature;
    std::vector<ExcludedWindow> excluded;
};

inline constexpr double kPoleWindow = 1e-3;

/// Poles of J K within 1e-3 of the line Re s = sigma with ordinate in
/// (-1e-3, T + 1e-3): S_1 at Re 1, S_rho-bar at Re 1/4, S_nu at Re 0.
inline std::vector<ExcludedWindow> poles_near_line(const SpectralParams& p, double sigma, double T) {
    std::vector<ExcludedWindow> out;
    auto consider = [&](Complex u, const char* cls) {
        if (std::abs(u.real() - sigma) < kPoleWindow && u.imag() > -kPoleWindow && u.imag() < T + kPoleWindow)
            out.push_back({u.imag() - kPoleWindow, u.imag() + kPoleWindow, cls});
    };
    for (const double a : {0.0, p.t1, -p.t2, p.delta()}) consider(Complex{1.0, a}, "S1");
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.lo < b.lo; });
    // Merge overlapping windows.
    std::vector<ExcludedWindow> merged;
    for (const auto& w : out) {
        if (!merged.empty() && w.lo <= merged.back().hi) merged.back().hi = std::max(merged.back().hi, w.hi);
        else merged.push_back(w);
    }
    return merged;
}

/// Simpson quadrature of |f_X(sigma_line + it)|^{1/kappa} over (0, T]
/// skipping 1e-3 windows around poles on the line.
inline FxMomentResult fX_moment(const FxMomentQuery& q, const SpectralParams& params) {
    q.validate();
    params.validate();
    FxMomentResult out;
    out.excluded = poles_near_line(params, q.sigma_line, q.T);
    if (q.strict && !out.excluded.empty()) {
        std::string list;
        for (const auto& w : out.excluded) list += (list.empty() ? "" : ", ") + ("[" + std::to_string(w.lo) + ", " + std::to_string(w.hi) + "]");
        fail(ErrorKind::pole_on_line, "integration line passes poles; excluded windows: " + list);
    }
    const MotohashiProduct product(params);
    const double power = 1.0 / q.kappa;
    const auto f = [&](double t) { return std::pow(std::abs(product.f_X({q.sigma_line, t})), power); };
    std::size_t samples = 0;
    double coarse = 0.0, refined = 0.0, a = 0.0;
    auto piece = [&](double lo, double hi) {
        const auto [c, r] = detail::simpson_pair(f, lo, hi, q.quad_step, q.threads, samples);
        coarse += c;
        refined += r;
    };
    for (const auto& w : out.excluded) {
        piece(a, std::max(a, w.lo));
        a = std::max(a, w.hi);
    }
    piece(a, q.T);
    out.quadrature = detail::finish(coarse, refined, samples);
    return out;
}

struct LargeValueRow {
    double t0, E0, sigma0;
    std::optional<double> abs_JK;
    std::string skip;  // class tag when the point was singular
};

struct LargeValueQuery {
    double t_lo = 0.0, t_hi = 0.0;
    double E_lo = 0.0, E_hi = 0.0;
    int t_points = 1, E_points = 1;
    /// Stand-in for log log T in sigma0 = 1 - E0 / scale.
    double scale = 1.0;
    unsigned threads = 1;

    void validate() const {
        require(std::isfinite(t_lo) && std::isfinite(t_hi) && t_lo <= t_hi, "t range must be finite with t_lo <= t_hi");
        require(std::isfinite(E_lo) && std::isfinite(E_hi) && E_lo <= E_hi, "E range must be finite with E_lo <= E_hi");
        require(t_points >= 1 && E_points >= 1, "grid sizes must be positive");
        require(static_cast<long>(t_points) * E_points <= 10000, "grid must have at most 1e4 points");
        require(std::isfinite(scale) && scale > 0.0, "scale must be positive");
    }
};

inline double grid_point(double lo, double hi, int n, int i) { return n == 1 ? lo : lo + (hi - lo) * i / (n - 1); }

/// |J K| at s0 = 1 - E0/scale + i t0 over the (t0, E0) grid, t0 outer.
inline std::vector<LargeValueRow> largevalue_scan(const SpectralParams& params, const LargeValueQuery& q,
                                                  const ZeroTable* zeros = nullptr) {
    params.validate();
    q.validate();
    const MotohashiProduct product(params, zeros);
    const std::size_t n = static_cast<std::size_t>(q.t_points) * q.E_points;
    return parallel_map(n, q.threads, [&](std::size_t idx) {
        LargeValueRow row;
        row.t0 = grid_point(q.t_lo, q.t_hi, q.t_points, static_cast<int>(idx / q.E_points));
        row.E0 = grid_point(q.E_lo, q.E_hi, q.E_points, static_cast<int>(idx % q.E_points));
        row.sigma0 = 1.0 - row.E0 / q.scale;
        try {
            const Complex s{row.sigma0, row.t0};
            row.abs_JK = std::abs(product.J(s) * product.K(s));
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::singularity && e.kind() != ErrorKind::local_pole &&
                e.kind() != ErrorKind::near_singularity && e.kind() != ErrorKind::pole_at_one)
                throw;
            row.skip = e.tag().empty() ? std::string(to_string(e.kind())) : e.tag();
        }
        return row;
    });
}

}  // namespace motohashi
