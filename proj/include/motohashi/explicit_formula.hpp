#pragma once

// Both sides of the smoothed explicit formula for Z'/Z:
//
//   Z'/Z(s) = sum_{n < x^3} Sigma_x(n) n^{-s}
//           + sum over poles u of Z    of k(u)
//           - sum over zeros u of Z    of k(u),
//   k(u) = x^{u-s} (1 - x^{u-s})^2 / (log^2 x (u-s)^3).

#include <algorithm>
#include <array>
#include <cmath>
#include <iterator>
#include <map>
#include <string>
#include <vector>

#include "arithmetic.hpp"
#include "errors.hpp"
#include "k_structure.hpp"
#include "parallel.hpp"
#include "product.hpp"
#include "singularity.hpp"
#include "zero_table.hpp"

namespace motohashi {

struct ExplicitFormulaParams {
    double x = 10.0;
    Complex s{3.0, 0.0};
    TruncationPolicy policy{};

    void validate() const {
        require(std::isfinite(x) && x > 1.0, "smoothing length x must exceed 1");
        require_finite(s, "s");
        policy.validate();
    }

    friend bool operator==(const ExplicitFormulaParams&, const ExplicitFormulaParams&) = default;
};

inline constexpr double kCoincidenceRadius = 1e-8;
inline constexpr double kAdmissibleDistance = 1e-6;

/// Order in which class partials are added: the pole sum, then the zero sum.
inline constexpr std::array<SingularityClass, 4> kPlusOrder = {SingularityClass::S1, SingularityClass::Srhobar,
                                                               SingularityClass::Sm2qbar, SingularityClass::Snu};
inline constexpr std::array<SingularityClass, 4> kMinusOrder = {SingularityClass::S1bar, SingularityClass::Srho,
                                                                SingularityClass::Sm2q, SingularityClass::Sr};

inline Complex kernel_term(Complex u, Complex s, double x) {
    require_finite(u, "u");
    require_finite(s, "s");
    require(std::isfinite(x) && x > 1.0, "smoothing length x must exceed 1");
    const Complex w = u - s;
    if (std::abs(w) < kCoincidenceRadius) fail(ErrorKind::coincidence, "kernel evaluated with u within 1e-8 of s");
    const double L = std::log(x);
    const Complex xw = std::exp(w * L);
    const Complex one_minus = 1.0 - xw;
    return xw * one_minus * one_minus / (L * L * w * w * w);
}

/// Kahan-compensated complex accumulator.
class CompensatedSum {
public:
    void add(Complex v) {
        re_.add(v.real());
        im_.add(v.imag());
    }
    Complex value() const { return {re_.sum, im_.sum}; }

private:
    struct Part {
        double sum = 0.0, carry = 0.0;
        void add(double v) {
            const double y = v - carry;
            const double t = sum + y;
            carry = (t - sum) - y;
            sum = t;
        }
    };
    Part re_, im_;
};

/// sum_{2 <= n < x^3} Sigma_x(n) n^{-s}, compensated, from the largest n down.
inline Complex dirichlet_side(const ExplicitFormulaParams& params, const CoefficientTable& table) {
    params.validate();
    if (table.kind != CoefficientKind::smoothed || !table.x || *table.x != params.x)
        fail(ErrorKind::parameter_mismatch, "Dirichlet side needs a Sigma_x table built with x = " + std::to_string(params.x));
    const std::size_t top = smoothing_range(params.x);
    if (top < 2) return {0.0, 0.0};
    if (table.nmax() < top) fail(ErrorKind::parameter_mismatch, "Sigma_x table does not reach n < x^3");
    CompensatedSum acc;
    for (std::size_t n = top; n >= 2; --n)
        if (table.values[n] != Complex{0.0, 0.0})
            acc.add(table.values[n] * std::exp(-params.s * std::log(static_cast<double>(n))));
    return acc.value();
}

/// Sigma_x table for a product and smoothing length.
inline CoefficientTable smoothed_table(const SpectralParams& params, double x) {
    const std::size_t top = std::max<std::size_t>(smoothing_range(x), 2);
    return selberg_smooth(log_deriv_coefficients(z_coefficients(params, top)), x);
}

struct ResidualReport {
    Complex s;
    double x = 0.0;
    Complex lhs;
    Complex dirichlet_sum;
    Complex kernel_sum_plus;
    Complex kernel_sum_minus;
    std::map<SingularityClass, Complex> per_class;
    std::map<SingularityClass, std::size_t> per_class_points;
    Complex residual;
    TruncationPolicy policy;
    std::size_t collisions = 0;

    Complex rhs() const { return dirichlet_sum + kernel_sum_plus - kernel_sum_minus; }
};

struct AssembleOptions {
    unsigned threads = 1;
    /// Swap the roles of the two kernel sums (sign-convention audit).
    bool flip_signs = false;
};

/// Residual of the explicit formula at params.s against a prepared
/// inventory and Sigma_x table. Refuses s within 1e-6 of any inventory
/// point.
inline ResidualReport rhs_assemble(const ExplicitFormulaParams& params, const MotohashiProduct& product,
                                   const SingularityInventory& inventory, const CoefficientTable& table,
                                   const AssembleOptions& opt = {}) {
    params.validate();
    if (!(inventory.params == product.params()) || !(table.params == product.params()))
        fail(ErrorKind::parameter_mismatch, "inventory, table and product were built for different spectral parameters");
    for (const auto& p : inventory.points)
        if (std::abs(p.location - params.s) < kAdmissibleDistance)
            fail(ErrorKind::singularity, "s lies within 1e-6 of a point of class " + std::string(to_string(p.cls)),
                 std::string(to_string(p.cls)));

    ResidualReport r;
    r.s = params.s;
    r.x = params.x;
    r.policy = inventory.truncation;
    r.collisions = inventory.collisions.size();
    r.lhs = product.Z_log_deriv(params.s);
    r.dirichlet_sum = dirichlet_side(params, table);

    const auto terms = parallel_map(inventory.points.size(), opt.threads, [&](std::size_t i) {
        const auto& p = inventory.points[i];
        return static_cast<double>(p.multiplicity) * kernel_term(p.location, params.s, params.x);
    });
    std::map<SingularityClass, CompensatedSum> partial;
    for (const auto c : kAllClasses) partial[c];
    for (std::size_t i = 0; i < terms.size(); ++i) {
        partial[inventory.points[i].cls].add(terms[i]);
        ++r.per_class_points[inventory.points[i].cls];
    }
    for (const auto c : kAllClasses) r.per_class[c] = partial[c].value();

    CompensatedSum plus, minus;
    for (const auto c : kPlusOrder) (opt.flip_signs ? minus : plus).add(r.per_class[c]);
    for (const auto c : kMinusOrder) (opt.flip_signs ? plus : minus).add(r.per_class[c]);
    r.kernel_sum_plus = plus.value();
    r.kernel_sum_minus = minus.value();
    r.residual = r.lhs - r.rhs();
    return r;
}

/// Reports for a list of evaluation points and truncation levels sharing
/// one product. S_nu/S_r enumerations are built once per (k_max, rect),
/// inventories once per policy and Sigma_x tables once per x.
inline std::vector<ResidualReport> residual_sweep(const std::vector<ExplicitFormulaParams>& list,
                                                  const MotohashiProduct& product, const ZeroTable& zeros,
                                                  const AssembleOptions& opt = {}) {
    std::vector<KSingularities> k_parts;
    std::vector<std::pair<TruncationPolicy, SingularityInventory>> inventories;
    std::vector<std::pair<double, CoefficientTable>> tables;
    std::vector<ResidualReport> out;
    out.reserve(list.size());
    for (const auto& params : list) {
        params.validate();
        auto inv = std::find_if(inventories.begin(), inventories.end(), [&](const auto& e) { return e.first == params.policy; });
        if (inv == inventories.end()) {
            auto kp = std::find_if(k_parts.begin(), k_parts.end(), [&](const KSingularities& k) {
                return k.k_max == params.policy.k_max && k.rect == params.policy.rect;
            });
            if (kp == k_parts.end()) {
                k_parts.push_back(enumerate_K_singularities(product, params.policy, opt.threads));
                kp = std::prev(k_parts.end());
            }
            inventories.emplace_back(params.policy, enumerate_singularities(product, params.policy, zeros, opt.threads, &*kp));
            inv = std::prev(inventories.end());
        }
        auto tab = std::find_if(tables.begin(), tables.end(), [&](const auto& e) { return e.first == params.x; });
        if (tab == tables.end()) {
            tables.emplace_back(params.x, smoothed_table(product.params(), params.x));
            tab = std::prev(tables.end());
        }
        out.push_back(rhs_assemble(params, product, inv->second, tab->second, opt));
    }
    return out;
}

namespace detail {

/// Upper bound for |k(u)| given Re(u - s) = a and |u - s| >= d.
inline double kernel_magnitude_bound(double a, double d, double L) {
    const double xa = std::exp(a * L);
    return xa * (1.0 + xa) * (1.0 + xa) / (L * L * d * d * d);
}

}  // namespace detail

/// Bound on the absolute sum of the zero-indexed kernel terms (S_rho and
/// S_rho-bar, both signs of gamma) discarded beyond gamma_max. Tabulated
/// ordinates are used as far as the table reaches; past it the count is
/// taken from N(T) ~ (T/2pi) log(T/2pi).
inline double kernel_tail_bound(const ExplicitFormulaParams& params, const SpectralParams& spectral, const ZeroTable& zeros) {
    params.validate();
    const double L = std::log(params.x);
    const double sigma = params.s.real(), t = params.s.imag();
    const double half_delta = 0.5 * spectral.delta();
    const double shifts[4] = {0.0, spectral.t1, -spectral.t2, spectral.delta()};

    // Bound for one ordinate g > 0 (both signs, all five points).
    auto per_zero = [&](double g) {
        double sum = 0.0;
        for (const double sg : {g, -g}) {
            for (const double a : shifts) {
                const double d = std::hypot(0.5 - sigma, sg + a - t);
                sum += detail::kernel_magnitude_bound(0.5 - sigma, d, L);
            }
            const double d = std::hypot(0.25 - sigma, 0.5 * sg + half_delta - t);
            sum += detail::kernel_magnitude_bound(0.25 - sigma, d, L);
        }
        return sum;
    };

    double total = 0.0;
    for (const double g : zeros.ordinates())
        if (g > params.policy.gamma_max) total += per_zero(g);

    // Continuous tail past the table with a distance floor that only
    // shrinks the denominators (safe side).
    const double start = std::max(params.policy.gamma_max, zeros.empty() ? 0.0 : zeros.max_ordinate());
    const double reach = std::abs(t) + std::max({std::abs(spectral.t1), std::abs(spectral.t2), std::abs(spectral.delta())});
    const double c = 2.0 * reach + 1.0;
    if (start > c + 1.0) {
        const double a_max = std::max(0.5 - sigma, 0.25 - sigma);
        const double xa = std::exp(a_max * L);
        const double amp = xa * (1.0 + xa) * (1.0 + xa) / (L * L);
        // Each ordinate T gives 8 points with |w| >= T - c and 2 points
        // with |w| >= (T - c)/2, so at most 24 amp / (T - c)^3. With
        // v = 1/(T - c) the tail integral becomes 24 amp v log(...) dv / 2 pi.
        const double v_max = 1.0 / (start - c);
        const int n = 2000;
        double acc = 0.0;
        for (int i = 0; i <= n; ++i) {
            const double v = v_max * i / n;
            const double f = (v == 0.0) ? 0.0 : v * std::max(0.0, std::log((c + 1.0 / v) / (2.0 * kPi))) / (2.0 * kPi);
            const double weight = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
            acc += weight * f;
        }
        total += 24.0 * amp * acc * v_max / (3.0 * n);
    }
    return total;
}

}  // namespace motohashi
