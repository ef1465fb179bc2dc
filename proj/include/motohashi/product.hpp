#pragma once

// Analytic side of Motohashi's product Z(s) = J(s, T1, T2) K(s, T1, T2).
//
//   J = zeta(s) zeta(s - iT1) zeta(s + iT2) zeta(s - i(T1 - T2)) / zeta(2s - i(T1 - T2))
//   K = sum_{d < z^2} lambda_d(z) P_d(s),   P_d = prod_{p | d} g_p(s)
//   g_p = 1 - (1 - p^-s)(1 - p^-(s-iT1))(1 - p^-(s+iT2))(1 - p^-(s-i(T1-T2))) / (1 - p^-(2s-i(T1-T2)))
//
// K has poles only on Re s = 0, at nu = i(pi k / log p + (T1 - T2)/2).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "arithmetic.hpp"
#include "errors.hpp"
#include "singularity.hpp"
#include "special.hpp"
#include "zero_table.hpp"
#include "zeta.hpp"

namespace motohashi {

/// Value and s-derivative of a holomorphic function at one point.
struct Jet {
    Complex value;
    Complex derivative;
};

struct KValue {
    Complex value;
    Complex derivative;
    /// sum_d |lambda_d P_d(s)|, the size of the terms K is built from.
    double scale;

    Complex log_deriv() const { return derivative / value; }
};

/// A point of the closed-form grid i(pi k / log p + delta/2) and the
/// (p, k) pairs that produce it. Only k = 0 is shared between primes.
struct PoleCandidate {
    Complex location;
    std::vector<std::pair<std::uint32_t, long>> sources;
};

class MotohashiProduct {
public:
    static constexpr double kLocalPoleTolerance = 1e-10;
    static constexpr double kEvalExclusion = 1e-8;
    static constexpr double kLogDerivExclusion = 1e-6;

    explicit MotohashiProduct(SpectralParams params, const ZeroTable* zeros = nullptr)
        : params_(params), weights_(params), zeros_(zeros) {
        shifts_ = {Complex{0.0, 0.0}, Complex{0.0, params_.t1}, Complex{0.0, -params_.t2},
                   Complex{0.0, params_.delta()}};
        for (const auto& e : weights_.entries()) {
            std::vector<std::uint16_t> idx;
            for (const auto p : e.primes)
                idx.push_back(static_cast<std::uint16_t>(
                    std::lower_bound(weights_.primes().begin(), weights_.primes().end(), p) - weights_.primes().begin()));
            factor_index_.push_back(std::move(idx));
        }
    }

    const SpectralParams& params() const noexcept { return params_; }
    const MollifierWeights& weights() const noexcept { return weights_; }
    const ZeroTable* zeros() const noexcept { return zeros_; }
    bool trivial_mollifier() const noexcept { return weights_.trivial(); }

    /// Grid point of prime p nearest to s, with its index k.
    std::pair<Complex, long> nearest_grid_point(std::uint32_t p, Complex s) const {
        const double logp = std::log(static_cast<double>(p));
        const double half = 0.5 * params_.delta();
        const long k = std::lround((s.imag() - half) * logp / kPi);
        return {Complex{0.0, kPi * static_cast<double>(k) / logp + half}, k};
    }

    /// Nearest closed-form pole candidate of K (over primes p < z^2).
    std::optional<PoleCandidate> nearest_pole_candidate(Complex s) const {
        std::optional<PoleCandidate> best;
        double best_dist = INFINITY;
        for (const auto p : weights_.primes()) {
            const auto [nu, k] = nearest_grid_point(p, s);
            const double d = std::abs(s - nu);
            if (d < best_dist - 1e-15) {
                best_dist = d;
                best = PoleCandidate{nu, {{p, k}}};
            } else if (std::abs(d - best_dist) <= 1e-15 && best) {
                best->sources.emplace_back(p, k);
            }
        }
        return best;
    }

    /// All grid points with ordinate in [y0, y1] (|k| <= k_max when given),
    /// sorted by ordinate, k = 0 merged across primes.
    std::vector<PoleCandidate> pole_candidates(double y0, double y1, long k_max = -1) const {
        std::vector<PoleCandidate> out;
        const double half = 0.5 * params_.delta();
        bool have_zero = false;
        PoleCandidate zero{Complex{0.0, half}, {}};
        for (const auto p : weights_.primes()) {
            const double logp = std::log(static_cast<double>(p));
            long k_lo = static_cast<long>(std::ceil((y0 - half) * logp / kPi));
            long k_hi = static_cast<long>(std::floor((y1 - half) * logp / kPi));
            if (k_max >= 0) k_lo = std::max(k_lo, -k_max), k_hi = std::min(k_hi, k_max);
            for (long k = k_lo; k <= k_hi; ++k) {
                if (k == 0) {
                    have_zero = true;
                    zero.sources.emplace_back(p, 0);
                    continue;
                }
                out.push_back({Complex{0.0, kPi * static_cast<double>(k) / logp + half}, {{p, k}}});
            }
        }
        if (have_zero) out.push_back(std::move(zero));
        std::sort(out.begin(), out.end(),
                  [](const PoleCandidate& a, const PoleCandidate& b) { return a.location.imag() < b.location.imag(); });
        return out;
    }

    /// g_p(s) and g_p'(s). Throws local-pole when p^{2s - i(T1-T2)} is within
    /// 1e-10 of 1.
    Jet local_factor(std::uint32_t p, Complex s) const {
        require_finite(s, "s");
        const double logp = std::log(static_cast<double>(p));
        const Complex w = 2.0 * s - Complex{0.0, params_.delta()};
        const Complex Y = std::exp(-w * logp);
        if (std::abs(1.0 - Y) < kLocalPoleTolerance) {
            const auto [nu, k] = nearest_grid_point(p, s);
            (void)nu;
            fail(ErrorKind::local_pole,
                 "local factor of p = " + std::to_string(p) + " has a pole (k = " + std::to_string(k) + ")", "Snu");
        }
        if (std::abs(Y) <= 1.0) {
            std::array<Complex, 4> one_minus{};
            std::array<Complex, 4> dfac{};
            for (int j = 0; j < 4; ++j) {
                const Complex X = std::exp(-(s - shifts_[j]) * logp);
                one_minus[j] = 1.0 - X;
                dfac[j] = logp * X;  // d/ds (1 - X)
            }
            const auto [N, dN] = product_rule(one_minus, dfac);
            const Complex D = 1.0 - Y;
            const Complex dD = 2.0 * logp * Y;
            return {1.0 - N / D, -(dN * D - N * dD) / (D * D)};
        }
        // Far left: N/D = -Y prod(u_j - 1) / (1 - 1/Y) with u_j = p^{s - a_j}.
        std::array<Complex, 4> u_minus{};
        std::array<Complex, 4> dfac{};
        for (int j = 0; j < 4; ++j) {
            const Complex u = std::exp((s - shifts_[j]) * logp);
            u_minus[j] = u - 1.0;
            dfac[j] = logp * u;
        }
        const auto [M, dM] = product_rule(u_minus, dfac);
        const Complex v = 1.0 / Y;
        const Complex dY = -2.0 * logp * Y;
        const Complex dv = 2.0 * logp * v;
        const Complex inv = 1.0 / (1.0 - v);
        const Complex R = -Y * M * inv;
        const Complex dR = -(dY * M * inv + Y * dM * inv + Y * M * dv * inv * inv);
        return {1.0 - R, -dR};
    }

    /// K(s) with derivative. Throws local-pole within 1e-8 of a grid point.
    KValue K_full(Complex s) const {
        require_finite(s, "s");
        if (weights_.trivial()) return {Complex{1.0, 0.0}, Complex{0.0, 0.0}, 1.0};
        check_pole_distance(s, kEvalExclusion);
        const auto& primes = weights_.primes();
        std::vector<Jet> g(primes.size());
        for (std::size_t i = 0; i < primes.size(); ++i) g[i] = local_factor(primes[i], s);

        Complex value{0.0, 0.0}, derivative{0.0, 0.0};
        double scale = 0.0;
        const auto& entries = weights_.entries();
        for (std::size_t e = 0; e < entries.size(); ++e) {
            Complex P{1.0, 0.0}, dP{0.0, 0.0};
            for (const auto i : factor_index_[e]) {
                dP = dP * g[i].value + P * g[i].derivative;
                P *= g[i].value;
            }
            value += entries[e].lambda * P;
            derivative += entries[e].lambda * dP;
            scale += std::abs(entries[e].lambda * P);
        }
        return {value, derivative, scale};
    }

    Complex K(Complex s) const { return K_full(s).value; }

    Complex K_log_deriv(Complex s) const {
        const KValue k = K_full(s);
        return k.derivative / k.value;
    }

    /// Class of the J-singularity within `radius` of s, if any. Tabulated
    /// zeros are only recognised when a zero table was supplied.
    std::optional<SingularityClass> J_singularity_near(Complex s, double radius) const {
        const double delta = params_.delta();
        for (const auto& a : shifts_)
            if (std::abs(s - (1.0 + a)) < radius) return SingularityClass::S1;
        if (std::abs(s - Complex{0.5, 0.5 * delta}) < radius) return SingularityClass::S1bar;
        const Complex w = 2.0 * s - Complex{0.0, delta};
        if (is_critical_zero(w, 2.0 * radius)) return SingularityClass::Srhobar;
        if (is_trivial_zero(w, 2.0 * radius)) return SingularityClass::Sm2qbar;
        for (const auto& a : shifts_) {
            const Complex v = s - a;
            if (is_critical_zero(v, radius)) return SingularityClass::Srho;
            if (is_trivial_zero(v, radius)) return SingularityClass::Sm2q;
        }
        return std::nullopt;
    }

    /// Quotient of five zeta values. Throws singularity (tagged with the
    /// class) within 1e-8 of S1, S1bar, Srhobar or Sm2qbar.
    Complex J(Complex s) const {
        require_finite(s, "s");
        if (const auto c = J_singularity_near(s, kEvalExclusion)) {
            if (*c == SingularityClass::S1 || *c == SingularityClass::S1bar || *c == SingularityClass::Srhobar ||
                *c == SingularityClass::Sm2qbar)
                singular(*c, s);
        }
        Complex num{1.0, 0.0};
        for (const auto& a : shifts_) num *= zeta(s - a);
        return num / zeta(2.0 * s - Complex{0.0, params_.delta()});
    }

    /// J'/J as the sum of the five zeta'/zeta terms.
    Complex J_log_deriv(Complex s) const {
        require_finite(s, "s");
        if (const auto c = J_singularity_near(s, kLogDerivExclusion)) singular(*c, s);
        Complex sum{0.0, 0.0};
        for (const auto& a : shifts_) sum += zeta_log_deriv(s - a);
        return sum - 2.0 * zeta_log_deriv(2.0 * s - Complex{0.0, params_.delta()});
    }

    /// Z'/Z = J'/J + K'/K. Refuses points within 1e-6 of any singularity
    /// class (zeros of K are detected through the Newton distance |K/K'|).
    Complex Z_log_deriv(Complex s) const {
        const Complex j = J_log_deriv(s);
        if (weights_.trivial()) return j;
        check_pole_distance(s, kLogDerivExclusion);
        const KValue k = K_full(s);
        if (k.value == Complex{0.0, 0.0} || std::abs(k.value) < kLogDerivExclusion * std::abs(k.derivative))
            singular(SingularityClass::Sr, s);
        return j + k.derivative / k.value;
    }

    Complex f_X(Complex s) const { return J(s) * K(s) - 1.0; }

private:
    static std::pair<Complex, Complex> product_rule(const std::array<Complex, 4>& f, const std::array<Complex, 4>& df) {
        Complex P{1.0, 0.0}, dP{0.0, 0.0};
        for (int j = 0; j < 4; ++j) {
            dP = dP * f[j] + P * df[j];
            P *= f[j];
        }
        return {P, dP};
    }

    bool is_critical_zero(Complex w, double radius) const {
        return zeros_ && std::abs(w.real() - 0.5) < radius && zeros_->distance_to_nearest(w.imag()) < radius;
    }

    static bool is_trivial_zero(Complex w, double radius) {
        if (w.real() > -1.0) return false;
        const double q = std::round(-w.real() / 2.0);
        return q >= 1.0 && std::abs(w - Complex{-2.0 * q, 0.0}) < radius;
    }

    void check_pole_distance(Complex s, double radius) const {
        if (std::abs(s.real()) >= radius) return;
        if (const auto c = nearest_pole_candidate(s); c && std::abs(s - c->location) < radius) {
            const auto [p, k] = c->sources.front();
            fail(ErrorKind::local_pole,
                 "s is within " + std::to_string(radius) + " of the local pole of p = " + std::to_string(p) + ", k = " + std::to_string(k),
                 "Snu");
        }
    }

    [[noreturn]] static void singular(SingularityClass c, Complex s) {
        fail(ErrorKind::singularity,
             "s = " + std::to_string(s.real()) + (s.imag() < 0 ? " - " : " + ") + std::to_string(std::abs(s.imag())) +
                 "i lies on singularity class " + std::string(to_string(c)),
             std::string(to_string(c)));
    }

    SpectralParams params_;
    MollifierWeights weights_;
    const ZeroTable* zeros_;
    std::array<Complex, 4> shifts_{};
    std::vector<std::vector<std::uint16_t>> factor_index_;
};

// Free-function forms of the product operations.

inline Jet local_factor(std::uint32_t p, Complex s, const SpectralParams& params) {
    return MotohashiProduct(params).local_factor(p, s);
}
inline Complex K_eval(Complex s, const SpectralParams& params) { return MotohashiProduct(params).K(s); }
inline Complex J_eval(Complex s, const SpectralParams& params, const ZeroTable* zeros = nullptr) {
    return MotohashiProduct(params, zeros).J(s);
}
inline Complex Z_log_deriv(Complex s, const SpectralParams& params, const ZeroTable* zeros = nullptr) {
    return MotohashiProduct(params, zeros).Z_log_deriv(s);
}
inline Complex f_X_eval(Complex s, const SpectralParams& params) { return MotohashiProduct(params).f_X(s); }

}  // namespace motohashi
