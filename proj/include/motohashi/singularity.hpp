#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "arithmetic.hpp"
#include "errors.hpp"
#include "special.hpp"

namespace motohashi {

/// The eight singularity classes of Z = J K. The enumerator order is the
/// canonical emission order.
enum class SingularityClass { S1, S1bar, Srho, Srhobar, Sm2q, Sm2qbar, Snu, Sr };

inline constexpr std::array<SingularityClass, 8> kAllClasses = {
    SingularityClass::S1,   SingularityClass::S1bar,   SingularityClass::Srho, SingularityClass::Srhobar,
    SingularityClass::Sm2q, SingularityClass::Sm2qbar, SingularityClass::Snu,  SingularityClass::Sr,
};

constexpr std::string_view to_string(SingularityClass c) noexcept {
    switch (c) {
        case SingularityClass::S1: return "S1";
        case SingularityClass::S1bar: return "S1bar";
        case SingularityClass::Srho: return "Srho";
        case SingularityClass::Srhobar: return "Srhobar";
        case SingularityClass::Sm2q: return "Sm2q";
        case SingularityClass::Sm2qbar: return "Sm2qbar";
        case SingularityClass::Snu: return "Snu";
        case SingularityClass::Sr: return "Sr";
    }
    return "?";
}

inline std::optional<SingularityClass> parse_singularity_class(std::string_view name) {
    for (const auto c : kAllClasses)
        if (to_string(c) == name) return c;
    return std::nullopt;
}

/// +1 for poles of Z (first kernel sum), -1 for zeros (second sum).
constexpr int class_sign(SingularityClass c) noexcept {
    switch (c) {
        case SingularityClass::S1:
        case SingularityClass::Srhobar:
        case SingularityClass::Sm2qbar:
        case SingularityClass::Snu: return +1;
        default: return -1;
    }
}

struct SingularityPoint {
    Complex location;
    SingularityClass cls;
    int sign;
    int multiplicity;
};

/// Canonical order: class, then imaginary part, then real part.
inline bool canonical_less(const SingularityPoint& a, const SingularityPoint& b) {
    return std::tuple(static_cast<int>(a.cls), a.location.imag(), a.location.real()) <
           std::tuple(static_cast<int>(b.cls), b.location.imag(), b.location.real());
}

struct Rect {
    double x0, x1, y0, y1;

    Rect() : x0(0), x1(1), y0(0), y1(1) {}
    Rect(double a, double b, double c, double d) : x0(a), x1(b), y0(c), y1(d) {
        require(std::isfinite(a) && std::isfinite(b) && std::isfinite(c) && std::isfinite(d), "rectangle bounds must be finite");
        require(x0 < x1 && y0 < y1, "rectangle must be nondegenerate (x0 < x1, y0 < y1)");
    }

    bool contains(Complex s) const noexcept {
        return s.real() > x0 && s.real() < x1 && s.imag() > y0 && s.imag() < y1;
    }

    /// Distance from s to the boundary polygon.
    double boundary_distance(Complex s) const noexcept {
        const double x = s.real(), y = s.imag();
        const double cx = std::clamp(x, x0, x1), cy = std::clamp(y, y0, y1);
        if (!contains(s)) return std::hypot(x - cx, y - cy);
        return std::min({x - x0, x1 - x, y - y0, y1 - y});
    }

    double width() const noexcept { return x1 - x0; }
    double height() const noexcept { return y1 - y0; }

    friend bool operator==(const Rect&, const Rect&) = default;
};

struct TruncationPolicy {
    double gamma_max = 200.0;
    int q_max = 50;
    int k_max = 200;
    Rect rect{-1.0, 3.0, -50.0, 50.0};

    void validate() const {
        require(std::isfinite(gamma_max) && gamma_max > 0.0, "gamma_max must be positive");
        require(q_max > 0, "q_max must be positive");
        require(k_max > 0, "k_max must be positive");
    }

    /// Defaults with the S_r search window centred on Im s.
    static TruncationPolicy defaults_for(Complex s) {
        TruncationPolicy p;
        p.rect = Rect(-1.0, 3.0, s.imag() - 50.0, s.imag() + 50.0);
        return p;
    }

    friend bool operator==(const TruncationPolicy&, const TruncationPolicy&) = default;
};

/// Two points of different classes closer than 1e-8.
struct Collision {
    SingularityPoint first;
    SingularityPoint second;
};

struct SingularityInventory {
    std::vector<SingularityPoint> points;  // canonical order
    TruncationPolicy truncation;
    SpectralParams params;
    std::vector<Collision> collisions;

    std::size_t count(SingularityClass c) const {
        std::size_t n = 0;
        for (const auto& p : points)
            if (p.cls == c) ++n;
        return n;
    }
};

}  // namespace motohashi
