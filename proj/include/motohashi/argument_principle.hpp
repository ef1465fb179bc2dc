#pragma once

// Winding numbers of meromorphic functions along closed polygons. The
// callable returns the function value together with its logarithmic
// derivative; the latter bounds how far the argument can move between
// samples, so each edge is refined until both the observed argument step
// and h * |f'/f| are small.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "errors.hpp"
#include "singularity.hpp"
#include "special.hpp"

namespace motohashi {

struct LogJet {
    Complex value;
    Complex log_deriv;
};

struct WindingOptions {
    /// Initial sample spacing along each edge.
    double initial_step = 0.25;
    /// Accepted argument increment per step, and accepted h * |f'/f|.
    double max_arg_step = 0.5;
    /// Refinement below this step means a zero or pole sits on the path.
    double min_step = 1e-7;
    /// Largest distance of the accumulated winding from an integer.
    double integer_tolerance = 0.1;
    /// Known singularities. A pole with a zero next to it is invisible from
    /// a distance, so edges are sampled no coarser than half their distance
    /// to the nearest hazard.
    std::vector<Complex> hazards;
};

namespace detail {

inline double segment_distance(Complex p, Complex a, Complex b) {
    const Complex d = b - a;
    const double len2 = std::norm(d);
    const double t = len2 > 0.0 ? std::clamp(((p - a) * std::conj(d)).real() / len2, 0.0, 1.0) : 0.0;
    return std::abs(p - (a + t * d));
}

inline double hazard_distance(const std::vector<Complex>& hazards, Complex a, Complex b) {
    double best = INFINITY;
    for (const auto& h : hazards) best = std::min(best, segment_distance(h, a, b));
    return best;
}

template <class F>
double edge_argument(const F& f, Complex a, Complex b, const LogJet& fa, const LogJet& fb, const WindingOptions& opt,
                     int depth) {
    const double h = std::abs(b - a);
    const double step = std::arg(fb.value / fa.value);
    const double bound = h * std::max(std::abs(fa.log_deriv), std::abs(fb.log_deriv));
    const bool near_hazard = !opt.hazards.empty() && h > 0.5 * hazard_distance(opt.hazards, a, b);
    if (std::abs(step) < opt.max_arg_step && bound < opt.max_arg_step && !near_hazard) return step;
    if (h < opt.min_step || depth > 80)
        fail(ErrorKind::boundary_too_close, "a zero or pole of the function lies too close to the contour");
    const Complex m = 0.5 * (a + b);
    const LogJet fm = f(m);
    if (!is_finite(fm.value) || fm.value == Complex{0.0, 0.0})
        fail(ErrorKind::boundary_too_close, "function vanishes or is singular on the contour");
    return edge_argument(f, a, m, fa, fm, opt, depth + 1) + edge_argument(f, m, b, fm, fb, opt, depth + 1);
}

}  // namespace detail

/// Net change of arg f along the closed polygon, in units of 2 pi. Not
/// rounded.
template <class F>
double winding_raw(const F& f, const std::vector<Complex>& polygon, const WindingOptions& opt = {}) {
    require(polygon.size() >= 3, "winding needs a polygon with at least 3 vertices");
    double total = 0.0;
    for (std::size_t e = 0; e < polygon.size(); ++e) {
        const Complex a = polygon[e];
        const Complex b = polygon[(e + 1) % polygon.size()];
        const int pieces = std::max(1, static_cast<int>(std::ceil(std::abs(b - a) / opt.initial_step)));
        Complex prev = a;
        LogJet fprev = f(prev);
        if (!is_finite(fprev.value) || fprev.value == Complex{0.0, 0.0})
            fail(ErrorKind::boundary_too_close, "function vanishes or is singular on the contour");
        for (int i = 1; i <= pieces; ++i) {
            const Complex next = (i == pieces) ? b : a + (b - a) * (static_cast<double>(i) / pieces);
            const LogJet fnext = f(next);
            if (!is_finite(fnext.value) || fnext.value == Complex{0.0, 0.0})
                fail(ErrorKind::boundary_too_close, "function vanishes or is singular on the contour");
            total += detail::edge_argument(f, prev, next, fprev, fnext, opt, 0);
            prev = next;
            fprev = fnext;
        }
    }
    return total / (2.0 * std::numbers::pi);
}

/// Integer winding number; inconclusive when the accumulated argument is
/// not within the tolerance of an integer.
template <class F>
int winding_number(const F& f, const std::vector<Complex>& polygon, const WindingOptions& opt = {}) {
    const double w = winding_raw(f, polygon, opt);
    const double r = std::round(w);
    if (std::abs(w - r) > opt.integer_tolerance)
        fail(ErrorKind::inconclusive, "winding " + std::to_string(w) + " is not within tolerance of an integer");
    return static_cast<int>(r);
}

/// Counter-clockwise corners of a rectangle.
inline std::vector<Complex> rect_polygon(const Rect& r) {
    return {Complex{r.x0, r.y0}, Complex{r.x1, r.y0}, Complex{r.x1, r.y1}, Complex{r.x0, r.y1}};
}

/// Regular polygon approximating a circle, counter-clockwise.
inline std::vector<Complex> circle_polygon(Complex centre, double radius, int vertices) {
    std::vector<Complex> out;
    out.reserve(vertices);
    for (int j = 0; j < vertices; ++j) out.push_back(centre + std::polar(radius, 2.0 * std::numbers::pi * j / vertices));
    return out;
}

/// (1/2 pi i) of the contour integral of f'/f over a circle by the
/// equispaced trapezoid rule: the mean of (f'/f)(s_j) (s_j - c). Exact for
/// a pole or zero at the centre; other singularities must lie well outside.
template <class F>
double circle_winding_trapezoid(const F& log_deriv, Complex centre, double radius, int points) {
    Complex acc{0.0, 0.0};
    for (int j = 0; j < points; ++j) {
        const Complex d = std::polar(radius, 2.0 * std::numbers::pi * j / points);
        acc += log_deriv(centre + d) * d;
    }
    return (acc / static_cast<double>(points)).real();
}

}  // namespace motohashi
