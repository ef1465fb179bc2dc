#pragma once

// Poles and zeros of K and the singularity inventory of Z = J K.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "argument_principle.hpp"
#include "errors.hpp"
#include "parallel.hpp"
#include "product.hpp"
#include "singularity.hpp"
#include "zero_table.hpp"

namespace motohashi {

struct ResidueDiagnostics {
    /// Pole order of K at the candidate, 0 when K is regular there.
    int multiplicity = 0;
    double outer_radius = 0.0;
    double inner_radius = 0.0;
    /// Raw windings of K (negative for poles) on the innermost two circles.
    double outer_winding = 0.0;
    double inner_winding = 0.0;
    /// Leading Laurent coefficient lim (s - nu)^order K(s).
    Complex leading{0.0, 0.0};
    /// Every radius tried, outermost first, with its raw winding.
    std::vector<double> radii;
    std::vector<double> windings;
};

namespace detail {

inline constexpr double kGridTolerance = 1e-9;
inline constexpr int kCirclePoints = 32;
inline constexpr double kResidueFloor = 1e-8;
// Stays clear of the 1e-8 evaluation exclusion around grid points.
inline constexpr double kMinCircleRadius = 5e-8;

inline LogJet k_jet(const MotohashiProduct& product, Complex s) {
    const KValue k = product.K_full(s);
    return {k.value, k.derivative / k.value};
}

/// Distance from a grid point to the nearest different grid point.
inline double grid_neighbour_distance(const MotohashiProduct& product, Complex nu) {
    double best = INFINITY;
    const double half = 0.5 * product.params().delta();
    for (const auto p : product.weights().primes()) {
        const double logp = std::log(static_cast<double>(p));
        const double spacing = kPi / logp;
        const double k0 = std::round((nu.imag() - half) / spacing);
        for (double k = k0 - 1.0; k <= k0 + 1.0; k += 1.0) {
            const double d = std::abs(k * spacing + half - nu.imag());
            if (d > kGridTolerance) best = std::min(best, d);
        }
    }
    return best;
}

inline int rounded_winding(double w) {
    const double r = std::round(w);
    if (std::abs(w - r) > 0.1)
        fail(ErrorKind::inconclusive, "circle winding " + std::to_string(w) + " is not near an integer");
    return static_cast<int>(r);
}

}  // namespace detail

/// Decides whether a closed-form grid point nu = i(pi k/log p + delta/2) is
/// a genuine pole of K, and of which order. The winding of K on circles of
/// radius r, r/10, ..., r/10^4 (r = 1e-3, shrunk when another grid point
/// is nearby; radii below 5e-8 dropped) is taken by a 32-point trapezoid. A zero of K often sits
/// 1e-4 or closer to a weak pole, so the order is read from the innermost
/// pair, which must agree. A leading Laurent coefficient below 1e-8 counts
/// as cancellation.
inline ResidueDiagnostics residue_diagnostics(const MotohashiProduct& product, Complex candidate) {
    require_finite(candidate, "candidate");
    ResidueDiagnostics out;
    if (product.trivial_mollifier()) return out;
    const auto nearest = product.nearest_pole_candidate(candidate);
    if (!nearest || std::abs(candidate - nearest->location) > detail::kGridTolerance)
        fail(ErrorKind::precondition, "candidate is not on the closed-form pole grid of K");
    const Complex nu = nearest->location;

    const auto log_deriv = [&](Complex s) { return product.K_log_deriv(s); };
    double r = std::min(1e-3, detail::grid_neighbour_distance(product, nu) / 3.0);
    for (int j = 0; j < 5 && r >= detail::kMinCircleRadius; ++j, r /= 10.0) {
        out.radii.push_back(r);
        out.windings.push_back(circle_winding_trapezoid(log_deriv, nu, r, detail::kCirclePoints));
    }
    const std::size_t n = out.radii.size();
    if (n < 2) fail(ErrorKind::inconclusive, "pole grid points too close together to separate by circles");
    out.outer_radius = out.radii[n - 2];
    out.inner_radius = out.radii[n - 1];
    out.outer_winding = out.windings[n - 2];
    out.inner_winding = out.windings[n - 1];
    const int order_outer = -detail::rounded_winding(out.outer_winding);
    const int order_inner = -detail::rounded_winding(out.inner_winding);
    if (order_outer != order_inner)
        fail(ErrorKind::inconclusive, "pole order disagrees between radii (" + std::to_string(order_outer) + " vs " +
                                          std::to_string(order_inner) + ")");
    if (order_inner <= 0) return out;

    Complex acc{0.0, 0.0};
    for (int j = 0; j < detail::kCirclePoints; ++j) {
        const Complex d = std::polar(out.inner_radius, 2.0 * kPi * j / detail::kCirclePoints);
        acc += std::pow(d, order_inner) * product.K(nu + d);
    }
    out.leading = acc / static_cast<double>(detail::kCirclePoints);
    out.multiplicity = std::abs(out.leading) < detail::kResidueFloor ? 0 : order_inner;
    return out;
}

inline int residue_filter(const MotohashiProduct& product, Complex candidate) {
    return residue_diagnostics(product, candidate).multiplicity;
}

struct KPole {
    Complex location;
    int multiplicity;
};

struct LocatedZero {
    Complex location;
    int multiplicity;
};

struct ZeroSearchOptions {
    /// The rectangle is first cut into initial_grid x initial_grid cells.
    int initial_grid = 1;
    /// Cells smaller than this with a count above one hold a multiple zero.
    double min_cell = 1e-6;
    int max_depth = 60;
    /// Required distance between the outer boundary and any pole.
    double boundary_clearance = 1e-4;
    unsigned threads = 1;
    WindingOptions winding{};
};

struct ZeroSearchResult {
    std::vector<LocatedZero> zeros;  // sorted by (Im, Re)
    std::vector<KPole> poles;        // poles strictly inside, sorted by Im
    int boundary_winding = 0;        // winding of K on the rectangle
};

/// Genuine poles of K strictly inside `rect` (residue-filtered grid points).
/// Throws boundary-too-close when a grid point lies within `clearance` of
/// the boundary.
inline std::vector<KPole> K_poles_in(const MotohashiProduct& product, const Rect& rect, double clearance = 1e-4,
                                     unsigned threads = 1) {
    if (product.trivial_mollifier()) return {};
    if (rect.x0 > clearance || rect.x1 < -clearance) return {};
    auto candidates = product.pole_candidates(rect.y0 - clearance, rect.y1 + clearance);
    for (const auto& c : candidates)
        if (rect.boundary_distance(c.location) < clearance)
            fail(ErrorKind::boundary_too_close, "rectangle boundary passes within " + std::to_string(clearance) +
                                                    " of the pole candidate at i*" + std::to_string(c.location.imag()));
    std::erase_if(candidates, [&](const PoleCandidate& c) { return !rect.contains(c.location); });
    const auto orders = parallel_map(candidates.size(), threads,
                                     [&](std::size_t i) { return residue_filter(product, candidates[i].location); });
    std::vector<KPole> out;
    for (std::size_t i = 0; i < candidates.size(); ++i)
        if (orders[i] > 0) out.push_back({candidates[i].location, orders[i]});
    return out;
}

/// Winding number of K along the boundary of `rect`.
inline int K_winding(const MotohashiProduct& product, const Rect& rect, const WindingOptions& opt = {}) {
    if (product.trivial_mollifier()) return 0;
    WindingOptions o = opt;
    if (o.hazards.empty())
        for (const auto& c : product.pole_candidates(rect.y0 - 1.0, rect.y1 + 1.0)) o.hazards.push_back(c.location);
    return winding_number([&](Complex s) { return detail::k_jet(product, s); }, rect_polygon(rect), o);
}

namespace detail {

class ZeroSearch {
public:
    // Removable grid points are avoided too: K is not evaluated next to them.
    ZeroSearch(const MotohashiProduct& product, const Rect& rect, std::vector<KPole> poles, const ZeroSearchOptions& opt)
        : product_(product), poles_(std::move(poles)), opt_(opt) {
        for (const auto& c : product.pole_candidates(rect.y0 - 1.0, rect.y1 + 1.0)) {
            grid_.push_back(c.location);
            opt_.winding.hazards.push_back(c.location);
        }
    }

    int winding(const Rect& r) const {
        return winding_number([&](Complex s) { return k_jet(product_, s); }, rect_polygon(r), opt_.winding);
    }

    void process(const Rect& cell, int cell_winding, int depth) {
        const int inside = poles_inside(cell);
        const int count = cell_winding + inside;
        if (count < 0) fail(ErrorKind::inconclusive, "cell has more poles than the residue filter reported");
        if (count == 0) return;
        const bool tiny = std::max(cell.width(), cell.height()) < opt_.min_cell;
        if (count == 1 || tiny) {
            if (const auto root = newton(cell)) {
                zeros_.push_back({*root, count});
                return;
            }
            if (tiny) fail(ErrorKind::non_convergence, "Newton iteration failed in a minimal cell");
        }
        if (depth >= opt_.max_depth) fail(ErrorKind::non_convergence, "zero isolation exceeded the subdivision depth");
        split(cell, cell_winding, depth);
    }

    std::vector<LocatedZero> take_zeros() { return std::move(zeros_); }

    /// True when the vertical line x = c or horizontal line y = c (within
    /// cell) passes too close to a pole.
    bool line_near_pole(const Rect& cell, double c, bool vertical) const {
        const double clear = 0.02 * std::min(cell.width(), cell.height());
        for (const auto& g : grid_) {
            const double x = g.real(), y = g.imag();
            if (vertical) {
                if (std::abs(x - c) < clear && y > cell.y0 - clear && y < cell.y1 + clear) return true;
            } else {
                if (std::abs(y - c) < clear && x > cell.x0 - clear && x < cell.x1 + clear) return true;
            }
        }
        return false;
    }

private:
    int poles_inside(const Rect& cell) const {
        int n = 0;
        for (const auto& p : poles_)
            if (cell.contains(p.location)) n += p.multiplicity;
        return n;
    }

    std::optional<Complex> newton(const Rect& cell) const {
        Complex s{0.5 * (cell.x0 + cell.x1), 0.5 * (cell.y0 + cell.y1)};
        const double size = std::max(cell.width(), cell.height());
        try {
            for (int iter = 0; iter < 200; ++iter) {
                const KValue k = product_.K_full(s);
                if (k.value == Complex{0.0, 0.0}) break;
                const Complex step = k.value / k.derivative;
                if (!is_finite(step)) return std::nullopt;
                s -= step;
                if (std::abs(s - Complex{0.5 * (cell.x0 + cell.x1), 0.5 * (cell.y0 + cell.y1)}) > 4.0 * size) return std::nullopt;
                if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(s))) break;
            }
        } catch (const Error&) {
            return std::nullopt;
        }
        const double margin = 1e-10 * std::max(1.0, size);
        if (s.real() < cell.x0 - margin || s.real() > cell.x1 + margin || s.imag() < cell.y0 - margin ||
            s.imag() > cell.y1 + margin)
            return std::nullopt;
        const KValue k = product_.K_full(s);
        if (std::abs(k.value) > 1e-9 * std::max(1.0, k.scale)) return std::nullopt;
        return s;
    }

    void split(const Rect& cell, int cell_winding, int depth) {
        static constexpr double kFractions[] = {0.5, 0.45, 0.55, 0.4, 0.6, 0.35, 0.65, 0.3, 0.7};
        for (const double fx : kFractions) {
            const double cx = cell.x0 + fx * cell.width();
            if (line_near_pole(cell, cx, true)) continue;
            for (const double fy : kFractions) {
                const double cy = cell.y0 + fy * cell.height();
                if (line_near_pole(cell, cy, false)) continue;
                const Rect kids[4] = {Rect(cell.x0, cx, cell.y0, cy), Rect(cx, cell.x1, cell.y0, cy),
                                      Rect(cell.x0, cx, cy, cell.y1), Rect(cx, cell.x1, cy, cell.y1)};
                int w[4];
                try {
                    for (int i = 0; i < 4; ++i) w[i] = winding(kids[i]);
                } catch (const Error& e) {
                    if (e.kind() == ErrorKind::boundary_too_close || e.kind() == ErrorKind::inconclusive) continue;
                    throw;
                }
                if (w[0] + w[1] + w[2] + w[3] != cell_winding) continue;
                for (int i = 0; i < 4; ++i) process(kids[i], w[i], depth + 1);
                return;
            }
        }
        fail(ErrorKind::inconclusive, "could not split a cell without crossing a zero or pole");
    }

    const MotohashiProduct& product_;
    std::vector<KPole> poles_;
    std::vector<Complex> grid_;
    ZeroSearchOptions opt_;
    std::vector<LocatedZero> zeros_;
};

}  // namespace detail

/// Zeros of K in `rect` with multiplicity: argument-principle counts on
/// recursively quadrisected cells (known poles added back), Newton polish
/// once a cell holds a single zero, and a small-circle winding to confirm
/// each multiplicity.
inline ZeroSearchResult find_K_zeros(const MotohashiProduct& product, const Rect& rect, const ZeroSearchOptions& opt = {}) {
    ZeroSearchResult result;
    if (product.trivial_mollifier()) return result;
    require(opt.initial_grid >= 1, "initial grid must be at least 1");
    result.poles = K_poles_in(product, rect, opt.boundary_clearance, opt.threads);
    detail::ZeroSearch search(product, rect, result.poles, opt);
    result.boundary_winding = search.winding(rect);

    // Initial grid lines, nudged off the pole line/ordinates.
    auto lines = [&](double lo, double hi, bool vertical) {
        std::vector<double> out{lo};
        for (int i = 1; i < opt.initial_grid; ++i) {
            double c = lo + (hi - lo) * i / opt.initial_grid;
            for (int nudge = 1; search.line_near_pole(rect, c, vertical) && nudge < 50; ++nudge)
                c += (hi - lo) * 1e-3 * nudge * ((nudge % 2) ? 1.0 : -1.0);
            out.push_back(c);
        }
        out.push_back(hi);
        return out;
    };
    const auto xs = lines(rect.x0, rect.x1, true);
    const auto ys = lines(rect.y0, rect.y1, false);
    int total = 0;
    std::vector<std::pair<Rect, int>> cells;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i)
        for (std::size_t j = 0; j + 1 < ys.size(); ++j) {
            const Rect cell(xs[i], xs[i + 1], ys[j], ys[j + 1]);
            const int w = (opt.initial_grid == 1) ? result.boundary_winding : search.winding(cell);
            total += w;
            cells.emplace_back(cell, w);
        }
    if (total != result.boundary_winding)
        fail(ErrorKind::inconclusive, "initial cell windings do not add up to the boundary winding");
    for (const auto& [cell, w] : cells) search.process(cell, w, 0);

    result.zeros = search.take_zeros();
    std::sort(result.zeros.begin(), result.zeros.end(), [](const LocatedZero& a, const LocatedZero& b) {
        return std::pair(a.location.imag(), a.location.real()) < std::pair(b.location.imag(), b.location.real());
    });

    // Independent multiplicity check on small circles.
    for (std::size_t i = 0; i < result.zeros.size(); ++i) {
        const Complex r = result.zeros[i].location;
        double sep = 1e-4;
        for (std::size_t j = 0; j < result.zeros.size(); ++j)
            if (j != i) sep = std::min(sep, 0.3 * std::abs(result.zeros[j].location - r));
        for (const auto& p : result.poles) sep = std::min(sep, 0.3 * std::abs(p.location - r));
        WindingOptions circle_opt = opt.winding;
        circle_opt.initial_step = sep / 4.0;
        circle_opt.min_step = sep * 1e-6;
        const int m = winding_number([&](Complex s) { return detail::k_jet(product, s); }, circle_polygon(r, sep, 16),
                                     circle_opt);
        if (m != result.zeros[i].multiplicity)
            fail(ErrorKind::inconclusive, "zero multiplicity from the cell count and from a small circle disagree");
    }
    return result;
}

/// Empirical sup |K'/K| / m on the contour C_m: t = +-T_m for
/// -m <= sigma <= 3 and sigma = -m for |t| < T_m. T_m is the candidate in
/// (m + 0.1, m + 0.9) (64-point grid) farthest from the ordinates of the
/// pole grid of K.
inline double probe_K_contour_bound(const MotohashiProduct& product, int m, int samples = 200) {
    require(m >= 1, "contour index m must be positive");
    require(samples >= 2, "contour probe needs at least 2 samples per segment");
    if (product.trivial_mollifier()) return 0.0;
    const auto candidates = product.pole_candidates(-m - 2.0, m + 2.0);
    double best_t = m + 0.5, best_dist = -1.0;
    for (int j = 0; j < 64; ++j) {
        const double t = m + 0.1 + 0.8 * j / 63.0;
        double d = INFINITY;
        for (const auto& c : candidates)
            d = std::min({d, std::abs(c.location.imag() - t), std::abs(c.location.imag() + t)});
        if (d > best_dist) best_dist = d, best_t = t;
    }
    const double left = -static_cast<double>(m);
    const double right = 3.0;
    double sup = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double u = static_cast<double>(i) / (samples - 1);
        const double sigma = left + (right - left) * u;
        sup = std::max(sup, std::abs(product.K_log_deriv({sigma, best_t})));
        sup = std::max(sup, std::abs(product.K_log_deriv({sigma, -best_t})));
        sup = std::max(sup, std::abs(product.K_log_deriv({left, -best_t + 2.0 * best_t * u})));
    }
    return sup / m;
}

/// The K-dependent part of an inventory (S_nu and S_r). It depends only on
/// k_max and the search rectangle, so sweeps over gamma_max or q_max reuse it.
struct KSingularities {
    int k_max = 0;
    Rect rect;
    std::vector<SingularityPoint> poles;  // S_nu
    std::vector<SingularityPoint> zeros;  // S_r
};

inline KSingularities enumerate_K_singularities(const MotohashiProduct& product, const TruncationPolicy& policy,
                                                unsigned threads = 1, const ZeroSearchOptions& search = {}) {
    policy.validate();
    KSingularities out;
    out.k_max = policy.k_max;
    out.rect = policy.rect;
    if (product.trivial_mollifier()) return out;
    const double delta = product.params().delta();
    const double span = kPi * policy.k_max / std::log(2.0) + std::abs(delta) + 1.0;
    const auto candidates = product.pole_candidates(-span, span, policy.k_max);
    const auto orders = parallel_map(candidates.size(), threads,
                                     [&](std::size_t i) { return residue_filter(product, candidates[i].location); });
    for (std::size_t i = 0; i < candidates.size(); ++i)
        if (orders[i] > 0)
            out.poles.push_back({candidates[i].location, SingularityClass::Snu, class_sign(SingularityClass::Snu), orders[i]});
    ZeroSearchOptions opt = search;
    opt.threads = threads;
    for (const auto& r : find_K_zeros(product, policy.rect, opt).zeros)
        out.zeros.push_back({r.location, SingularityClass::Sr, class_sign(SingularityClass::Sr), r.multiplicity});
    return out;
}

/// Every singularity class of Z = J K under the truncation policy, in
/// canonical order. Points of one class that coincide (within 1e-12) are
/// merged into a multiplicity; points of different classes closer than
/// 1e-8 are reported as collisions. `k_part` may carry a precomputed
/// S_nu / S_r enumeration for the same k_max and rectangle.
inline SingularityInventory enumerate_singularities(const MotohashiProduct& product, const TruncationPolicy& policy,
                                                    const ZeroTable& zeros, unsigned threads = 1,
                                                    const KSingularities* k_part = nullptr,
                                                    const ZeroSearchOptions& search = {}) {
    policy.validate();
    if (policy.gamma_max > zeros.max_ordinate() && policy.gamma_max >= 14.0)
        fail(ErrorKind::coverage, "gamma_max " + std::to_string(policy.gamma_max) + " exceeds the zeros table (max " +
                                      std::to_string(zeros.max_ordinate()) + ")");
    if (k_part && (k_part->k_max != policy.k_max || !(k_part->rect == policy.rect)))
        fail(ErrorKind::parameter_mismatch, "cached S_nu/S_r enumeration was built for a different policy");
    const SpectralParams& P = product.params();
    const double delta = P.delta();
    const Complex shifts[4] = {Complex{0.0, 0.0}, Complex{0.0, P.t1}, Complex{0.0, -P.t2}, Complex{0.0, delta}};

    std::vector<SingularityPoint> raw;
    auto add = [&](SingularityClass c, Complex u, int mult) { raw.push_back({u, c, class_sign(c), mult}); };

    for (const auto& a : shifts) add(SingularityClass::S1, 1.0 + a, 1);
    add(SingularityClass::S1bar, Complex{0.5, 0.5 * delta}, 1);
    for (const double g : zeros.up_to(policy.gamma_max)) {
        for (const double sg : {g, -g}) {
            const Complex rho{0.5, sg};
            for (const auto& a : shifts) add(SingularityClass::Srho, rho + a, 1);
            add(SingularityClass::Srhobar, 0.5 * rho + Complex{0.0, 0.5 * delta}, 1);
        }
    }
    for (int q = 1; q <= policy.q_max; ++q) {
        for (const auto& a : shifts) add(SingularityClass::Sm2q, Complex{-2.0 * q, 0.0} + a, 1);
        add(SingularityClass::Sm2qbar, Complex{-static_cast<double>(q), 0.5 * delta}, 1);
    }
    if (!product.trivial_mollifier()) {
        const KSingularities computed = k_part ? KSingularities{} : enumerate_K_singularities(product, policy, threads, search);
        const KSingularities& k = k_part ? *k_part : computed;
        raw.insert(raw.end(), k.poles.begin(), k.poles.end());
        raw.insert(raw.end(), k.zeros.begin(), k.zeros.end());
    }

    std::sort(raw.begin(), raw.end(), canonical_less);
    SingularityInventory inv;
    inv.truncation = policy;
    inv.params = P;
    for (const auto& p : raw) {
        bool merged = false;
        for (auto it = inv.points.rbegin(); it != inv.points.rend(); ++it) {
            if (it->cls != p.cls || p.location.imag() - it->location.imag() > 1e-12) break;
            if (std::abs(it->location - p.location) <= 1e-12) {
                it->multiplicity += p.multiplicity;
                merged = true;
                break;
            }
        }
        if (!merged) inv.points.push_back(p);
    }

    std::vector<SingularityPoint> by_im = inv.points;
    std::sort(by_im.begin(), by_im.end(), [](const auto& a, const auto& b) { return a.location.imag() < b.location.imag(); });
    for (std::size_t i = 0; i < by_im.size(); ++i)
        for (std::size_t j = i + 1; j < by_im.size() && by_im[j].location.imag() - by_im[i].location.imag() < 1e-8; ++j)
            if (by_im[i].cls != by_im[j].cls && std::abs(by_im[i].location - by_im[j].location) < 1e-8)
                inv.collisions.push_back({by_im[i], by_im[j]});
    return inv;
}

}  // namespace motohashi
