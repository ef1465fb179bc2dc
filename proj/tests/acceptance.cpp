// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. argv[1] is the path of the command-line binary.

#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "motohashi/motohashi.hpp"
#include "oracles.hpp"

using namespace motohashi;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

const ZeroTable& zeros() {
    static const auto table = ZeroTable::from_file(MOTOHASHI_DEFAULT_ZEROS);
    return table;
}

// 1. Z'/Z from the evaluated product against the coefficient series.
Outcome series_identity() {
    const SpectralParams p(1.0, 2.0, 4.0);
    const MotohashiProduct prod(p);
    const auto sigma = log_deriv_coefficients(z_coefficients(p, 10000));
    double worst = 0.0;
    for (const Complex s : {Complex{3.0, 0.0}, Complex{3.0, 5.0}, Complex{2.5, -3.0}})
        worst = std::max(worst, std::abs(prod.Z_log_deriv(s) - sigma.evaluate(s, 10000)));
    return {worst < 1e-6, "max |Z'/Z - series| = " + sci(worst) + " (tol 1e-6)"};
}

// 2. Closed-form c_n against brute-force convolution of the expanded factors.
Outcome coefficient_oracle() {
    const std::size_t N = 500;
    const auto c = z_coefficients(SpectralParams(1.0, 2.0, 4.0), N);
    const auto ref = oracle::convolve(oracle::j_series(N, 1.0, 2.0), oracle::k_series(N, 1.0, 2.0, 4.0));
    double worst = 0.0;
    for (std::size_t n = 1; n <= N; ++n) worst = std::max(worst, std::abs(c.values[n] - ref[n]));
    return {worst < 1e-9, "max |c_n - convolution|, n <= 500: " + sci(worst) + " (tol 1e-9)"};
}

// 3. c_n = 0 for 1 < n < z at z = 20 across random shifts.
Outcome head_vanishing() {
    std::mt19937_64 rng(20);
    std::uniform_real_distribution<double> shift(-50.0, 50.0);
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        const auto c = z_coefficients(SpectralParams(shift(rng), shift(rng), 20.0), 100);
        for (std::size_t n = 2; n < 20; ++n) worst = std::max(worst, std::abs(c.values[n]));
    }
    return {worst < 1e-12, "max |c_n|, 1 < n < 20, 10 shift pairs: " + sci(worst) + " (tol 1e-12)"};
}

ExplicitFormulaParams ladder_point(double gamma_max, int k_max, const Rect& rect) {
    ExplicitFormulaParams ep;
    ep.x = 10.0;
    ep.s = Complex{3.0, 0.5};
    ep.policy.gamma_max = gamma_max;
    ep.policy.q_max = 50;
    ep.policy.k_max = k_max;
    ep.policy.rect = rect;
    return ep;
}

// 4. Residual decay along gamma_max for the degenerate and full products.
Outcome residual_decay() {
    const std::array<double, 4> ladder{50.0, 100.0, 200.0, 500.0};
    std::string detail;
    bool pass = true;
    auto run = [&](const SpectralParams& p, int k_max, const Rect& rect, const char* name, bool check_tail) {
        std::vector<ExplicitFormulaParams> list;
        for (const double g : ladder) list.push_back(ladder_point(g, k_max, rect));
        const MotohashiProduct prod(p, &zeros());
        const auto reports = residual_sweep(list, prod, zeros());
        detail += std::string(name) + ":";
        bool decreasing = true;
        for (std::size_t i = 0; i < reports.size(); ++i) {
            const double r = std::abs(reports[i].residual);
            detail += " " + sci(r);
            if (!std::isfinite(r) || (i > 0 && !(r < std::abs(reports[i - 1].residual)))) decreasing = false;
        }
        pass = pass && decreasing;
        if (check_tail) {
            const double tail = kernel_tail_bound(list.back(), p, zeros());
            const bool under = std::abs(reports.back().residual) <= tail + 1e-4;
            detail += " (tail bound " + sci(tail) + ")";
            pass = pass && under;
        }
        detail += decreasing ? "; " : " NOT DECREASING; ";
    };
    // K is constant only for z <= sqrt 2, hence z = 1.4 for the degenerate case.
    run(SpectralParams(0.0, 0.0, 1.4), 200, Rect(-1.0, 3.0, -49.5, 50.5), "z=1.4", true);
    run(SpectralParams(1.0, 2.0, 4.0), 400, Rect(-6.0, 3.0, -99.5, 100.5), "(1,2,4)", false);
    return {pass, detail};
}

// 5. Smoothing weight law and its Mellin-kernel representation.
Outcome weight_law() {
    const double x = 10.0;
    bool pass = true;
    for (int n = 1; n <= 10; ++n) pass = pass && selberg_weight(n, x) == 1.0;
    pass = pass && std::abs(selberg_weight(x * x, x) - 0.5) < 1e-12;
    for (const double n : {1000.0, 1001.0, 5000.0}) pass = pass && selberg_weight(n, x) == 0.0;
    const double e = 1e-12;
    const double jump_x = std::abs(selberg_weight(x * (1 + e), x) - selberg_weight(x * (1 - e), x));
    const double jump_x2 = std::abs(selberg_weight(x * x * (1 + e), x) - selberg_weight(x * x * (1 - e), x));
    pass = pass && jump_x < 1e-11 && jump_x2 < 1e-11;
    double worst = 0.0;
    for (const double n : {2.0, 50.0, 500.0}) worst = std::max(worst, std::abs(oracle::mellin_weight(n, x) - selberg_weight(n, x)));
    pass = pass && worst < 1e-3;
    return {pass, "continuity jumps " + sci(jump_x) + ", " + sci(jump_x2) + "; max Mellin error " + sci(worst) + " (tol 1e-3)"};
}

// 6. Poles located by a Newton scan of 1/K lie on the closed-form grid and
// carry the winding multiplicity.
Outcome pole_grid() {
    const double t1 = 1.0, t2 = 1.0, z = 4.0;
    const SpectralParams p(t1, t2, z);
    const MotohashiProduct prod(p);
    auto inv = [&](Complex s) { return 1.0 / oracle::k_direct(s, t1, t2, z); };
    // Seeds: a coarse three-column lattice plus local minima of |1/K| on a
    // fine sweep of the symmetry line Re s = 0, which resolves near-dipoles.
    std::vector<Complex> seeds;
    for (int i = 0; i <= 6000; ++i) seeds.emplace_back((i % 3 - 1) * 0.05, 10.0 * i / 6000.0);
    const int fine = 1000000;
    double prev2 = INFINITY, prev1 = INFINITY;
    for (int i = 0; i <= fine; ++i) {
        const double a = std::abs(inv(Complex{0.0, 10.0 * i / fine}));
        if (prev1 < prev2 && prev1 <= a) seeds.emplace_back(0.0, 10.0 * (i - 1) / fine);
        prev2 = prev1;
        prev1 = a;
    }
    std::vector<Complex> found;
    for (Complex s : seeds) {
        bool converged = false;
        for (int it = 0; it < 200; ++it) {
            const double h = 1e-7;
            const Complex g = inv(s);
            if (!is_finite(g)) break;
            const Complex dg = (inv(s + h) - inv(s - h)) / (2.0 * h);
            if (dg == 0.0 || !is_finite(dg)) break;
            const Complex step = g / dg;
            s -= step;
            if (std::abs(step) < 1e-14) {
                converged = true;
                break;
            }
        }
        if (!converged || std::abs(inv(s)) > 1e-6) continue;
        if (s.real() < -0.5 || s.real() > 0.5 || s.imag() <= 0.0 || s.imag() >= 10.0) continue;
        bool dup = false;
        for (const auto& f : found) dup = dup || std::abs(f - s) < 1e-6;
        if (!dup) found.push_back(s);
    }
    double worst_grid = 0.0;
    int order_mismatch = 0;
    for (const Complex s : found) {
        double d = INFINITY;
        Complex nu;
        for (const int q : {2, 3, 5, 7, 11, 13}) {
            const double L = std::log(static_cast<double>(q));
            const double k = std::round((s.imag() - 0.5 * (t1 - t2)) * L / kPi);
            const Complex g{0.0, kPi * k / L + 0.5 * (t1 - t2)};
            if (std::abs(s - g) < d) d = std::abs(s - g), nu = g;
        }
        worst_grid = std::max(worst_grid, d);
        WindingOptions wo;
        wo.initial_step = 1e-7;
        wo.min_step = 1e-13;
        const int w = winding_number([&](Complex u) { return detail::k_jet(prod, u); }, circle_polygon(nu, 1e-6, 16), wo);
        if (residue_filter(prod, nu) != -w) ++order_mismatch;
    }
    // every filtered grid pole in the window was found by the scan
    int missed = 0;
    for (const auto& c : prod.pole_candidates(1e-9, 10.0)) {
        if (residue_filter(prod, c.location) == 0) continue;
        bool hit = false;
        for (const auto& f : found) hit = hit || std::abs(f - c.location) < 1e-6;
        if (!hit) ++missed;
    }
    const bool pass = !found.empty() && worst_grid < 1e-8 && order_mismatch == 0 && missed == 0;
    return {pass, std::to_string(found.size()) + " poles, max grid distance " + sci(worst_grid) + " (tol 1e-8), " +
                      std::to_string(order_mismatch) + " multiplicity mismatches, " + std::to_string(missed) + " missed"};
}

// 7. Boundary winding equals zeros minus poles on random rectangles.
Outcome argument_principle() {
    const MotohashiProduct prod(SpectralParams(1.0, 2.0, 4.0));
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> x0(-3.0, 1.5), w(0.5, 3.0), y0(-30.0, 25.0), h(1.0, 8.0);
    int done = 0, bad = 0, attempts = 0;
    long zeros_seen = 0, poles_seen = 0;
    while (done < 20 && attempts < 200) {
        ++attempts;
        const double a = x0(rng), c = y0(rng);
        const Rect rect(a, a + w(rng), c, c + h(rng));
        try {
            ZeroSearchOptions opt;
            opt.initial_grid = 2;
            const auto res = find_K_zeros(prod, rect, opt);
            const int wind = K_winding(prod, rect);
            int nz = 0, np = 0;
            for (const auto& z : res.zeros) nz += z.multiplicity;
            for (const auto& p : res.poles) np += p.multiplicity;
            if (wind != nz - np) ++bad;
            zeros_seen += nz;
            poles_seen += np;
            ++done;
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::boundary_too_close) throw;
        }
    }
    return {done == 20 && bad == 0, std::to_string(done) + " rectangles, " + std::to_string(bad) + " mismatches (" +
                                        std::to_string(zeros_seen) + " zeros, " + std::to_string(poles_seen) + " poles)"};
}

// 8. Second moment of zeta on the critical line.
Outcome moment_sanity() {
    const auto r = zeta_moment({1.0, 100.0, 0.05, 0.5, 1});
    const double ratio = r.quadrature.value / (100.0 * std::log(100.0));
    const bool pass = ratio >= 0.3 && ratio <= 1.5 && r.quadrature.relative_change < 5e-3;
    return {pass, "ratio to T log T " + sci(ratio) + " (window [0.3, 1.5]), halving change " + sci(r.quadrature.relative_change) +
                      " (tol 5e-3)"};
}

std::string capture(const std::string& command) {
    std::string out;
    FILE* pipe = ::popen(command.c_str(), "r");
    if (!pipe) return "<popen failed>";
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
    const int status = ::pclose(pipe);
    return out + "\n<status " + std::to_string(status) + ">";
}

// 9. Every subcommand twice, byte-identical stdout.
Outcome determinism(const std::string& binary) {
    const std::string P = " --t1 1 --t2 2 --z 4 ";
    const std::vector<std::string> commands = {
        P + "eval --s 0.7,3",
        P + "coeffs --nmax 200",
        P + "singularities --gamma-max 50 --qmax 5 --kmax 10 --rect=-1,3,-9.5,10.5",
        P + "verify-ef --s 3,0.5 --gamma-max 100 --qmax 10 --kmax 40 --rect=-1,3,-19.5,20.5",
        " scan-zeros --t-range 10,60",
        P + "scan-zeros --target K --rect=-1,2,-5,5",
        P + "nk --sigma 0.6,0.8 --T 20",
        " moments --k 1 --T 20",
        P + "fx-integral --kappa 0.6 --sigma-line 2 --T 10",
        P + "largevalue-scan --t-range -3,3 --E-range 0,1 --grid 5,3 --scale 2",
        P + "probe --kind K --m 3 --samples 30",
    };
    int differing = 0;
    for (const auto& c : commands) {
        const std::string cmd = binary + c + " 2>/dev/null";
        const auto a = capture(cmd), b = capture(cmd);
        if (a != b || a.find("<status 0>") == std::string::npos) ++differing;
    }
    return {differing == 0, std::to_string(commands.size()) + " subcommand runs, " + std::to_string(differing) + " differing or failing"};
}

}  // namespace

int main(int argc, char** argv) {
    const std::string binary = argc > 1 ? argv[1] : "motohashi";
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"1 series vs analytic Z'/Z", series_identity},
        {"2 coefficient convolution oracle", coefficient_oracle},
        {"3 head vanishing c_n = 0 for 1 < n < z", head_vanishing},
        {"4 explicit-formula residual decay", residual_decay},
        {"5 smoothing weight law", weight_law},
        {"6 pole grid and multiplicities", pole_grid},
        {"7 argument-principle integer identity", argument_principle},
        {"8 second-moment sanity", moment_sanity},
        {"9 CLI determinism", [&] { return determinism(binary); }},
    };
    int failures = 0;
    for (const auto& [name, fn] : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        char t[32];
        std::snprintf(t, sizeof t, "%.1fs", secs);
        std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << name << ": " << o.detail << " [" << t << "]" << std::endl;
        if (!o.pass) ++failures;
    }
    std::cout << (failures ? "acceptance: " + std::to_string(failures) + " criteria failed" : std::string("acceptance: all criteria passed"))
              << std::endl;
    return failures ? 1 : 0;
}
