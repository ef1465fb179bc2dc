#include "oracles.hpp"
#include "support.hpp"

using namespace motohashi;
using support::dist;
using support::kind_of;

TEST_CASE("zeta closed-form values") {
    CHECK(dist(zeta(Complex{2.0, 0.0}), 1.6449340668482264365) < 1e-13);
    CHECK(dist(zeta(Complex{0.0, 0.0}), -0.5) < 1e-13);
    CHECK(std::abs(zeta(Complex{0.5, 14.134725})) < 1e-5);
}

TEST_CASE("zeta against high-precision reference values") {
    CHECK(dist(zeta(Complex{3.0, 5.0}), Complex{0.91252658899897131, 0.050842871074571362}) < 1e-12);
    CHECK(dist(zeta(Complex{-3.0, 0.5}), Complex{0.010045376193027521, 0.0033279397266725823}) < 1e-12);
    CHECK(dist(zeta(Complex{0.5, 100.0}), Complex{2.6926198856813241, -0.020386029602598162}) < 1e-10);
    CHECK(dist(zeta(Complex{-1.5, 20.0}), Complex{-4.8569772204705677, -8.7748233852088286}) < 1e-10);
}

TEST_CASE("zeta pole and accuracy warning") {
    CHECK(kind_of([] { zeta(Complex{1.0, 0.0}); }) == ErrorKind::pole_at_one);
    CHECK(zeta(Complex{0.5, 100.0}, 20).accuracy_warning);
    CHECK_FALSE(zeta(Complex{0.5, 100.0}, 200).accuracy_warning);
}

TEST_CASE("zeta conjugate symmetry at random points") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> re(-2.0, 3.0), im(-100.0, 100.0);
    for (int i = 0; i < 100; ++i) {
        const Complex s{re(rng), im(rng)};
        if (std::abs(s - 1.0) < 1e-3) continue;
        const Complex a = zeta(s), b = std::conj(zeta(std::conj(s)));
        CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)));
    }
}

TEST_CASE("zeta partial sums within the tail bound") {
    const std::size_t N = 1000;
    for (const Complex s : {Complex{2.0, 0.0}, Complex{2.5, 7.0}, Complex{3.0, -40.0}}) {
        const double bound = std::pow(static_cast<double>(N), 1.0 - s.real()) / (s.real() - 1.0);
        CHECK(std::abs(zeta(s) - oracle::zeta_partial(s, N)) <= bound);
    }
}

TEST_CASE("zeta log-derivative against the von Mangoldt series") {
    // the tail past N is about 1/N
    CHECK(dist(zeta_log_deriv(Complex{2.0, 0.0}), oracle::zeta_log_deriv_series(Complex{2.0, 0.0}, 1000000)) < 2e-6);
    CHECK(dist(zeta_log_deriv(Complex{3.0, 0.0}), oracle::zeta_log_deriv_series(Complex{3.0, 0.0}, 10000)) < 1e-8);
    CHECK(dist(zeta_log_deriv(Complex{2.0, 0.0}), -0.56996099309453281) < 1e-13);
}

TEST_CASE("zeta log-derivative left of the strip") {
    const Complex v = zeta_log_deriv(Complex{-3.0, 0.5});
    CHECK(is_finite(v));
    CHECK(dist(v, Complex{0.62874084497742283, -0.86244554226179227}) < 1e-10);
}

TEST_CASE("zeta log-derivative matches central differences") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> re(-2.5, 3.0), im(-60.0, 60.0);
    const double h = 1e-6;
    int checked = 0;
    while (checked < 50) {
        const Complex s{re(rng), im(rng)};
        if (std::abs(s - 1.0) < 0.1 || std::abs(zeta(s)) < 1e-2) continue;
        const Complex fd = (std::log(zeta(s + h)) - std::log(zeta(s - h))) / (2.0 * h);
        // log branch jumps show up as huge differences; skip those samples
        if (std::abs(fd) > 1e5) continue;
        CHECK(std::abs(zeta_log_deriv(s) - fd) < 1e-4);
        ++checked;
    }
}

TEST_CASE("zeta log-derivative refuses singular points") {
    const auto& zeros = support::shipped_zeros();
    CHECK(kind_of([] { zeta_log_deriv(Complex{1.0 + 1e-9, 0.0}); }) == ErrorKind::near_singularity);
    CHECK(kind_of([] { zeta_log_deriv(Complex{-4.0, 0.0}); }) == ErrorKind::near_singularity);
    CHECK(kind_of([&] { zeta_log_deriv(Complex{0.5, zeros[0].ordinate}, &zeros); }) == ErrorKind::near_singularity);
}

TEST_CASE("zero refinement") {
    CHECK(std::abs(refine_zero(14.1) - 14.134725141734694) < 1e-10);
    CHECK(std::abs(refine_zero(21.0) - 21.022039638771555) < 1e-10);
    const double g = refine_zero(14.134725);
    CHECK(refine_zero(g) == g);
    CHECK(g > 14.134725 - 0.5);
    CHECK(g < 14.134725 + 0.5);
    CHECK(kind_of([] { refine_zero(3.0); }) == ErrorKind::no_sign_change);
}

TEST_CASE("critical-line scan reproduces the shipped table") {
    const auto found = scan_critical_zeros(10.0, 100.0, 0.05);
    const auto& zeros = support::shipped_zeros();
    const auto expect = zeros.up_to(100.0);
    REQUIRE(found.size() == expect.size());
    for (std::size_t i = 0; i < found.size(); ++i) CHECK(std::abs(found[i] - expect[i]) < 1e-9);
}

TEST_CASE("zero table ingestion") {
    const auto& zeros = support::shipped_zeros();
    CHECK(zeros.size() == 1000);
    CHECK(std::abs(zeros[0].ordinate - 14.134725141734694) < 1e-9);
    CHECK(std::abs(zeros[999].ordinate - 1419.4224809459957) < 1e-8);
    CHECK(zeros[0].index == 1);
    for (std::size_t i = 1; i < zeros.size(); ++i) CHECK(zeros.ordinates()[i] > zeros.ordinates()[i - 1]);

    std::istringstream empty("# nothing here\n\n");
    CHECK(ZeroTable::parse(empty, "empty").empty());
    std::istringstream descending("14.13\n21.02\n20.0\n");
    CHECK(kind_of([&] { ZeroTable::parse(descending, "bad"); }) == ErrorKind::ordering);
    std::istringstream garbage("14.13\nabc\n");
    try {
        ZeroTable::parse(garbage, "bad");
        FAIL("expected parse error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::parse);
        CHECK(e.tag() == "2");
    }
    std::istringstream dup("14.1347251417\n14.13472514170\n21.0\n");
    CHECK(ZeroTable::parse(dup, "dup").size() == 2);
}

TEST_CASE("contour probe") {
    const auto& zeros = support::shipped_zeros();
    const double r3 = probe_contour_bound(3, 200, zeros);
    CHECK(std::isfinite(r3));
    CHECK(r3 > 0.0);
    const double t3 = select_contour_ordinate(3, zeros);
    CHECK(t3 > 3.1);
    CHECK(t3 < 3.9);
    const double r10 = probe_contour_bound(10, 100, zeros);
    const double r20 = probe_contour_bound(20, 100, zeros);
    CHECK(r20 / r10 < 10.0);
    CHECK(r10 / r20 < 10.0);
    CHECK(probe_contour_bound(2, 10, zeros) == probe_contour_bound(2, 10, zeros));
}
