#include "normlab/error.hpp"
#include "normlab/quadrature.hpp"
#include "normlab/smoothing.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

using namespace normlab;

namespace {
mpq_class q(long a, long b = 1) {
    mpq_class v(a, b);
    v.canonicalize();
    return v;
}

std::complex<double> coeff_by_quadrature(const TrapezoidSmoothing& psi, long nu) {
    auto g = [&](double x) { return psi_eval(psi, x) * std::polar(1.0, -2 * std::numbers::pi * nu * x); };
    return gauss_kronrod(g, 0.0, 1.0, 1e-13, 0.0, static_cast<int>(8 + 4 * nu)).value;
}
}  // namespace

TEST_CASE("block indicator") {
    const auto ind = make_indicator(make_block(10, {4, 6}));
    CHECK(ind.left == q(23, 50));
    CHECK(ind.width == q(1, 100));
    CHECK(indicator_eval_exact(ind, q(465, 1000)) == 1);
    CHECK(indicator_eval_exact(ind, q(47, 100)) == 0);
    CHECK(indicator_eval_exact(ind, q(46, 100)) == 1);
    CHECK(indicator_eval_exact(ind, q(1465, 1000)) == 1);
    CHECK(indicator_eval(ind, 0.465) == 1);
    CHECK(indicator_eval(ind, 1.465) == 1);
    CHECK(indicator_eval(ind, -0.535) == 1);
}

TEST_CASE("trapezoid values") {
    const auto psi = build_psi(q(1, 5), q(3, 5), q(1, 10));
    CHECK(psi_eval_exact(psi, q(2, 5)) == 1);
    CHECK(psi_eval_exact(psi, q(1, 5)) == q(1, 2));
    CHECK(psi_eval_exact(psi, q(3, 5) + q(1, 20)) == 0);
    CHECK(psi_eval_exact(psi, q(3, 5)) == q(1, 2));
    CHECK(psi_eval(psi, 0.4) == doctest::Approx(1.0));
    CHECK(psi_eval(psi, 0.2) == doctest::Approx(0.5));
    CHECK(psi.mean() == q(2, 5));
}

TEST_CASE("trapezoid is periodic") {
    const auto psi = build_psi(q(-1, 10), q(3, 10), q(1, 20));
    std::mt19937_64 rng(1);
    for (int i = 0; i < 1000; ++i) {
        const mpq_class t(static_cast<long>(rng() % 100000), 100000);
        CHECK(psi_eval_exact(psi, t) == psi_eval_exact(psi, t + 1));
        CHECK(psi_eval_exact(psi, t) == psi_eval_exact(psi, t - 3));
        const mpq_class v = psi_eval_exact(psi, t);
        CHECK(v >= 0);
        CHECK(v <= 1);
    }
}

TEST_CASE("invalid windows") {
    CHECK_THROWS_AS(build_psi(q(0), q(1, 2), q(0)), InvalidWindow);
    CHECK_THROWS_AS(build_psi(q(0), q(1, 2), q(1, 2)), InvalidWindow);
    CHECK_THROWS_AS(build_psi(q(0), q(1, 100), q(1, 50)), InvalidWindow);
    CHECK_THROWS_AS(build_psi(q(0), q(99, 100), q(1, 50)), InvalidWindow);
    CHECK_NOTHROW(build_psi(q(0), q(1, 50), q(1, 50)));
}

TEST_CASE("fourier coefficients") {
    const auto psi = build_psi(q(1, 5), q(3, 5), q(1, 10));
    CHECK(psi_coeff(psi, 0).real() == doctest::Approx(0.4));
    CHECK(psi_coeff(psi, 0).imag() == 0.0);
    for (long nu : {1L, 2L, 3L, 7L, 20L}) {
        const auto a = psi_coeff(psi, nu);
        const auto b = coeff_by_quadrature(psi, nu);
        CHECK(std::abs(a - b) < 1e-10);
        CHECK(std::abs(psi_coeff(psi, -nu) - std::conj(a)) < 1e-15);
    }
}

TEST_CASE("symmetric window has real coefficients") {
    const double w = 0.15, delta = 0.05;
    const auto psi = build_psi(q(-15, 100), q(15, 100), q(5, 100));
    for (long nu = 1; nu <= 30; ++nu) {
        const auto a = psi_coeff(psi, nu);
        const double pn = std::numbers::pi * nu;
        const double expect = std::sin(2 * pn * w) / pn * std::sin(pn * delta) / (pn * delta);
        CHECK(std::abs(a.imag()) < 1e-14);
        CHECK(a.real() == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("coefficient bounds") {
    const auto psi = build_psi(q(46, 100) - q(1, 2000), q(47, 100) + q(1, 2000), q(1, 1000));
    for (long nu = 1; nu <= 10000; ++nu) {
        CHECK(std::abs(psi_coeff(psi, nu)) <= psi_coeff_bound(psi, nu) * (1 + 1e-12));
    }
}

TEST_CASE("partial fourier sums") {
    const auto psi = build_psi(q(1, 5), q(3, 5), q(1, 100));
    const auto zero = partial_fourier_eval(psi, 0.3, 0);
    CHECK(zero.value == doctest::Approx(0.4));
    std::mt19937_64 rng(2);
    for (int i = 0; i < 50; ++i) {
        const double t = std::uniform_real_distribution<double>(0, 1)(rng);
        const auto pf = partial_fourier_eval(psi, t, 1000);
        CHECK(std::abs(pf.value - psi_eval(psi, t)) <= pf.tail_bound + 1e-12);
    }
    for (long nu_max : {1L, 10L, 1000L}) {
        CHECK(fourier_tail_bound(q(1, 100), nu_max) <= 2.0 / (std::numbers::pi * std::numbers::pi * 0.01 * nu_max));
    }
}

TEST_CASE("sandwich") {
    const auto ind = make_indicator(make_block(10, {4, 6}));
    const auto pair = build_sandwich(ind, q(1, 1000));
    CHECK(pair.minus.mean() == q(9, 1000));
    CHECK(pair.plus.mean() == q(11, 1000));
    for (long i = 0; i < 10000; ++i) {
        const mpq_class t(i, 10000);
        const int v = indicator_eval_exact(ind, t);
        CHECK(psi_eval_exact(pair.minus, t) <= v);
        CHECK(psi_eval_exact(pair.plus, t) >= v);
    }
    const auto edge = build_sandwich(ind, q(1, 400));
    for (long i = 0; i < 10000; ++i) {
        const mpq_class t(i, 10000);
        const int v = indicator_eval_exact(ind, t);
        CHECK(psi_eval_exact(edge.minus, t) <= v);
        CHECK(psi_eval_exact(edge.plus, t) >= v);
    }
    CHECK_THROWS_AS(build_sandwich(ind, q(1, 399)), DeltaTooLarge);
    CHECK_THROWS_AS(build_sandwich(ind, q(0)), DeltaTooLarge);
}

TEST_CASE("exact rationals from doubles") {
    CHECK(exact_rational(0.5) == q(1, 2));
    CHECK(exact_rational(0.1).get_d() == 0.1);
    CHECK(exact_rational(-3.0) == q(-3));
}

TEST_CASE("coefficient csv") {
    std::ostringstream os;
    write_coefficients_csv(os, build_psi(q(1, 5), q(3, 5), q(1, 10)), 2);
    const std::string s = os.str();
    CHECK(s.rfind("nu,re,im,bound\n1,", 0) == 0);
    CHECK(std::count(s.begin(), s.end(), '\n') == 3);
}
