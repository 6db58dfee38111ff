#include "normlab/error.hpp"
#include "normlab/expsum.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace normlab;

namespace {
const PrecisionPolicy kPolicy{};
}  // namespace

TEST_CASE("parameter choice") {
    auto d = decompose(parse_pseudo_polynomial("x^1.5"));
    auto p = choose_parameters(d);
    CHECK(p.rho == doctest::Approx(0.225));
    CHECK(p.gamma == doctest::Approx(0.1125));
    CHECK_NOTHROW(p.validate(d));

    d = decompose(parse_pseudo_polynomial("x^0.5+x^3"));
    p = choose_parameters(d);
    CHECK(p.rho == doctest::Approx(0.05625));
    CHECK_NOTHROW(p.validate(d));
    CHECK_THROWS_AS((RangeParameters{0.2, 0.1}.validate(d)), DomainError);
    CHECK_THROWS_AS((RangeParameters{0.01, 0.07}.validate(d)), DomainError);
}

TEST_CASE("range classification") {
    const auto d = decompose(parse_pseudo_polynomial("x^2.5"));
    const auto p = choose_parameters(d);
    CHECK(classify_range(3, 1e3, 10, d, p) == RangeClass::LeastSignificant);
    CHECK(classify_range(0, 1e3, 10, d, p) == RangeClass::LeastSignificant);
    CHECK(classify_range(7, 1e3, 10, d, p) == RangeClass::MostSignificant);
    CHECK(classify_range(8, 1e3, 10, d, p) == RangeClass::OutOfRange);

    const auto d2 = decompose(parse_pseudo_polynomial("x^3+x^0.5"));
    const RangeParameters p2{0.1, 0.2};
    // q^j = P^2 with P = 10^3.
    CHECK(classify_range(6, 1e3, 10, d2, p2) == RangeClass::Middle);
    CHECK(classify_range(8, 1e3, 10, d2, p2) == RangeClass::MostSignificant);
    CHECK(classify_range(10, 1e3, 10, d2, p2) == RangeClass::OutOfRange);
    CHECK(to_string(RangeClass::Middle) == "middle");
}

TEST_CASE("single prime sum has unit modulus") {
    const auto f = parse_pseudo_polynomial("x^1.5");
    for (long nu : {1L, 3L, 11L}) {
        const auto s = exp_sum_sample(f, 10, 2, nu, 2);
        CHECK(std::abs(s.value) == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(s.prime_count == 1);
    }
}

TEST_CASE("small sum against the multiprecision value") {
    const auto f = parse_pseudo_polynomial("x^1.5");
    const auto s = exp_sum_sample(f, 10, 1, 1, 10);
    CHECK(s.value.real() == doctest::Approx(0.13809418016689694648).epsilon(1e-12));
    CHECK(s.value.imag() == doctest::Approx(0.72987013173533055622).epsilon(1e-12));
    CHECK(std::abs(s.value - std::complex<double>(0.13809418016689694648, 0.72987013173533055622)) <= 1e-3);
}

TEST_CASE("sums respect the trivial bound and ignore workers") {
    const auto f = parse_pseudo_polynomial("x^2.5+x^2");
    for (int j : {1, 3, 6}) {
        const auto table = phase_table(f, 10, j, 50000);
        for (long nu : {1L, 2L, 17L}) {
            const auto one = exp_sum(table, nu, 1);
            const auto four = exp_sum(table, nu, 4);
            CHECK(one == four);
            CHECK(std::abs(one) <= static_cast<double>(table.primes.size()));
        }
    }
    CHECK_THROWS_AS(exp_sum(phase_table(f, 10, 1, 10), 0), DomainError);
}

TEST_CASE("phase table agrees with direct evaluation") {
    const auto f = parse_pseudo_polynomial("x^1.5");
    const auto table = phase_table(f, 10, 2, 3000);
    auto naive = std::complex<double>(0, 0);
    for (std::size_t i = 0; i < table.primes.size(); ++i) {
        const double frac = eval_scaled_fraction(f, table.primes[i], 5, 2, 10, kPolicy).midpoint();
        naive += std::polar(1.0, 2 * std::numbers::pi * frac);
    }
    CHECK(std::abs(exp_sum(table, 5) - naive) < 1e-9);
}

TEST_CASE("von mangoldt") {
    CHECK(von_mangoldt(8) == doctest::Approx(std::log(2.0)));
    CHECK(von_mangoldt(6) == 0.0);
    CHECK(von_mangoldt(1) == 0.0);
    CHECK(von_mangoldt(13) == doctest::Approx(std::log(13.0)));
    double psi10 = 0;
    for (std::uint64_t n = 1; n <= 10; ++n) psi10 += von_mangoldt(n);
    CHECK(psi10 == doctest::Approx(7.8320141805054690).epsilon(1e-14));
}

TEST_CASE("prime powers barely change the weighted sum") {
    const auto f = parse_pseudo_polynomial("x^1.5");
    for (std::uint64_t t : {1000u, 10000u, 100000u}) {
        const auto a = mangoldt_weighted_sum(f, 10, 2, 1, t);
        const auto b = prime_log_weighted_sum(f, 10, 2, 1, t);
        CHECK(std::abs(a - b) <= 3 * std::sqrt(static_cast<double>(t)));
    }
}

TEST_CASE("integral oracle") {
    const auto f = parse_pseudo_polynomial("x^1.5");
    const auto small = integral_oracle(f, 10, 1, 1, 2);
    CHECK(std::abs(small.value) == 0.0);
    const auto a = integral_oracle(f, 10, 5, 1, 100000, 2.0, 1e-10);
    const auto b = integral_oracle(f, 10, 5, 1, 100000, 2.0, 5e-11);
    CHECK(std::abs(a.value - b.value) < 1e-6 * 9592);
    CHECK(a.error_scale == doctest::Approx(100000 / std::pow(std::log(100000.0), 2)));
}

TEST_CASE("van der corput bounds") {
    const auto f = parse_pseudo_polynomial("x^1.5");
    for (int j : {2, 3, 4}) {
        for (long nu : {1L, 5L}) {
            const auto c = vdc_bound_check(f, 10, j, nu, 1000, 10000, 1);
            CHECK(c.lambda > 0);
            CHECK(c.holds);
        }
    }
    const double s = 0.37;
    const auto lin = vdc_check([&](double x) { return s * x; }, s, 1, 0.0, 13.0);
    CHECK(lin.holds);
    CHECK(lin.lhs <= 1 / (std::numbers::pi * s) + 1e-9);
    CHECK(lin.rhs == doctest::Approx(2 / s));
    CHECK_THROWS_AS(vdc_check([](double x) { return x; }, 0.0, 1, 0, 1), NoBound);
    CHECK(vdc_bound_check(f, 10, 2, 3, 10, 200, 2).holds);
}

TEST_CASE("decay fit") {
    std::vector<ExpSumSample> flat;
    for (double P : {1e3, 1e4, 1e5}) {
        ExpSumSample s;
        s.P = static_cast<std::uint64_t>(P);
        s.normalized = 0.25;
        flat.push_back(s);
    }
    CHECK(decay_fit(flat) == doctest::Approx(0.0).epsilon(1e-15));
    std::vector<ExpSumSample> two(2);
    two[0].P = 1000;
    two[0].normalized = 0.5;
    two[1].P = 100000;
    two[1].normalized = 0.05;
    CHECK(decay_fit(two) == doctest::Approx((std::log(0.05) - std::log(0.5)) / (std::log(1e5) - std::log(1e3))));
    CHECK_THROWS_AS(decay_fit(std::span<const ExpSumSample>(two.data(), 1)), DomainError);
}

TEST_CASE("fourier bracketing") {
    const auto f = parse_pseudo_polynomial("x^1.5");
    const auto params = choose_parameters(decompose(f));
    const auto block = make_block(10, {7});
    const auto b = fourier_block_bounds(f, 10, block, 2, 10000, params, 1000);
    CHECK(b.contains());
    CHECK(b.count == direct_block_count(f, block, 2, primes_up_to(10000)));

    const auto zero = fourier_block_bounds(f, 10, block, 2, 10000, params, 0);
    CHECK(zero.contains());
    CHECK(zero.lo == doctest::Approx(1229 * (0.1 - zero.delta) - zero.tail));

    const auto half = fourier_block_bounds(f, 2, make_block(2, {1}), 3, 10000, params, 50);
    CHECK(half.contains());
    CHECK(half.lo <= 1229 / 2.0);
    CHECK(1229 / 2.0 <= half.hi);
}

TEST_CASE("direct block count by enumeration") {
    const auto f = parse_pseudo_polynomial("x^1.5");
    const auto primes = primes_up_to(2000);
    const auto block = make_block(10, {3, 1});
    for (int j : {2, 3, 5}) {
        std::uint64_t naive = 0;
        for (auto p : primes) {
            // The first two digits after the point of f(p) / 10^j.
            std::string text = eval_floor(f, p, kPolicy).get_str();
            if (text.size() < static_cast<std::size_t>(j)) text.insert(0, static_cast<std::size_t>(j) - text.size(), '0');
            if (text.compare(text.size() - static_cast<std::size_t>(j), 2, "31") == 0) ++naive;
        }
        CHECK(direct_block_count(f, block, j, primes) == naive);
    }
    // Below the block length the count reads digits past the integer part.
    std::uint64_t naive = 0;
    for (auto p : primes) {
        if (eval_scaled_floor(f, p, mpq_class(100), kPolicy) % 100 == 31) ++naive;
    }
    CHECK(direct_block_count(f, block, 0, primes) == naive);
}

TEST_CASE("range sweep") {
    const auto f = parse_pseudo_polynomial("x^1.5");
    const auto params = choose_parameters(decompose(f));
    const auto block = make_block(10, {7});
    const auto sweep = range_sweep(f, 10, block, 10000, params, 100);
    CHECK(sweep.rows.size() == compute_J(f, 10, 10000));
    for (const auto& r : sweep.rows) CHECK(r.bounds.contains());
    const auto single = fourier_block_bounds(f, 10, block, 3, 10000, params, 100);
    CHECK(sweep.rows[2].bounds.count == single.count);
    CHECK(sweep.rows[2].bounds.lo == single.lo);
}
