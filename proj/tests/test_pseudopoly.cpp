#include "normlab/error.hpp"
#include "normlab/pseudopoly.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace normlab;

namespace {
const PrecisionPolicy kPolicy{};

mpq_class q(long a, long b = 1) { return mpq_class(a, b); }
}  // namespace

TEST_CASE("parse single term") {
    const auto f = parse_pseudo_polynomial("x^1.5");
    REQUIRE(f.terms().size() == 1);
    CHECK(f.leading_coefficient() == ExactReal::rational(q(1)));
    CHECK(f.leading_exponent() == ExactReal::rational(q(3, 2)));
}

TEST_CASE("parse and decompose mixed terms") {
    const auto f = parse_pseudo_polynomial("2*x^2.5 + 3*x^2 - 1*x^0.5");
    REQUIRE(f.terms().size() == 3);
    const auto d = decompose(f);
    REQUIRE(d.g_terms.size() == 2);
    CHECK(d.g_terms[0].exponent == ExactReal::rational(q(1, 2)));
    CHECK(d.g_terms[0].coefficient == ExactReal::rational(q(-1)));
    CHECK(d.g_terms[1].coefficient == ExactReal::rational(q(2)));
    REQUIRE(d.h_terms.size() == 1);
    CHECK(d.h_terms[0].coefficient == ExactReal::rational(q(3)));
    CHECK(d.theta_r == ExactReal::rational(q(5, 2)));
    CHECK(d.k == 2);
}

TEST_CASE("named constants and whitespace") {
    const auto f = parse_pseudo_polynomial("  pi * x ^ sqrt2 + e*x ");
    CHECK(f.terms().size() == 2);
    CHECK(f.leading_exponent() == ExactReal::constant(ConstantKind::Sqrt2));
    CHECK(parse_pseudo_polynomial("x^1.5+x^1.5").leading_coefficient() == ExactReal::rational(q(2)));
}

TEST_CASE("rejections") {
    CHECK_THROWS_AS(parse_pseudo_polynomial("x^2"), NotPseudoPolynomial);
    CHECK_THROWS_AS(parse_pseudo_polynomial("-x^1.5"), NotPseudoPolynomial);
    CHECK_THROWS_AS(parse_pseudo_polynomial("x^1.5+x^0"), NotPseudoPolynomial);
    CHECK_THROWS_AS(parse_pseudo_polynomial("x^1.5 - x^1.5"), NotPseudoPolynomial);
    CHECK_THROWS_AS(parse_pseudo_polynomial("x^^2"), ParseError);
    CHECK_THROWS_AS(parse_pseudo_polynomial("y^1.5"), ParseError);
    CHECK_THROWS_AS(parse_pseudo_polynomial(""), ParseError);
    CHECK_THROWS_AS(parse_pseudo_polynomial("x^1.5 +"), ParseError);
}

TEST_CASE("lenient parse accepts polynomials but decompose does not") {
    const auto f = parse_function("x");
    CHECK(f.is_polynomial());
    CHECK_THROWS_AS(decompose(f), NotPseudoPolynomial);
    CHECK(eval_floor(f, 12345, kPolicy) == 12345);
    CHECK_FALSE(parse_function("x^1.5").is_polynomial());
}

TEST_CASE("decompose cases") {
    auto d = decompose(parse_pseudo_polynomial("x^1.5"));
    CHECK(d.h_terms.empty());
    CHECK(d.k == 0);
    CHECK(d.theta_r == ExactReal::rational(q(3, 2)));

    d = decompose(parse_pseudo_polynomial("x^2.5+x^2"));
    CHECK(d.k == 2);
    CHECK(d.theta_r == ExactReal::rational(q(5, 2)));

    d = decompose(parse_pseudo_polynomial("x^3+x^0.5"));
    CHECK(d.k == 3);
    CHECK(d.theta_r == ExactReal::rational(q(1, 2)));
}

TEST_CASE("decompose then recombine is the identity") {
    for (const char* text : {"x^1.5", "2*x^2.5 + 3*x^2 - 1*x^0.5", "x^3+x^0.5", "pi*x^sqrt2 + e*x + 2*x^0.25"}) {
        const auto f = parse_pseudo_polynomial(text);
        const auto g = recombine(decompose(f));
        REQUIRE(g.terms().size() == f.terms().size());
        for (std::size_t i = 0; i < f.terms().size(); ++i) {
            CHECK(g.terms()[i].coefficient == f.terms()[i].coefficient);
            CHECK(g.terms()[i].exponent == f.terms()[i].exponent);
        }
    }
}

TEST_CASE("eval_floor known values") {
    const auto f = parse_pseudo_polynomial("x^1.5");
    CHECK(eval_floor(f, 4, kPolicy) == 8);
    CHECK(eval_floor(f, 2, kPolicy) == 2);
    CHECK(eval_floor(f, 5, kPolicy) == 11);
    CHECK(eval_floor(f, 21, kPolicy) == 96);
    CHECK(eval_floor(f, 22, kPolicy) == 103);
    CHECK(eval_floor(parse_pseudo_polynomial("0.5*x^0.5"), 1, kPolicy) == 0);
}

TEST_CASE("eval_floor matches a higher precision recomputation") {
    std::mt19937_64 rng(7);
    const PrecisionPolicy wide{384, 8192};
    for (const char* text : {"x^1.5", "x^2.5+x^2", "sqrt2*x^1.2 + pi*x^0.7", "e*x^3.25"}) {
        const auto f = parse_pseudo_polynomial(text);
        for (int i = 0; i < 200; ++i) {
            const std::uint64_t n = std::uniform_int_distribution<std::uint64_t>(1, 10000000)(rng);
            CHECK(eval_floor(f, n, kPolicy) == eval_floor(f, n, wide));
        }
    }
}

TEST_CASE("perfect powers stay exact") {
    const auto f = parse_pseudo_polynomial("x^1.5");
    for (std::uint64_t m = 1; m < 2000; ++m) {
        CHECK(eval_floor(f, m * m, kPolicy) == mpz_class(static_cast<unsigned long>(m * m * m)));
    }
}

TEST_CASE("scaled fractions") {
    const auto f = parse_pseudo_polynomial("x^1.5");
    auto v = eval_scaled_fraction(f, 4, 1, 1, 10, kPolicy);
    CHECK(v.midpoint() == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(v.width() <= std::ldexp(1.0, -53));

    v = eval_scaled_fraction(f, 2, 1, 0, 10, kPolicy);
    CHECK(v.midpoint() == doctest::Approx(0.82842712474619009760).epsilon(1e-15));

    v = eval_scaled_fraction(f, 2, 3, 1, 10, kPolicy);
    CHECK(v.midpoint() == doctest::Approx(0.84852813742385702928).epsilon(1e-15));
    CHECK(v.lo.to_double() <= 0.84852813742385702928);
    CHECK(v.hi.to_double() >= 0.84852813742385702928);
}

TEST_CASE("fixed point fraction recomposes with the floor") {
    std::mt19937_64 rng(11);
    const auto f = parse_pseudo_polynomial("x^2.5+x^2");
    for (int i = 0; i < 300; ++i) {
        const std::uint64_t n = std::uniform_int_distribution<std::uint64_t>(2, 100000)(rng);
        const unsigned j = std::uniform_int_distribution<unsigned>(0, 6)(rng);
        const double frac = fixed_to_double(scaled_fraction_fixed(f, n, j, 10, kPolicy));
        // frac(f/q^j) * q^j = f mod q^j, whose integer part is floor(f) mod q^j.
        mpz_class mod;
        mpz_class p = 1;
        for (unsigned k = 0; k < j; ++k) p *= 10;
        const mpz_class fl = eval_floor(f, n, kPolicy);
        mpz_fdiv_r(mod.get_mpz_t(), fl.get_mpz_t(), p.get_mpz_t());
        const double scaled = frac * p.get_d();
        CHECK(scaled >= mod.get_d() - 1e-6);
        CHECK(scaled < mod.get_d() + 1 + 1e-6);
        const auto cert = eval_scaled_fraction(f, n, 1, j, 10, kPolicy);
        CHECK(std::abs(cert.midpoint() - frac) < 1e-12);
    }
}

TEST_CASE("ambiguous value at a tiny precision cap") {
    const auto f = parse_pseudo_polynomial("1000000000000000000000000000000*x^1.5");
    CHECK_THROWS_AS(eval_floor(f, 1, PrecisionPolicy{64, 64}), AmbiguousValue);
    CHECK(eval_floor(f, 1, kPolicy) == mpz_class("1000000000000000000000000000000"));
}

TEST_CASE("precision policy validation and environment") {
    CHECK_THROWS_AS((PrecisionPolicy{32, 4096}.validate()), DomainError);
    CHECK_THROWS_AS((PrecisionPolicy{256, 128}.validate()), DomainError);
    setenv("NORMLAB_MAX_BITS", "1024", 1);
    CHECK(PrecisionPolicy::from_environment().max_bits == 1024);
    setenv("NORMLAB_MAX_BITS", "lots", 1);
    CHECK_THROWS(PrecisionPolicy::from_environment());
    unsetenv("NORMLAB_MAX_BITS");
    CHECK(PrecisionPolicy::from_environment().max_bits == 4096);
}

TEST_CASE("derivative lower bounds") {
    const auto f = parse_pseudo_polynomial("x^1.5");
    CHECK(derivative_lower_bound(f, 1, 4, 9) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(derivative_lower_bound(f, 2, 1, 4) == doctest::Approx(0.375).epsilon(1e-12));
    CHECK(derivative_lower_bound(f, 1, 1, 1) == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(derivative_lower_bound(f, 1, 4, 9) <= 3.0);
}

TEST_CASE("derivative lower bound is monotone in the interval") {
    std::mt19937_64 rng(3);
    for (const char* text : {"x^1.5", "x^2.5+x^2", "x^3+x^0.5", "x^1.5 - 2*x^0.5"}) {
        const auto f = parse_pseudo_polynomial(text);
        for (int i = 0; i < 100; ++i) {
            const double a = std::uniform_real_distribution<double>(1, 50)(rng);
            const double b = a + std::uniform_real_distribution<double>(0, 50)(rng);
            const double a2 = std::max(1.0, a - std::uniform_real_distribution<double>(0, 5)(rng));
            const double b2 = b + std::uniform_real_distribution<double>(0, 5)(rng);
            for (unsigned m = 1; m <= 3; ++m) {
                const double inner = derivative_lower_bound(f, m, a, b);
                CHECK(derivative_lower_bound(f, m, a2, b2) <= inner);
                // Sampled minimum is never below the certificate.
                for (int s = 0; s <= 20; ++s) {
                    const double x = a + (b - a) * s / 20.0;
                    CHECK(std::abs(static_cast<double>(f.derivative_approx(x, m))) >= inner * (1 - 1e-12));
                }
            }
        }
    }
}

TEST_CASE("exact reals") {
    const auto pi = ExactReal::constant(ConstantKind::Pi);
    CHECK(pi.sign() == 1);
    CHECK((pi - pi).is_zero());
    CHECK(exact_less(ExactReal::rational(q(314, 100)), pi));
    CHECK(exact_less(ExactReal::constant(ConstantKind::Sqrt2), ExactReal::rational(q(1415, 1000)) + ExactReal::rational(q(1, 1000))));
    CHECK(ExactReal::rational(q(4, 2)).is_integer());
    CHECK_FALSE(ExactReal::constant(ConstantKind::E).is_integer());
}
