#include "normlab/digitstream.hpp"
#include "normlab/error.hpp"

#include <doctest.h>

#include <sstream>

using namespace normlab;

namespace {
const PrecisionPolicy kPolicy{};

std::vector<Digit> ds(std::initializer_list<int> xs) {
    std::vector<Digit> v;
    for (int x : xs) v.push_back(static_cast<Digit>(x));
    return v;
}

std::vector<Digit> prefix(const DigitStream& s) { return {s.digits().begin(), s.digits().end()}; }
}  // namespace

TEST_CASE("q-ary expansions") {
    CHECK(qary_digits(46, 10).digits == ds({4, 6}));
    CHECK(qary_digits(8, 2).digits == ds({1, 0, 0, 0}));
    CHECK(qary_digits(0, 10).digits == ds({0}));
    CHECK(digit_length(46, 10) == 2);
    CHECK(digit_length(1000, 10) == 4);
    CHECK(digit_length(0, 10) == 1);
    for (unsigned q : {2u, 3u, 10u, 16u, 256u}) {
        for (unsigned long n : {0ul, 1ul, 7ul, 255ul, 256ul, 123456789ul}) {
            const auto e = qary_digits(mpz_class(n), q);
            CHECK(e.value() == mpz_class(n));
            CHECK(digit_length(mpz_class(n), q) == e.digits.size());
        }
    }
}

TEST_CASE("tau prefixes") {
    CHECK(prefix(build_tau_prefix(parse_function("x"), 10, 10)) == ds({2, 3, 5, 7, 1, 1, 1, 3, 1, 7}));
    CHECK(prefix(build_tau_prefix(parse_pseudo_polynomial("x^1.5"), 10, 8)) == ds({2, 5, 1, 1, 1, 8, 3, 6}));
    CHECK(build_tau_prefix(parse_function("x"), 10, 0).size() == 0);
}

TEST_CASE("sigma prefixes") {
    CHECK(prefix(build_sigma_prefix(parse_function("x"), 10, 12)) == ds({1, 2, 3, 4, 5, 6, 7, 8, 9, 1, 0, 1}));
    CHECK(prefix(build_sigma_prefix(parse_function("x"), 2, 6)) == ds({1, 1, 0, 1, 1, 1}));
    CHECK(build_sigma_prefix(parse_function("x"), 10, 0).size() == 0);
}

TEST_CASE("growing a stream keeps earlier digits") {
    const auto f = parse_pseudo_polynomial("x^2.5+x^2");
    DigitStream s(f, 7, SourceMode::Primes, kPolicy, 1, 100);
    s.extend_to(50);
    const auto first = prefix(s);
    s.extend_to(5000);
    CHECK(std::equal(first.begin(), first.end(), s.digits().begin()));
    const DigitStream direct = build_tau_prefix(f, 7, 5000);
    CHECK(prefix(direct) == prefix(s));
}

TEST_CASE("stream is independent of workers and chunking") {
    const auto f = parse_pseudo_polynomial("x^1.5");
    DigitStream a(f, 10, SourceMode::Primes, kPolicy, 1);
    DigitStream b(f, 10, SourceMode::Primes, kPolicy, 4, 1000);
    a.extend_to(200000);
    b.extend_to(200000);
    CHECK(prefix(a) == prefix(b));
    CHECK(std::vector<std::size_t>(a.boundaries().begin(), a.boundaries().end()) ==
          std::vector<std::size_t>(b.boundaries().begin(), b.boundaries().end()));
}

TEST_CASE("boundaries point at each value") {
    const auto f = parse_pseudo_polynomial("x^1.5");
    const DigitStream s = build_tau_prefix(f, 10, 2000);
    REQUIRE(s.boundaries().size() == s.sources().size());
    for (std::size_t i = 0; i < s.boundaries().size(); ++i) {
        const auto e = qary_digits(eval_floor(f, s.sources()[i], kPolicy), 10);
        const std::size_t start = s.boundaries()[i];
        for (std::size_t k = 0; k < e.digits.size() && start + k < s.size(); ++k) {
            CHECK(s.digits()[start + k] == e.digits[k]);
        }
    }
}

TEST_CASE("prime cutoff") {
    const auto f = parse_pseudo_polynomial("x^1.5");
    auto c = prime_cutoff_for_digits(f, 10, 5);
    CHECK(c.P == 7);
    CHECK(c.digits_before == 4);
    CHECK(c.digits_through == 6);
    c = prime_cutoff_for_digits(f, 10, 1);
    CHECK(c.P == 2);
    for (std::uint64_t n : {2u, 3u, 17u, 1000u, 54321u}) {
        c = prime_cutoff_for_digits(f, 10, n);
        CHECK(c.digits_before < n);
        CHECK(n <= c.digits_through);
        CHECK(total_digit_length(f, 10, c.P) == c.digits_through);
    }
}

TEST_CASE("maximal length J") {
    const auto f = parse_pseudo_polynomial("x^1.5");
    CHECK(compute_J(f, 10, 10) == 2);
    CHECK(compute_J(f, 10, 2) == 1);
    std::size_t prev = 0;
    for (std::uint64_t P = 2; P < 5000; P = P * 3 / 2 + 1) {
        const auto J = compute_J(f, 10, P);
        CHECK(J >= prev);
        prev = J;
    }
}

TEST_CASE("digit thresholds") {
    const auto f = parse_pseudo_polynomial("x^1.5");
    auto t = compute_Pj(f, 10, 3);
    CHECK(t.P_j == 21);
    CHECK(t.chain_holds);
    CHECK(compute_Pj(parse_function("x"), 10, 2).P_j == 9);
    CHECK_THROWS_AS(compute_Pj(f, 10, 1), NotDefined);
    std::uint64_t prev = 0;
    for (int j = 2; j <= 12; ++j) {
        t = compute_Pj(f, 10, j);
        CHECK(t.P_j > prev);
        prev = t.P_j;
    }
    CHECK(chain_start(f, 10, 12) >= 1);
}

TEST_CASE("padded table") {
    const auto f = parse_pseudo_polynomial("x^1.5");
    const auto t = padded_table(f, 10, 10);
    CHECK(t.J == 2);
    REQUIRE(t.rows.size() == 4);
    CHECK(t.rows[0].p == 2);
    CHECK(t.rows[0].digits == ds({0, 2}));
    CHECK(t.rows[1].digits == ds({0, 5}));
    CHECK(t.rows[2].digits == ds({1, 1}));
    CHECK(t.rows[3].p == 7);
    CHECK(t.rows[3].digits == ds({1, 8}));
    const auto single = padded_table(f, 10, 2);
    REQUIRE(single.rows.size() == 1);
    CHECK(single.rows[0].digits == ds({2}));

    const auto big = padded_table(f, 10, 3000);
    for (const auto& row : big.rows) {
        CHECK(row.digits.size() == big.J);
        Expansion e{10, {row.digits.end() - static_cast<long>(row.unpadded_length), row.digits.end()}};
        CHECK(e.value() == eval_floor(f, row.p, kPolicy));
    }
}

TEST_CASE("writers") {
    const DigitStream s = build_tau_prefix(parse_function("x"), 10, 10);
    std::ostringstream text, raw, bounds;
    write_digits_text(text, s.digits());
    CHECK(text.str() == "2357111317\n");
    write_digits_raw(raw, s.digits());
    CHECK(raw.str().size() == 10);
    CHECK(raw.str()[0] == 2);
    write_boundaries_csv(bounds, s);
    CHECK(bounds.str().rfind("index,offset,source\n0,0,2\n1,1,3\n", 0) == 0);

    std::ostringstream table;
    write_padded_csv(table, padded_table(parse_pseudo_polynomial("x^1.5"), 10, 10));
    CHECK(table.str() == "p,digits\n2,02\n3,05\n5,11\n7,18\n");
}
