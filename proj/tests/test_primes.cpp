#include "normlab/error.hpp"
#include "normlab/primes.hpp"

#include <doctest.h>

#include <cmath>

using namespace normlab;

namespace {
bool trial_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) return false;
    }
    return true;
}
}  // namespace

TEST_CASE("small prime lists") {
    CHECK(primes_up_to(10) == std::vector<std::uint64_t>{2, 3, 5, 7});
    CHECK(primes_up_to(100).size() == 25);
    CHECK(primes_up_to(2) == std::vector<std::uint64_t>{2});
}

TEST_CASE("sieve agrees with trial division") {
    const auto primes = primes_up_to(200000);
    std::size_t i = 0;
    for (std::uint64_t n = 0; n <= 200000; ++n) {
        if (trial_prime(n)) {
            REQUIRE(i < primes.size());
            CHECK(primes[i++] == n);
        }
    }
    CHECK(i == primes.size());
}

TEST_CASE("segment boundaries do not matter") {
    const auto whole = primes_up_to(300000);
    for (std::size_t seg : {std::size_t{64}, std::size_t{1000}, std::size_t{65536}}) {
        PrimeRange r{300000, seg};
        CHECK(r.collect(1) == whole);
        CHECK(r.collect(4) == whole);
    }
}

TEST_CASE("prime counting") {
    CHECK(prime_pi(1) == 0);
    CHECK(prime_pi(13) == 6);
    CHECK(prime_pi(13.9) == 6);
    CHECK(prime_pi(10000) == 1229);
    CHECK(prime_pi(1e6) == 78498);
}

TEST_CASE("logarithmic integral") {
    CHECK(li(2) == 0.0);
    CHECK_THROWS_AS(li(1.5), DomainError);
    CHECK(li(1e3) == doctest::Approx(176.56449421003473).epsilon(1e-9));
    CHECK(li(1e4) == doctest::Approx(1245.0920521192710).epsilon(1e-9));
    CHECK(li(1e5) == doctest::Approx(9628.7638372706807).epsilon(1e-9));
    CHECK(std::abs(li(1e6) - 78626.5) <= 0.5);
    CHECK(li(1e6) == doctest::Approx(78626.503995682064).epsilon(1e-9));
    double prev = 0;
    for (double x = 2.5; x < 1e5; x *= 1.7) {
        CHECK(li(x) > prev);
        prev = li(x);
    }
}

TEST_CASE("chebyshev theta") {
    CHECK(chebyshev_theta(10) == doctest::Approx(std::log(210.0)).epsilon(1e-14));
    CHECK(chebyshev_theta(2) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    for (std::uint64_t P : {10u, 100u, 1000u, 100000u}) {
        CHECK(chebyshev_theta(P) <= static_cast<double>(prime_pi(static_cast<double>(P))) * std::log(static_cast<double>(P)));
    }
}

TEST_CASE("prime iterator resumes and matches the sieve") {
    PrimeIterator it(1000);
    const auto primes = primes_up_to(100000);
    for (auto p : primes) CHECK(it.next() == p);
    CHECK(it.count() == primes.size());
    CHECK(it.next() == 100003);
}
