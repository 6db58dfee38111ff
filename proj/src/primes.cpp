#include "normlab/primes.hpp"

#include "normlab/error.hpp"
#include "normlab/quadrature.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace normlab {

namespace {

std::uint64_t isqrt(std::uint64_t n) {
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

std::vector<std::uint64_t> small_primes(std::uint64_t limit) {
    std::vector<std::uint64_t> out;
    if (limit < 2) return out;
    std::vector<char> composite(limit + 1, 0);
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (composite[i]) continue;
        out.push_back(i);
        for (std::uint64_t k = i * i; k <= limit; k += i) composite[k] = 1;
    }
    return out;
}

}  // namespace

std::vector<std::uint64_t> sieve_segment(std::uint64_t low, std::uint64_t high,
                                         const std::vector<std::uint64_t>& base_primes) {
    std::vector<std::uint64_t> out;
    if (high < 2 || low > high) return out;
    if (low <= 2) {
        out.push_back(2);
        low = 3;
    }
    if (low % 2 == 0) ++low;
    if (low > high) return out;

    // Index i stands for the odd number low + 2i.
    const std::uint64_t count = (high - low) / 2 + 1;
    std::vector<char> sieve(count, 1);
    for (std::uint64_t p : base_primes) {
        if (p == 2) continue;
        if (p * p > high) break;
        std::uint64_t start = std::max(p * p, (low + p - 1) / p * p);
        if (start % 2 == 0) start += p;
        for (std::uint64_t m = start; m <= high; m += 2 * p) sieve[(m - low) / 2] = 0;
    }
    for (std::uint64_t i = 0; i < count; ++i) {
        if (sieve[i]) out.push_back(low + 2 * i);
    }
    return out;
}

std::vector<std::uint64_t> PrimeRange::collect(unsigned workers) const {
    if (limit < 2) return {};
    const std::vector<std::uint64_t> base = small_primes(isqrt(limit));
    const std::uint64_t span = 2 * static_cast<std::uint64_t>(std::max<std::size_t>(segment_size, 16));
    const std::uint64_t segments = (limit + span) / span;

    std::vector<std::vector<std::uint64_t>> parts(segments);
    auto sieve_one = [&](std::uint64_t s) {
        const std::uint64_t lo = s * span;
        const std::uint64_t hi = std::min(limit, lo + span - 1);
        parts[s] = sieve_segment(lo, hi, base);
    };
    if (workers <= 1 || segments == 1) {
        for (std::uint64_t s = 0; s < segments; ++s) sieve_one(s);
    } else {
        std::atomic<std::uint64_t> next{0};
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::uint64_t s = next++; s < segments; s = next++) sieve_one(s);
            });
        }
    }
    std::size_t total = 0;
    for (const auto& p : parts) total += p.size();
    std::vector<std::uint64_t> out;
    out.reserve(total);
    for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    return out;
}

std::vector<std::uint64_t> primes_up_to(std::uint64_t limit, unsigned workers) {
    return PrimeRange{limit}.collect(workers);
}

std::uint64_t prime_pi(double x) {
    if (!(x >= 2.0)) return 0;
    const auto limit = static_cast<std::uint64_t>(std::floor(x));
    const std::vector<std::uint64_t> base = small_primes(isqrt(limit));
    constexpr std::uint64_t kSpan = std::uint64_t{1} << 21;
    std::uint64_t total = 0;
    for (std::uint64_t lo = 0; lo <= limit; lo += kSpan) {
        total += sieve_segment(lo, std::min(limit, lo + kSpan - 1), base).size();
    }
    return total;
}

double li(double x) {
    if (!(x >= 2.0)) throw DomainError("Li(x) needs x >= 2");
    if (x == 2.0) return 0.0;
    // t = e^u turns dt/log t into e^u/u du, which is smooth on [log 2, log x].
    auto integrand = [](double u) { return std::exp(u) / u; };
    return adaptive_simpson(integrand, std::log(2.0), std::log(x), 1e-8).value;
}

double chebyshev_theta(std::uint64_t limit) {
    double sum = 0.0;
    double comp = 0.0;
    for (std::uint64_t p : primes_up_to(limit)) {
        const double y = std::log(static_cast<double>(p)) - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

PrimeIterator::PrimeIterator(std::size_t segment_size) : segment_size_(std::max<std::size_t>(segment_size, 64)) {}

std::uint64_t PrimeIterator::next() {
    while (cursor_ >= buffer_.size()) refill();
    ++returned_;
    return buffer_[cursor_++];
}

void PrimeIterator::refill() {
    const std::uint64_t low = next_low_;
    const std::uint64_t high = low + 2 * segment_size_ - 1;
    const std::uint64_t root = isqrt(high);
    if (base_limit_ < root) {
        base_limit_ = std::max<std::uint64_t>(2 * root, 1024);
        base_ = small_primes(base_limit_);
    }
    buffer_ = sieve_segment(low, high, base_);
    cursor_ = 0;
    next_low_ = high + 1;
}

}  // namespace normlab
