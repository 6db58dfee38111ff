#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace normlab {

/// The primes p <= limit, generated segment by segment.
struct PrimeRange {
    std::uint64_t limit = 2;
    std::size_t segment_size = std::size_t{1} << 20;

    /// Sieves all segments; with workers > 1 segments run concurrently and
    /// are merged in order, so the output does not depend on `workers`.
    std::vector<std::uint64_t> collect(unsigned workers = 1) const;
};

/// Primes in [low, high] using base primes that cover sqrt(high).
std::vector<std::uint64_t> sieve_segment(std::uint64_t low, std::uint64_t high,
                                         const std::vector<std::uint64_t>& base_primes);

std::vector<std::uint64_t> primes_up_to(std::uint64_t limit, unsigned workers = 1);

/// pi(x) for real x >= 0.
std::uint64_t prime_pi(double x);

/// Li(x) = integral from 2 to x of dt / log t. Throws DomainError for x < 2.
double li(double x);

/// theta(P) = sum over p <= P of log p.
double chebyshev_theta(std::uint64_t limit);

/// Unbounded increasing prime sequence; resumable and deterministic.
class PrimeIterator {
public:
    explicit PrimeIterator(std::size_t segment_size = std::size_t{1} << 18);

    std::uint64_t next();
    /// Number of primes returned so far.
    std::uint64_t count() const noexcept { return returned_; }

private:
    void refill();

    std::size_t segment_size_;
    std::vector<std::uint64_t> base_;
    std::uint64_t base_limit_ = 0;
    std::vector<std::uint64_t> buffer_;
    std::size_t cursor_ = 0;
    std::uint64_t next_low_ = 2;
    std::uint64_t returned_ = 0;
};

}  // namespace normlab
