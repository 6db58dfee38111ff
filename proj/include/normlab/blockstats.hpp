#pragma once

#include "normlab/digitstream.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace normlab {

inline constexpr std::uint64_t kDefaultMaxBlockSpace = std::uint64_t{1} << 20;

/// A digit block d1...dl in base q.
struct Block {
    unsigned base = 10;
    std::vector<Digit> digits;

    std::size_t length() const noexcept { return digits.size(); }
    /// Index of the block among all q^l blocks of its length.
    std::uint64_t code() const;
};

/// Validates digits and length (1 <= l <= max_length). Throws DomainError.
Block make_block(unsigned q, std::vector<Digit> digits, std::size_t max_length = 6);

/// Overlapping occurrences: positions i with i + l <= digits.size().
std::uint64_t count_block(std::span<const Digit> digits, const Block& block);

/// N(theta; block; N): occurrences inside the first n digits of the stream.
std::uint64_t count_block_prefix(const DigitStream& stream, const Block& block, std::size_t n);

/// Counts of every block of a fixed length over a digit sequence. Counters
/// of consecutive pieces merge into the counter of the concatenation.
class BlockCounter {
public:
    BlockCounter(unsigned q, std::size_t length, std::uint64_t max_block_space = kDefaultMaxBlockSpace);

    void feed(std::span<const Digit> digits);

    /// Counter of `left` followed by `right`.
    static BlockCounter merge(const BlockCounter& left, const BlockCounter& right);

    std::uint64_t count(const Block& block) const { return counts_[block.code()]; }
    std::uint64_t count_code(std::uint64_t code) const { return counts_[code]; }
    std::span<const std::uint64_t> counts() const { return counts_; }
    std::uint64_t digits_seen() const noexcept { return seen_; }
    unsigned base() const noexcept { return q_; }
    std::size_t length() const noexcept { return length_; }
    std::uint64_t block_space() const noexcept { return counts_.size(); }

    bool operator==(const BlockCounter& other) const = default;

private:
    unsigned q_;
    std::size_t length_;
    std::vector<std::uint64_t> counts_;
    std::vector<Digit> head_;  // first l-1 digits seen
    std::vector<Digit> tail_;  // last l-1 digits seen
    std::uint64_t seen_ = 0;
    std::uint64_t rolling_ = 0;
};

struct DiscrepancyValue {
    std::uint64_t n = 0;
    /// max over blocks of |count * q^l - N|; the discrepancy is this over N q^l.
    std::uint64_t numerator = 0;
    std::uint64_t block_space = 0;
    double value = 0.0;
};

/// R_{N,l} = max over blocks of length l of |count / N - q^-l| on the first n digits.
DiscrepancyValue discrepancy(std::span<const Digit> digits, unsigned q, std::size_t length, std::size_t n,
                             std::uint64_t max_block_space = kDefaultMaxBlockSpace);
DiscrepancyValue discrepancy(const DigitStream& stream, std::size_t length, std::size_t n,
                             std::uint64_t max_block_space = kDefaultMaxBlockSpace);

struct CurvePoint {
    std::uint64_t n = 0;
    double r = 0.0;
    double r_log_n = 0.0;
};

/// Discrepancy at each grid point (sorted ascending); the digits must cover the largest N.
std::vector<CurvePoint> discrepancy_curve(std::span<const Digit> digits, unsigned q, std::size_t length,
                                          std::vector<std::uint64_t> grid,
                                          std::uint64_t max_block_space = kDefaultMaxBlockSpace);

struct StarCount {
    std::uint64_t padded = 0;    ///< sum of N*(f(p))
    std::uint64_t unpadded = 0;  ///< sum of N(f(p))
    std::uint64_t difference() const { return padded - unpadded; }
};

/// Counts within each row separately; no window crosses rows.
StarCount star_count(const PaddedTable& table, const Block& block);

/// Strictly q-additive digit weight, w(0) = 0.
struct QAdditiveWeight {
    unsigned base = 10;
    std::vector<double> weights;

    static QAdditiveWeight sum_of_digits(unsigned q);
    static QAdditiveWeight zero(unsigned q);
    /// Throws DomainError unless size == base and w(0) == 0.
    void validate() const;
    double apply(const mpz_class& n) const;
};

/// Sum over p <= P of w(floor(f(p))).
double q_additive_sum(const PseudoPolynomial& f, unsigned q, std::uint64_t limit, const QAdditiveWeight& w,
                      const PrecisionPolicy& policy = {}, unsigned workers = 1);

/// mu = (1/q) * sum of the digit weights.
double mu_f(const QAdditiveWeight& w);

struct Comparison {
    std::uint64_t P = 0;
    double sum = 0.0;
    double main = 0.0;
    double residual = 0.0;
    double normalized = 0.0;
};

/// Digit sum over primes against (q-1)/2 * pi(P) * log_q P^beta;
/// normalized = residual / pi(P).
Comparison summatory_compare(const PseudoPolynomial& f, unsigned q, std::uint64_t limit,
                             const PrecisionPolicy& policy = {}, unsigned workers = 1);

/// Padded block count against q^-l * pi(P) * log_q P^beta;
/// normalized = residual * log P / P.
Comparison central_compare(const PseudoPolynomial& f, const PaddedTable& table, const Block& block);
Comparison central_compare(const PseudoPolynomial& f, unsigned q, const Block& block, std::uint64_t limit,
                           const PrecisionPolicy& policy = {}, unsigned workers = 1);

/// CSV `N,R,RlogN`.
void write_curve_csv(std::ostream& os, std::span<const CurvePoint> curve);
/// CSV `P,sum,main,residual,normalized`.
void write_comparison_csv(std::ostream& os, std::span<const Comparison> rows);

}  // namespace normlab
