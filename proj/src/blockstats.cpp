#include "normlab/blockstats.hpp"

#include "normlab/csv.hpp"
#include "normlab/error.hpp"
#include "normlab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace normlab {

namespace {

std::uint64_t space_size(unsigned q, std::size_t length, std::uint64_t max_block_space) {
    std::uint64_t space = 1;
    for (std::size_t i = 0; i < length; ++i) {
        if (space > max_block_space / q) {
            throw BlockSpaceTooLarge(std::to_string(q) + "^" + std::to_string(length) + " blocks exceed the bound " +
                                     std::to_string(max_block_space));
        }
        space *= q;
    }
    return space;
}

std::uint64_t code_of(std::span<const Digit> digits, unsigned q) {
    std::uint64_t c = 0;
    for (Digit d : digits) c = c * q + d;
    return c;
}

}  // namespace

std::uint64_t Block::code() const { return code_of(digits, base); }

Block make_block(unsigned q, std::vector<Digit> digits, std::size_t max_length) {
    if (q < 2 || q > 256) throw DomainError("base must be in [2, 256]");
    if (digits.empty()) throw DomainError("a block needs at least one digit");
    if (digits.size() > max_length) {
        throw DomainError("block length " + std::to_string(digits.size()) + " exceeds " + std::to_string(max_length));
    }
    for (Digit d : digits) {
        if (d >= q) throw DomainError("digit " + std::to_string(d) + " out of range for base " + std::to_string(q));
    }
    return Block{q, std::move(digits)};
}

std::uint64_t count_block(std::span<const Digit> digits, const Block& block) {
    const std::size_t l = block.length();
    if (l == 0 || digits.size() < l) return 0;
    std::uint64_t count = 0;
    for (std::size_t i = 0; i + l <= digits.size(); ++i) {
        if (std::equal(block.digits.begin(), block.digits.end(), digits.begin() + static_cast<std::ptrdiff_t>(i))) ++count;
    }
    return count;
}

std::uint64_t count_block_prefix(const DigitStream& stream, const Block& block, std::size_t n) {
    if (block.base != stream.base()) throw DomainError("block and stream bases differ");
    if (n > stream.size()) throw DomainError("prefix longer than the generated stream");
    return count_block(stream.digits().first(n), block);
}

// ---------------------------------------------------------------------------
// BlockCounter

BlockCounter::BlockCounter(unsigned q, std::size_t length, std::uint64_t max_block_space) : q_(q), length_(length) {
    if (q < 2 || q > 256) throw DomainError("base must be in [2, 256]");
    if (length == 0) throw DomainError("block length must be positive");
    counts_.assign(space_size(q, length, max_block_space), 0);
}

void BlockCounter::feed(std::span<const Digit> digits) {
    const std::uint64_t space = counts_.size();
    for (Digit d : digits) {
        rolling_ = (rolling_ * q_ + d) % space;
        ++seen_;
        if (seen_ >= length_) ++counts_[rolling_];
    }
    const std::size_t keep = length_ - 1;
    for (std::size_t i = 0; i < digits.size() && head_.size() < keep; ++i) head_.push_back(digits[i]);
    tail_.insert(tail_.end(), digits.begin() + static_cast<std::ptrdiff_t>(digits.size() - std::min(digits.size(), keep)),
                 digits.end());
    if (tail_.size() > keep) tail_.erase(tail_.begin(), tail_.end() - static_cast<std::ptrdiff_t>(keep));
    // Only the last l-1 digits matter for the next window; keeping exactly
    // those makes the state independent of how the input was split.
    rolling_ = code_of(tail_, q_);
}

BlockCounter BlockCounter::merge(const BlockCounter& left, const BlockCounter& right) {
    if (left.q_ != right.q_ || left.length_ != right.length_) throw DomainError("merging incompatible counters");
    BlockCounter out = left;
    for (std::size_t i = 0; i < out.counts_.size(); ++i) out.counts_[i] += right.counts_[i];

    // Windows that start in left's tail and end in right's head.
    std::vector<Digit> joint = left.tail_;
    joint.insert(joint.end(), right.head_.begin(), right.head_.end());
    const std::size_t l = left.length_;
    const std::size_t cut = left.tail_.size();
    for (std::size_t i = 0; i < cut; ++i) {
        if (i + l > cut && i + l <= joint.size()) ++out.counts_[code_of(std::span(joint).subspan(i, l), left.q_)];
    }

    const std::size_t keep = l - 1;
    out.seen_ = left.seen_ + right.seen_;
    for (std::size_t i = 0; i < right.head_.size() && out.head_.size() < keep; ++i) out.head_.push_back(right.head_[i]);
    out.tail_.insert(out.tail_.end(), right.tail_.begin(), right.tail_.end());
    if (out.tail_.size() > keep) out.tail_.erase(out.tail_.begin(), out.tail_.end() - static_cast<std::ptrdiff_t>(keep));
    out.rolling_ = code_of(out.tail_, out.q_);
    return out;
}

// ---------------------------------------------------------------------------
// Discrepancy

namespace {

DiscrepancyValue evaluate(const BlockCounter& counter, std::uint64_t n) {
    if (n == 0) throw DomainError("discrepancy needs N >= 1");
    DiscrepancyValue out;
    out.n = n;
    out.block_space = counter.block_space();
    for (std::uint64_t c : counter.counts()) {
        const unsigned __int128 scaled = static_cast<unsigned __int128>(c) * out.block_space;
        const unsigned __int128 diff = scaled > n ? scaled - n : n - scaled;
        out.numerator = std::max<std::uint64_t>(out.numerator, static_cast<std::uint64_t>(diff));
    }
    out.value = static_cast<double>(static_cast<long double>(out.numerator) /
                                    (static_cast<long double>(n) * static_cast<long double>(out.block_space)));
    return out;
}

}  // namespace

DiscrepancyValue discrepancy(std::span<const Digit> digits, unsigned q, std::size_t length, std::size_t n,
                             std::uint64_t max_block_space) {
    if (n > digits.size()) throw DomainError("prefix longer than the available digits");
    BlockCounter counter(q, length, max_block_space);
    counter.feed(digits.first(n));
    return evaluate(counter, n);
}

DiscrepancyValue discrepancy(const DigitStream& stream, std::size_t length, std::size_t n,
                             std::uint64_t max_block_space) {
    return discrepancy(stream.digits(), stream.base(), length, n, max_block_space);
}

std::vector<CurvePoint> discrepancy_curve(std::span<const Digit> digits, unsigned q, std::size_t length,
                                          std::vector<std::uint64_t> grid, std::uint64_t max_block_space) {
    std::sort(grid.begin(), grid.end());
    BlockCounter counter(q, length, max_block_space);
    std::vector<CurvePoint> out;
    std::uint64_t fed = 0;
    for (std::uint64_t n : grid) {
        if (n > digits.size()) throw DomainError("grid point beyond the available digits");
        counter.feed(digits.subspan(fed, n - fed));
        fed = n;
        const DiscrepancyValue d = evaluate(counter, n);
        const long double r = static_cast<long double>(d.numerator) /
                              (static_cast<long double>(n) * static_cast<long double>(d.block_space));
        out.push_back({n, d.value, static_cast<double>(r * std::log(static_cast<long double>(n)))});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Padded counts

StarCount star_count(const PaddedTable& table, const Block& block) {
    if (block.base != table.base) throw DomainError("block and table bases differ");
    StarCount out;
    for (const auto& row : table.rows) {
        out.padded += count_block(row.digits, block);
        out.unpadded += count_block(std::span(row.digits).last(row.unpadded_length), block);
    }
    return out;
}

// ---------------------------------------------------------------------------
// q-additive functions

QAdditiveWeight QAdditiveWeight::sum_of_digits(unsigned q) {
    QAdditiveWeight w{q, std::vector<double>(q)};
    for (unsigned d = 0; d < q; ++d) w.weights[d] = d;
    return w;
}

QAdditiveWeight QAdditiveWeight::zero(unsigned q) { return QAdditiveWeight{q, std::vector<double>(q, 0.0)}; }

void QAdditiveWeight::validate() const {
    if (base < 2 || weights.size() != base) throw DomainError("weight table must have one entry per digit");
    if (weights[0] != 0.0) throw DomainError("strictly q-additive weights need w(0) = 0");
}

double QAdditiveWeight::apply(const mpz_class& n) const {
    double s = 0.0;
    for (Digit d : qary_digits(n, base).digits) s += weights[d];
    return s;
}

double q_additive_sum(const PseudoPolynomial& f, unsigned q, std::uint64_t limit, const QAdditiveWeight& w,
                      const PrecisionPolicy& policy, unsigned workers) {
    w.validate();
    if (w.base != q) throw DomainError("weight base differs from q");
    const std::vector<std::uint64_t> ps = primes_up_to(limit, workers);
    constexpr std::size_t kChunk = 2048;
    std::vector<std::vector<std::uint64_t>> histograms((ps.size() + kChunk - 1) / kChunk,
                                                       std::vector<std::uint64_t>(q, 0));
    for_each_chunk(ps.size(), kChunk, workers, [&](std::size_t b, std::size_t e, std::size_t c) {
        for (std::size_t i = b; i < e; ++i) {
            for (Digit d : qary_digits(eval_floor(f, ps[i], policy), q).digits) ++histograms[c][d];
        }
    });
    std::vector<std::uint64_t> total(q, 0);
    for (const auto& h : histograms) {
        for (unsigned d = 0; d < q; ++d) total[d] += h[d];
    }
    double sum = 0.0;
    for (unsigned d = 1; d < q; ++d) sum += w.weights[d] * static_cast<double>(total[d]);
    return sum;
}

double mu_f(const QAdditiveWeight& w) {
    w.validate();
    double s = 0.0;
    for (double v : w.weights) s += v;
    return s / w.base;
}

Comparison summatory_compare(const PseudoPolynomial& f, unsigned q, std::uint64_t limit,
                             const PrecisionPolicy& policy, unsigned workers) {
    if (limit < 2) throw DomainError("summatory_compare needs P >= 2");
    Comparison c;
    c.P = limit;
    c.sum = q_additive_sum(f, q, limit, QAdditiveWeight::sum_of_digits(q), policy, workers);
    const double pi = static_cast<double>(prime_pi(static_cast<double>(limit)));
    const double log_q_pbeta = static_cast<double>(f.beta()) * std::log(static_cast<double>(limit)) / std::log(static_cast<double>(q));
    c.main = (q - 1) / 2.0 * pi * log_q_pbeta;
    c.residual = c.sum - c.main;
    c.normalized = c.residual / pi;
    return c;
}

Comparison central_compare(const PseudoPolynomial& f, const PaddedTable& table, const Block& block) {
    if (table.P < 2) throw DomainError("central_compare needs P >= 2");
    Comparison c;
    c.P = table.P;
    c.sum = static_cast<double>(star_count(table, block).padded);
    const double pi = static_cast<double>(table.rows.size());
    const double log_p = std::log(static_cast<double>(table.P));
    c.main = std::pow(static_cast<double>(table.base), -static_cast<double>(block.length())) * pi *
             static_cast<double>(f.beta()) * log_p / std::log(static_cast<double>(table.base));
    c.residual = c.sum - c.main;
    c.normalized = c.residual * log_p / static_cast<double>(table.P);
    return c;
}

Comparison central_compare(const PseudoPolynomial& f, unsigned q, const Block& block, std::uint64_t limit,
                           const PrecisionPolicy& policy, unsigned workers) {
    return central_compare(f, padded_table(f, q, limit, policy, workers), block);
}

void write_curve_csv(std::ostream& os, std::span<const CurvePoint> curve) {
    os << "N,R,RlogN\n";
    for (const auto& p : curve) os << p.n << ',' << format_double(p.r) << ',' << format_double(p.r_log_n) << '\n';
}

void write_comparison_csv(std::ostream& os, std::span<const Comparison> rows) {
    os << "P,sum,main,residual,normalized\n";
    for (const auto& r : rows) {
        os << r.P << ',' << format_double(r.sum) << ',' << format_double(r.main) << ',' << format_double(r.residual)
           << ',' << format_double(r.normalized) << '\n';
    }
}

}  // namespace normlab
