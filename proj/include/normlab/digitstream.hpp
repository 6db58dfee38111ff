#pragma once

#include "normlab/primes.hpp"
#include "normlab/pseudopoly.hpp"

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace normlab {

using Digit = std::uint8_t;

/// Most-significant-first q-ary digits of a non-negative integer. Zero is
/// represented by the single digit 0.
struct Expansion {
    unsigned base = 10;
    std::vector<Digit> digits;

    mpz_class value() const;
};

Expansion qary_digits(const mpz_class& m, unsigned q);
std::size_t digit_length(const mpz_class& m, unsigned q);

enum class SourceMode { Integers, Primes };

/// floor(f(n)) for every argument, computed in parallel chunks when
/// workers > 1; output order matches `args`.
std::vector<mpz_class> floors_at(const PseudoPolynomial& f, std::span<const std::uint64_t> args,
                                 const PrecisionPolicy& policy, unsigned workers = 1);

/// The concatenation floor(f(s1))_q floor(f(s2))_q ... where the sources s
/// run over the positive integers or over the primes. The prefix grows on
/// demand; earlier digits never change.
class DigitStream {
public:
    DigitStream(PseudoPolynomial f, unsigned q, SourceMode mode, PrecisionPolicy policy = {},
                unsigned workers = 1, std::size_t chunk_digits = std::size_t{1} << 16);

    /// Grows the visible prefix to exactly n digits.
    void extend_to(std::size_t n);

    std::span<const Digit> digits() const { return {digits_.data(), size_}; }
    std::size_t size() const noexcept { return size_; }
    unsigned base() const noexcept { return q_; }
    SourceMode mode() const noexcept { return mode_; }
    const PseudoPolynomial& function() const noexcept { return f_; }

    /// Start offset of every value block that begins inside the prefix.
    std::span<const std::size_t> boundaries() const;
    /// Source argument (n or p) of each block listed in boundaries().
    std::span<const std::uint64_t> sources() const;

private:
    void generate_batch(std::size_t wanted_digits);

    PseudoPolynomial f_;
    unsigned q_;
    SourceMode mode_;
    PrecisionPolicy policy_;
    unsigned workers_;
    std::size_t chunk_digits_;

    std::vector<Digit> digits_;
    std::vector<std::size_t> starts_;
    std::vector<std::uint64_t> sources_;
    std::size_t size_ = 0;

    PrimeIterator primes_;
    std::uint64_t next_integer_ = 1;
    std::size_t last_length_ = 1;
};

/// N digits of tau_q(f) (arguments over the primes).
DigitStream build_tau_prefix(const PseudoPolynomial& f, unsigned q, std::size_t n,
                             const PrecisionPolicy& policy = {}, unsigned workers = 1);
/// N digits of sigma_q(f) (arguments over 1, 2, 3, ...).
DigitStream build_sigma_prefix(const PseudoPolynomial& f, unsigned q, std::size_t n,
                               const PrecisionPolicy& policy = {}, unsigned workers = 1);

struct PrimeCutoff {
    std::uint64_t P = 0;
    std::uint64_t digits_before = 0;   ///< sum over p < P of the lengths
    std::uint64_t digits_through = 0;  ///< sum over p <= P of the lengths
    double main_term = 0.0;            ///< (beta / log q) * P
};

/// Smallest prime P whose expansion contains the N-th digit of tau_q(f).
PrimeCutoff prime_cutoff_for_digits(const PseudoPolynomial& f, unsigned q, std::uint64_t n,
                                    const PrecisionPolicy& policy = {});

/// Sum over p <= P of the length of floor(f(p)) in base q.
std::uint64_t total_digit_length(const PseudoPolynomial& f, unsigned q, std::uint64_t limit,
                                 const PrecisionPolicy& policy = {}, unsigned workers = 1);

/// Greatest expansion length of floor(f(p)) over p <= P.
std::size_t compute_J(const PseudoPolynomial& f, unsigned q, std::uint64_t limit, const PrecisionPolicy& policy = {});

struct DigitThreshold {
    std::uint64_t P_j = 0;
    /// q^(j-2) <= f(P_j) < q^(j-1) <= f(P_j + 1) < q^j
    bool chain_holds = false;
};

/// P_j = max{n >= 1 : f(n) < q^(j-1)}, assuming f increasing beyond the
/// point where it first reaches q^(j-1). Throws NotDefined if f(1) >= q^(j-1).
DigitThreshold compute_Pj(const PseudoPolynomial& f, unsigned q, int j, const PrecisionPolicy& policy = {});

/// Smallest j0 <= j_max such that the threshold chain holds for every j in
/// [j0, j_max]; 0 if it fails at j_max.
int chain_start(const PseudoPolynomial& f, unsigned q, int j_max, const PrecisionPolicy& policy = {});

struct PaddedRow {
    std::uint64_t p = 0;
    std::vector<Digit> digits;      ///< left-padded with zeros to length J
    std::size_t unpadded_length = 0;
};

struct PaddedTable {
    unsigned base = 10;
    std::uint64_t P = 0;
    std::size_t J = 0;
    std::vector<PaddedRow> rows;
};

PaddedTable padded_table(const PseudoPolynomial& f, unsigned q, std::uint64_t limit,
                         const PrecisionPolicy& policy = {}, unsigned workers = 1);

/// One byte per digit.
void write_digits_raw(std::ostream& os, std::span<const Digit> digits);
/// Digits as characters 0-9a-z..., no separators, trailing newline.
void write_digits_text(std::ostream& os, std::span<const Digit> digits);
/// CSV `index,offset,source`.
void write_boundaries_csv(std::ostream& os, const DigitStream& stream);
/// CSV `p,digits` with digits zero-padded to width J.
void write_padded_csv(std::ostream& os, const PaddedTable& table);

}  // namespace normlab
