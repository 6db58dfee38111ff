#include "normlab/digitstream.hpp"

#include "normlab/error.hpp"
#include "normlab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace normlab {

namespace {

void check_base(unsigned q) {
    if (q < 2 || q > 256) throw DomainError("base must be in [2, 256]");
}

mpz_class pow_u(unsigned q, int j) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), q, static_cast<unsigned long>(j));
    return r;
}

// Certified sign of f(n) - target.
int compare_value(const PseudoPolynomial& f, std::uint64_t n, const mpq_class& target, const PrecisionPolicy& policy) {
    const mpz_class arg(static_cast<unsigned long>(n));
    for (mpfr_prec_t bits = policy.start_bits;; bits = std::min<mpfr_prec_t>(bits * 2, policy.max_bits)) {
        Interval d = f.enclose(arg, bits) - Interval::rational(target, bits);
        if (d.positive()) return 1;
        if (d.negative()) return -1;
        if (mpfr_zero_p(d.lo().get()) && mpfr_zero_p(d.hi().get())) return 0;
        if (bits >= policy.max_bits) {
            throw AmbiguousValue("cannot compare f(" + std::to_string(n) + ") with " + target.get_str());
        }
    }
}

// q^e for possibly negative e.
mpq_class qpow(unsigned q, int e) {
    return e >= 0 ? mpq_class(pow_u(q, e)) : mpq_class(mpz_class(1), pow_u(q, -e));
}

}  // namespace

mpz_class Expansion::value() const {
    mpz_class v = 0;
    for (Digit d : digits) v = v * base + d;
    return v;
}

Expansion qary_digits(const mpz_class& m, unsigned q) {
    check_base(q);
    if (m < 0) throw DomainError("expansion of a negative integer");
    Expansion e{q, {}};
    if (m == 0) {
        e.digits.push_back(0);
        return e;
    }
    if (m.fits_ulong_p()) {
        unsigned long v = m.get_ui();
        while (v > 0) {
            e.digits.push_back(static_cast<Digit>(v % q));
            v /= q;
        }
    } else {
        mpz_class v = m;
        while (v > 0) {
            e.digits.push_back(static_cast<Digit>(mpz_fdiv_q_ui(v.get_mpz_t(), v.get_mpz_t(), q)));
        }
    }
    std::reverse(e.digits.begin(), e.digits.end());
    return e;
}

std::size_t digit_length(const mpz_class& m, unsigned q) {
    check_base(q);
    if (m == 0) return 1;
    // sizeinbase may overshoot by one for non-powers of two.
    std::size_t len = mpz_sizeinbase(m.get_mpz_t(), static_cast<int>(std::min(q, 62u)));
    if (q > 62) return qary_digits(m, q).digits.size();
    if (len > 1 && m < pow_u(q, static_cast<int>(len - 1))) --len;
    return len;
}

std::vector<mpz_class> floors_at(const PseudoPolynomial& f, std::span<const std::uint64_t> args,
                                 const PrecisionPolicy& policy, unsigned workers) {
    std::vector<mpz_class> out(args.size());
    for_each_chunk(args.size(), 1024, workers, [&](std::size_t b, std::size_t e, std::size_t) {
        for (std::size_t i = b; i < e; ++i) out[i] = eval_floor(f, args[i], policy);
    });
    return out;
}

// ---------------------------------------------------------------------------
// DigitStream

DigitStream::DigitStream(PseudoPolynomial f, unsigned q, SourceMode mode, PrecisionPolicy policy, unsigned workers,
                         std::size_t chunk_digits)
    : f_(std::move(f)), q_(q), mode_(mode), policy_(policy), workers_(std::max(workers, 1u)),
      chunk_digits_(std::max<std::size_t>(chunk_digits, 1)) {
    check_base(q);
    policy_.validate();
}

void DigitStream::extend_to(std::size_t n) {
    while (digits_.size() < n) generate_batch(std::min(n - digits_.size(), chunk_digits_));
    size_ = std::max(size_, n);
}

void DigitStream::generate_batch(std::size_t wanted_digits) {
    const std::size_t count = std::clamp<std::size_t>(wanted_digits / std::max<std::size_t>(last_length_, 1) + 1, 1, 8192);
    std::vector<std::uint64_t> args(count);
    for (auto& a : args) a = mode_ == SourceMode::Primes ? primes_.next() : next_integer_++;
    const std::vector<mpz_class> values = floors_at(f_, args, policy_, workers_);
    for (std::size_t i = 0; i < count; ++i) {
        const Expansion e = qary_digits(values[i], q_);
        starts_.push_back(digits_.size());
        sources_.push_back(args[i]);
        digits_.insert(digits_.end(), e.digits.begin(), e.digits.end());
        last_length_ = e.digits.size();
    }
}

std::span<const std::size_t> DigitStream::boundaries() const {
    const auto end = std::lower_bound(starts_.begin(), starts_.end(), size_);
    return {starts_.data(), static_cast<std::size_t>(end - starts_.begin())};
}

std::span<const std::uint64_t> DigitStream::sources() const {
    return {sources_.data(), boundaries().size()};
}

DigitStream build_tau_prefix(const PseudoPolynomial& f, unsigned q, std::size_t n, const PrecisionPolicy& policy,
                             unsigned workers) {
    DigitStream s(f, q, SourceMode::Primes, policy, workers);
    s.extend_to(n);
    return s;
}

DigitStream build_sigma_prefix(const PseudoPolynomial& f, unsigned q, std::size_t n, const PrecisionPolicy& policy,
                               unsigned workers) {
    DigitStream s(f, q, SourceMode::Integers, policy, workers);
    s.extend_to(n);
    return s;
}

// ---------------------------------------------------------------------------
// Length bookkeeping

PrimeCutoff prime_cutoff_for_digits(const PseudoPolynomial& f, unsigned q, std::uint64_t n,
                                    const PrecisionPolicy& policy) {
    check_base(q);
    if (n < 1) throw DomainError("prime_cutoff_for_digits requires N >= 1");
    PrimeIterator primes;
    PrimeCutoff out;
    while (out.digits_through < n) {
        out.P = primes.next();
        out.digits_before = out.digits_through;
        out.digits_through += digit_length(eval_floor(f, out.P, policy), q);
    }
    out.main_term = static_cast<double>(f.beta() / std::log(static_cast<long double>(q))) * static_cast<double>(out.P);
    return out;
}

std::uint64_t total_digit_length(const PseudoPolynomial& f, unsigned q, std::uint64_t limit,
                                 const PrecisionPolicy& policy, unsigned workers) {
    check_base(q);
    const std::vector<std::uint64_t> ps = primes_up_to(limit, workers);
    std::vector<std::uint64_t> partial((ps.size() + 4095) / 4096, 0);
    for_each_chunk(ps.size(), 4096, workers, [&](std::size_t b, std::size_t e, std::size_t c) {
        for (std::size_t i = b; i < e; ++i) partial[c] += digit_length(eval_floor(f, ps[i], policy), q);
    });
    std::uint64_t total = 0;
    for (auto v : partial) total += v;
    return total;
}

std::size_t compute_J(const PseudoPolynomial& f, unsigned q, std::uint64_t limit, const PrecisionPolicy& policy) {
    check_base(q);
    std::size_t J = 0;
    for (std::uint64_t p : primes_up_to(limit)) J = std::max(J, digit_length(eval_floor(f, p, policy), q));
    return J;
}

DigitThreshold compute_Pj(const PseudoPolynomial& f, unsigned q, int j, const PrecisionPolicy& policy) {
    check_base(q);
    const mpq_class upper = qpow(q, j - 1);
    auto below = [&](std::uint64_t n) { return compare_value(f, n, upper, policy) < 0; };
    if (!below(1)) throw NotDefined("f(1) >= q^(j-1) for j=" + std::to_string(j));

    std::uint64_t lo = 1;
    std::uint64_t hi = 2;
    while (below(hi)) {
        lo = hi;
        if (hi > (std::uint64_t{1} << 62)) throw NotDefined("P_j beyond 2^62");
        hi *= 2;
    }
    while (hi - lo > 1) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        (below(mid) ? lo : hi) = mid;
    }
    DigitThreshold out;
    out.P_j = lo;
    out.chain_holds = compare_value(f, lo, qpow(q, j - 2), policy) >= 0 &&
                      compare_value(f, lo + 1, upper, policy) >= 0 &&
                      compare_value(f, lo + 1, qpow(q, j), policy) < 0;
    return out;
}

int chain_start(const PseudoPolynomial& f, unsigned q, int j_max, const PrecisionPolicy& policy) {
    int j0 = 0;
    for (int j = j_max; j >= 1; --j) {
        try {
            if (!compute_Pj(f, q, j, policy).chain_holds) break;
        } catch (const NotDefined&) {
            break;
        }
        j0 = j;
    }
    return j0;
}

PaddedTable padded_table(const PseudoPolynomial& f, unsigned q, std::uint64_t limit, const PrecisionPolicy& policy,
                         unsigned workers) {
    check_base(q);
    PaddedTable t;
    t.base = q;
    t.P = limit;
    const std::vector<std::uint64_t> ps = primes_up_to(limit, workers);
    const std::vector<mpz_class> values = floors_at(f, ps, policy, workers);
    t.rows.resize(ps.size());
    for (std::size_t i = 0; i < ps.size(); ++i) {
        Expansion e = qary_digits(values[i], q);
        t.rows[i].p = ps[i];
        t.rows[i].unpadded_length = e.digits.size();
        t.rows[i].digits = std::move(e.digits);
        t.J = std::max(t.J, t.rows[i].unpadded_length);
    }
    for (auto& row : t.rows) row.digits.insert(row.digits.begin(), t.J - row.digits.size(), Digit{0});
    return t;
}

// ---------------------------------------------------------------------------
// Export

namespace {

char digit_char(Digit d) {
    if (d < 10) return static_cast<char>('0' + d);
    if (d < 36) return static_cast<char>('a' + d - 10);
    throw DomainError("text export supports bases up to 36");
}

}  // namespace

void write_digits_raw(std::ostream& os, std::span<const Digit> digits) {
    os.write(reinterpret_cast<const char*>(digits.data()), static_cast<std::streamsize>(digits.size()));
}

void write_digits_text(std::ostream& os, std::span<const Digit> digits) {
    std::string line(digits.size(), '0');
    std::transform(digits.begin(), digits.end(), line.begin(), digit_char);
    os << line << '\n';
}

void write_boundaries_csv(std::ostream& os, const DigitStream& stream) {
    os << "index,offset,source\n";
    const auto b = stream.boundaries();
    const auto s = stream.sources();
    for (std::size_t i = 0; i < b.size(); ++i) os << i << ',' << b[i] << ',' << s[i] << '\n';
}

void write_padded_csv(std::ostream& os, const PaddedTable& table) {
    os << "p,digits\n";
    for (const auto& row : table.rows) {
        os << row.p << ',';
        for (Digit d : row.digits) os << digit_char(d);
        os << '\n';
    }
}

}  // namespace normlab
