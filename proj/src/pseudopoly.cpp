#include "normlab/pseudopoly.hpp"

#include "normlab/error.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>

namespace normlab {

// ---------------------------------------------------------------------------
// ExactReal

ExactReal ExactReal::rational(const mpq_class& value) {
    ExactReal r;
    r.parts_[0] = value;
    r.parts_[0].canonicalize();
    return r;
}

ExactReal ExactReal::constant(ConstantKind kind) {
    ExactReal r;
    r.parts_[static_cast<int>(kind)] = 1;
    return r;
}

bool ExactReal::is_zero() const {
    return std::all_of(parts_.begin(), parts_.end(), [](const mpq_class& c) { return c == 0; });
}

bool ExactReal::is_rational() const {
    return parts_[1] == 0 && parts_[2] == 0 && parts_[3] == 0;
}

bool ExactReal::is_integer() const {
    return is_rational() && parts_[0].get_den() == 1;
}

Interval ExactReal::enclose(mpfr_prec_t precision) const {
    Interval sum = Interval::rational(parts_[0], precision);
    for (int i = 1; i < 4; ++i) {
        if (parts_[i] == 0) continue;
        Interval c = i == 1 ? Interval::pi(precision)
                   : i == 2 ? Interval::euler(precision)
                            : Interval::sqrt2(precision);
        sum = sum + Interval::rational(parts_[i], precision) * c;
    }
    return sum;
}

long double ExactReal::approx() const {
    static constexpr std::array<long double, 4> kValues{
        1.0L, std::numbers::pi_v<long double>, std::numbers::e_v<long double>,
        std::numbers::sqrt2_v<long double>};
    long double out = 0;
    for (int i = 0; i < 4; ++i) {
        if (parts_[i] != 0) {
            out += static_cast<long double>(parts_[i].get_num().get_d()) /
                   static_cast<long double>(parts_[i].get_den().get_d()) * kValues[i];
        }
    }
    return out;
}

std::string ExactReal::to_string() const {
    static constexpr std::array<const char*, 4> kNames{"", "pi", "e", "sqrt2"};
    std::ostringstream os;
    bool first = true;
    for (int i = 0; i < 4; ++i) {
        if (parts_[i] == 0) continue;
        if (!first) os << (parts_[i] > 0 ? "+" : "");
        first = false;
        if (i == 0) {
            os << parts_[i].get_str();
        } else if (parts_[i] == 1) {
            os << kNames[i];
        } else {
            os << parts_[i].get_str() << "*" << kNames[i];
        }
    }
    return first ? "0" : os.str();
}

ExactReal ExactReal::operator+(const ExactReal& other) const {
    ExactReal r;
    for (int i = 0; i < 4; ++i) r.parts_[i] = parts_[i] + other.parts_[i];
    return r;
}

ExactReal ExactReal::operator-() const {
    ExactReal r;
    for (int i = 0; i < 4; ++i) r.parts_[i] = -parts_[i];
    return r;
}

ExactReal ExactReal::operator*(const mpq_class& scale) const {
    ExactReal r;
    for (int i = 0; i < 4; ++i) r.parts_[i] = parts_[i] * scale;
    return r;
}

int ExactReal::sign(mpfr_prec_t max_bits) const {
    if (is_rational()) return sgn(parts_[0]);
    for (mpfr_prec_t bits = 64; bits <= max_bits; bits *= 2) {
        Interval e = enclose(bits);
        if (e.positive()) return 1;
        if (e.negative()) return -1;
    }
    throw AmbiguousValue("cannot decide the sign of " + to_string());
}

bool exact_less(const ExactReal& a, const ExactReal& b) {
    return (b - a).sign() > 0;
}

// ---------------------------------------------------------------------------
// PrecisionPolicy / CertifiedValue

void PrecisionPolicy::validate() const {
    if (start_bits < 64) throw DomainError("start_bits must be at least 64");
    if (max_bits < start_bits) throw DomainError("max_bits must be at least start_bits");
}

PrecisionPolicy PrecisionPolicy::from_environment(PrecisionPolicy base) {
    PrecisionPolicy p = base;
    if (const char* env = std::getenv("NORMLAB_MAX_BITS"); env != nullptr && *env != '\0') {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end == env || *end != '\0') throw DomainError("NORMLAB_MAX_BITS is not an integer");
        p.max_bits = static_cast<int>(v);
    }
    p.validate();
    return p;
}

double CertifiedValue::midpoint() const {
    return 0.5 * (lo.to_double() + hi.to_double());
}

double CertifiedValue::width() const {
    Mpfr w(lo.precision());
    mpfr_sub(w.get(), hi.get(), lo.get(), MPFR_RNDU);
    return w.to_double(MPFR_RNDU);
}

// ---------------------------------------------------------------------------
// PseudoPolynomial

PseudoPolynomial PseudoPolynomial::from_terms(std::vector<Term> terms, bool allow_polynomial) {
    std::vector<Term> merged;
    for (auto& t : terms) {
        auto it = std::find_if(merged.begin(), merged.end(),
                               [&](const Term& m) { return m.exponent == t.exponent; });
        if (it != merged.end()) {
            it->coefficient = it->coefficient + t.coefficient;
        } else {
            merged.push_back(std::move(t));
        }
    }
    std::erase_if(merged, [](const Term& t) { return t.coefficient.is_zero(); });
    if (merged.empty()) throw NotPseudoPolynomial("no non-zero terms");

    for (const auto& t : merged) {
        if (t.exponent.sign() <= 0) {
            throw NotPseudoPolynomial("exponent " + t.exponent.to_string() + " is not positive");
        }
    }
    std::sort(merged.begin(), merged.end(),
              [](const Term& a, const Term& b) { return exact_less(b.exponent, a.exponent); });
    if (merged.front().coefficient.sign() <= 0) {
        throw NotPseudoPolynomial("leading coefficient must be positive");
    }
    if (!allow_polynomial && std::all_of(merged.begin(), merged.end(),
                                         [](const Term& t) { return t.exponent.is_integer(); })) {
        throw NotPseudoPolynomial("at least one exponent must be non-integral");
    }
    PseudoPolynomial f;
    f.terms_ = std::move(merged);
    return f;
}

bool PseudoPolynomial::is_polynomial() const {
    return std::all_of(terms_.begin(), terms_.end(), [](const Term& t) { return t.exponent.is_integer(); });
}

Interval PseudoPolynomial::enclose(const mpz_class& n, mpfr_prec_t precision) const {
    Interval sum(precision);
    for (const auto& t : terms_) {
        Interval power = Interval::power(n, t.exponent.enclose(precision), precision);
        if (t.coefficient.is_rational() && t.coefficient.rational_part() == 1) {
            sum = sum + power;
        } else {
            sum = sum + t.coefficient.enclose(precision) * power;
        }
    }
    return sum;
}

long double PseudoPolynomial::eval_approx(long double x) const {
    long double out = 0;
    for (const auto& t : terms_) out += t.coefficient.approx() * std::pow(x, t.exponent.approx());
    return out;
}

long double PseudoPolynomial::derivative_approx(long double x, unsigned order) const {
    long double out = 0;
    for (const auto& t : terms_) {
        const long double e = t.exponent.approx();
        long double c = t.coefficient.approx();
        for (unsigned i = 0; i < order; ++i) c *= e - static_cast<long double>(i);
        if (c != 0) out += c * std::pow(x, e - static_cast<long double>(order));
    }
    return out;
}

std::string PseudoPolynomial::to_string() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        if (i > 0) os << " + ";
        os << "(" << terms_[i].coefficient.to_string() << ")*x^(" << terms_[i].exponent.to_string() << ")";
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
public:
    explicit Parser(std::string_view text) {
        for (char c : text) {
            if (!std::isspace(static_cast<unsigned char>(c))) src_.push_back(c);
        }
    }

    std::vector<Term> parse() {
        if (src_.empty()) fail("empty expression");
        std::vector<Term> terms;
        bool negative = false;
        if (peek() == '+' || peek() == '-') negative = get() == '-';
        terms.push_back(term(negative));
        while (pos_ < src_.size()) {
            const char op = get();
            if (op != '+' && op != '-') fail(std::string("unexpected '") + op + "'");
            terms.push_back(term(op == '-'));
        }
        return terms;
    }

private:
    Term term(bool negative) {
        ExactReal coeff = ExactReal::rational(1);
        if (peek() != 'x') {
            coeff = literal();
            if (get() != '*') fail("expected '*' after coefficient");
        }
        if (get() != 'x') fail("expected 'x'");
        ExactReal exponent = ExactReal::rational(1);
        if (peek() == '^') {
            ++pos_;
            exponent = literal();
        }
        return Term{negative ? -coeff : coeff, exponent};
    }

    ExactReal literal() {
        for (auto [name, kind] : {std::pair{"sqrt2", ConstantKind::Sqrt2}, std::pair{"pi", ConstantKind::Pi},
                                  std::pair{"e", ConstantKind::E}}) {
            const std::string_view n(name);
            if (src_.compare(pos_, n.size(), n) == 0) {
                pos_ += n.size();
                return ExactReal::constant(kind);
            }
        }
        const std::size_t start = pos_;
        std::string digits;
        std::size_t frac_digits = 0;
        bool dot = false;
        while (pos_ < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) {
            if (src_[pos_] == '.') {
                if (dot) fail("malformed number");
                dot = true;
            } else {
                digits.push_back(src_[pos_]);
                if (dot) ++frac_digits;
            }
            ++pos_;
        }
        if (digits.empty()) {
            pos_ = start;
            fail("expected a number or constant");
        }
        mpz_class num(digits, 10);
        mpz_class den;
        mpz_ui_pow_ui(den.get_mpz_t(), 10, frac_digits);
        return ExactReal::rational(mpq_class(num, den));
    }

    char peek() const { return pos_ < src_.size() ? src_[pos_] : '\0'; }
    char get() {
        if (pos_ >= src_.size()) fail("unexpected end of expression");
        return src_[pos_++];
    }
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(msg + " at offset " + std::to_string(pos_) + " in '" + src_ + "'");
    }

    std::string src_;
    std::size_t pos_ = 0;
};

}  // namespace

PseudoPolynomial parse_pseudo_polynomial(std::string_view text) {
    return PseudoPolynomial::from_terms(Parser(text).parse());
}

PseudoPolynomial parse_function(std::string_view text) {
    return PseudoPolynomial::from_terms(Parser(text).parse(), true);
}

// ---------------------------------------------------------------------------
// Decomposition

Decomposition decompose(const PseudoPolynomial& f) {
    if (f.is_polynomial()) throw NotPseudoPolynomial("a polynomial has no non-integral part to decompose");
    Decomposition d;
    for (const auto& t : f.terms()) {
        if (t.exponent.is_integer()) {
            d.h_terms.push_back(t);
        } else {
            d.g_terms.push_back(t);
        }
    }
    // terms() is decreasing; g is stored increasing.
    std::reverse(d.g_terms.begin(), d.g_terms.end());
    d.theta_r = d.g_terms.back().exponent;
    d.k = d.h_terms.empty() ? 0 : static_cast<int>(d.h_terms.front().exponent.rational_part().get_num().get_si());
    return d;
}

PseudoPolynomial recombine(const Decomposition& d) {
    std::vector<Term> terms = d.g_terms;
    terms.insert(terms.end(), d.h_terms.begin(), d.h_terms.end());
    return PseudoPolynomial::from_terms(std::move(terms));
}

// ---------------------------------------------------------------------------
// Certified evaluation

namespace {

int effective_bits(const Interval& value, int working_bits) {
    Mpfr w = value.width();
    if (mpfr_zero_p(w.get())) return working_bits;
    Mpfr scale(working_bits);
    mpfr_abs(scale.get(), value.lo().get(), MPFR_RNDD);
    if (mpfr_cmp_ui(scale.get(), 1) < 0) mpfr_set_ui(scale.get(), 1, MPFR_RNDN);
    mpfr_div(w.get(), w.get(), scale.get(), MPFR_RNDU);
    // w <= 2^(exp-1) with exp the MPFR exponent, so bits = 2 - exp works.
    const long exp = mpfr_get_exp(w.get());
    return static_cast<int>(std::min<long>(working_bits, 2 - exp));
}

[[noreturn]] void ambiguous(std::uint64_t n, const Interval& tightest) {
    throw AmbiguousValue("cannot certify value at n=" + std::to_string(n) + ", enclosure [" +
                         tightest.lo().to_string(30) + ", " + tightest.hi().to_string(30) + "]");
}

// start, 2*start, ... with the last step clamped to `cap`.
std::vector<mpfr_prec_t> precision_schedule(mpfr_prec_t start, mpfr_prec_t cap) {
    std::vector<mpfr_prec_t> out;
    if (cap < start) cap = start;
    for (mpfr_prec_t b = start; b < cap; b *= 2) out.push_back(b);
    out.push_back(cap);
    return out;
}

mpz_class pow_u(unsigned q, unsigned j) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), q, j);
    return r;
}

// Working precision large enough that the integer part leaves `fraction_bits`.
mpfr_prec_t initial_bits(const PseudoPolynomial& f, std::uint64_t n, int fraction_bits, const PrecisionPolicy& policy) {
    const long double mag = std::max<long double>(1.0L, f.eval_approx(static_cast<long double>(n)));
    const int int_bits = static_cast<int>(std::log2(mag)) + 2;
    return std::max(policy.start_bits, int_bits + fraction_bits);
}

}  // namespace

mpz_class eval_floor(const PseudoPolynomial& f, std::uint64_t n, const PrecisionPolicy& policy) {
    if (n < 1) throw DomainError("eval_floor requires n >= 1");
    const mpz_class arg(static_cast<unsigned long>(n));
    std::optional<Interval> last;
    for (mpfr_prec_t bits : precision_schedule(policy.start_bits, policy.max_bits)) {
        Interval v = f.enclose(arg, bits);
        if (auto fl = v.certified_floor()) return *fl < 0 ? mpz_class(0) : *fl;
        last = std::move(v);
    }
    ambiguous(n, *last);
}

mpz_class eval_scaled_floor(const PseudoPolynomial& f, std::uint64_t n, const mpq_class& scale,
                            const PrecisionPolicy& policy) {
    if (n < 1) throw DomainError("eval_scaled_floor requires n >= 1");
    const mpz_class arg(static_cast<unsigned long>(n));
    std::optional<Interval> last;
    for (mpfr_prec_t bits : precision_schedule(initial_bits(f, n, 32, policy), policy.max_bits)) {
        Interval v = f.enclose(arg, bits) * Interval::rational(scale, bits);
        if (auto fl = v.certified_floor()) return *fl < 0 ? mpz_class(0) : *fl;
        last = std::move(v);
    }
    ambiguous(n, *last);
}

CertifiedValue eval_scaled_fraction(const PseudoPolynomial& f, std::uint64_t n, std::uint64_t nu,
                                    unsigned j, unsigned q, const PrecisionPolicy& policy) {
    if (q < 2) throw DomainError("base must be at least 2");
    if (n < 1 || nu < 1) throw DomainError("eval_scaled_fraction requires n >= 1 and nu >= 1");
    const mpz_class arg(static_cast<unsigned long>(n));
    const mpq_class scale(mpz_class(static_cast<unsigned long>(nu)), pow_u(q, j));
    std::optional<Interval> last;
    for (mpfr_prec_t bits : precision_schedule(initial_bits(f, n, 64, policy), policy.max_bits)) {
        Interval v = f.enclose(arg, bits) * Interval::rational(scale, bits);
        auto fl = v.certified_floor();
        if (fl) {
            Interval frac = v - Interval::rational(mpq_class(*fl), bits);
            if (frac.width().to_double(MPFR_RNDU) <= std::ldexp(1.0, -53)) {
                const int eff = effective_bits(frac, static_cast<int>(bits));
                return CertifiedValue{frac.lo(), frac.hi(), eff};
            }
        }
        last = std::move(v);
    }
    ambiguous(n, *last);
}

unsigned __int128 scaled_fraction_fixed(const PseudoPolynomial& f, std::uint64_t n, unsigned j,
                                        unsigned q, const PrecisionPolicy& policy) {
    const mpz_class arg(static_cast<unsigned long>(n));
    const mpq_class scale(mpz_class(1), pow_u(q, j));
    std::optional<Interval> last;
    for (mpfr_prec_t bits : precision_schedule(initial_bits(f, n, 160, policy), policy.max_bits)) {
        Interval v = f.enclose(arg, bits) * Interval::rational(scale, bits);
        if (auto fl = v.certified_floor()) {
            Interval frac = v - Interval::rational(mpq_class(*fl), bits);
            if (frac.width().to_double(MPFR_RNDU) <= std::ldexp(1.0, -110)) {
                Mpfr scaled(bits + 130);
                mpfr_mul_2ui(scaled.get(), frac.lo().get(), 128, MPFR_RNDD);
                mpz_class z;
                mpfr_get_z(z.get_mpz_t(), scaled.get(), MPFR_RNDD);
                if (z < 0) z = 0;
                const mpz_class mask = (mpz_class(1) << 64) - 1;
                const mpz_class hi_part = z >> 64;
                const mpz_class lo_part = z & mask;
                return (static_cast<unsigned __int128>(mpz_get_ui(hi_part.get_mpz_t())) << 64) |
                       static_cast<unsigned __int128>(mpz_get_ui(lo_part.get_mpz_t()));
            }
        }
        last = std::move(v);
    }
    ambiguous(n, *last);
}

double fixed_to_double(unsigned __int128 value) {
    // Top 64 bits carry everything a double can hold.
    return std::ldexp(static_cast<double>(static_cast<std::uint64_t>(value >> 64)), -64);
}

// ---------------------------------------------------------------------------
// Derivative bounds

namespace {

Interval real_power(double base, const Interval& exponent, mpfr_prec_t precision) {
    Interval r(precision);
    Mpfr b(precision);
    mpfr_set_d(b.get(), base, MPFR_RNDN);
    // For base >= 1 the map is monotone in the exponent; for each fixed
    // exponent it is monotone in the base, which the caller exploits.
    mpfr_pow(r.lo().get(), b.get(), exponent.lo().get(), MPFR_RNDD);
    mpfr_pow(r.hi().get(), b.get(), exponent.hi().get(), MPFR_RNDU);
    return r;
}

}  // namespace

double derivative_lower_bound(const PseudoPolynomial& f, unsigned order, double a, double b) {
    if (!(a >= 1.0) || !(b >= a)) throw DomainError("derivative_lower_bound requires 1 <= a <= b");
    constexpr mpfr_prec_t kBits = 160;

    struct Piece {
        Mpfr min_abs{kBits};
        Mpfr max_abs{kBits};
        int sign = 0;
    };
    std::vector<Piece> pieces;
    for (const auto& t : f.terms()) {
        // Falling factorial (e)_order vanishes for integer e < order.
        if (t.exponent.is_integer() && t.exponent.rational_part() < order) continue;
        Interval c = t.coefficient.enclose(kBits);
        Interval e = t.exponent.enclose(kBits);
        for (unsigned i = 0; i < order; ++i) c = c * (e - Interval::point(static_cast<long>(i), kBits));
        Interval shifted = e - Interval::point(static_cast<long>(order), kBits);

        Piece p;
        p.sign = c.positive() ? 1 : c.negative() ? -1 : 0;
        Mpfr abs_lo(kBits);
        Mpfr abs_hi(kBits);
        if (p.sign > 0) {
            mpfr_set(abs_lo.get(), c.lo().get(), MPFR_RNDD);
            mpfr_set(abs_hi.get(), c.hi().get(), MPFR_RNDU);
        } else if (p.sign < 0) {
            mpfr_neg(abs_lo.get(), c.hi().get(), MPFR_RNDD);
            mpfr_neg(abs_hi.get(), c.lo().get(), MPFR_RNDU);
        } else {
            mpfr_set_zero(abs_lo.get(), 1);
            mpfr_abs(abs_hi.get(), c.lo().get(), MPFR_RNDU);
            mpfr_max(abs_hi.get(), abs_hi.get(), c.hi().get(), MPFR_RNDU);
        }
        // x^e is monotone in x for fixed e, so extremes sit at the endpoints.
        Interval at_a = real_power(a, shifted, kBits);
        Interval at_b = real_power(b, shifted, kBits);
        mpfr_min(p.min_abs.get(), at_a.lo().get(), at_b.lo().get(), MPFR_RNDD);
        mpfr_max(p.max_abs.get(), at_a.hi().get(), at_b.hi().get(), MPFR_RNDU);
        mpfr_mul(p.min_abs.get(), p.min_abs.get(), abs_lo.get(), MPFR_RNDD);
        mpfr_mul(p.max_abs.get(), p.max_abs.get(), abs_hi.get(), MPFR_RNDU);
        pieces.push_back(std::move(p));
    }
    if (pieces.empty()) return 0.0;

    Mpfr best(kBits);
    mpfr_set_zero(best.get(), 1);
    const bool same_sign = std::all_of(pieces.begin(), pieces.end(), [&](const Piece& p) {
        return p.sign != 0 && p.sign == pieces.front().sign;
    });
    if (same_sign) {
        for (const auto& p : pieces) mpfr_add(best.get(), best.get(), p.min_abs.get(), MPFR_RNDD);
    } else {
        Mpfr candidate(kBits);
        for (std::size_t d = 0; d < pieces.size(); ++d) {
            mpfr_set(candidate.get(), pieces[d].min_abs.get(), MPFR_RNDD);
            for (std::size_t i = 0; i < pieces.size(); ++i) {
                if (i != d) mpfr_sub(candidate.get(), candidate.get(), pieces[i].max_abs.get(), MPFR_RNDD);
            }
            if (mpfr_greater_p(candidate.get(), best.get())) mpfr_set(best.get(), candidate.get(), MPFR_RNDD);
        }
    }
    return best.to_double(MPFR_RNDD);
}

}  // namespace normlab
