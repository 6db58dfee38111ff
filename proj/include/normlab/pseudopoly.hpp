#pragma once

#include "normlab/interval.hpp"

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace normlab {

enum class ConstantKind { One = 0, Pi = 1, E = 2, Sqrt2 = 3 };

/// An exact real c0 + c1*pi + c2*e + c3*sqrt2 with rational c_i. Literals of
/// the expression grammar live here, so constants can be enclosed at any
/// working precision and integrality is decided exactly.
class ExactReal {
public:
    ExactReal() = default;
    static ExactReal rational(const mpq_class& value);
    static ExactReal constant(ConstantKind kind);

    bool is_zero() const;
    bool is_rational() const;
    bool is_integer() const;
    const mpq_class& rational_part() const { return parts_[0]; }

    Interval enclose(mpfr_prec_t precision) const;
    long double approx() const;
    std::string to_string() const;

    ExactReal operator+(const ExactReal& other) const;
    ExactReal operator-() const;
    ExactReal operator-(const ExactReal& other) const { return *this + (-other); }
    ExactReal operator*(const mpq_class& scale) const;
    bool operator==(const ExactReal& other) const { return parts_ == other.parts_; }

    /// Sign by enclosure refinement up to `max_bits`; 0 only for exact zero.
    /// Throws AmbiguousValue when a nonzero combination cannot be resolved.
    int sign(mpfr_prec_t max_bits = 4096) const;

private:
    std::array<mpq_class, 4> parts_{};
};

/// Strict order between exact reals; throws AmbiguousValue if unresolved.
bool exact_less(const ExactReal& a, const ExactReal& b);

struct Term {
    ExactReal coefficient;
    ExactReal exponent;
};

struct PrecisionPolicy {
    int start_bits = 96;
    int max_bits = 4096;

    /// Throws DomainError unless 64 <= start_bits <= max_bits.
    void validate() const;
    /// `base` with `max_bits` replaced by NORMLAB_MAX_BITS when set.
    static PrecisionPolicy from_environment(PrecisionPolicy base);
    static PrecisionPolicy from_environment() { return from_environment(PrecisionPolicy{}); }
};

/// Enclosure [lo, hi] of a real value. `precision_bits` is the accuracy the
/// enclosure actually certifies: hi - lo <= 2^(1 - precision_bits) * max(1, |lo|).
struct CertifiedValue {
    Mpfr lo;
    Mpfr hi;
    int precision_bits;

    double midpoint() const;
    double width() const;
};

/// f = g + h: g holds the non-integer exponents in increasing order, h the
/// polynomial part keyed by integer degree.
struct Decomposition {
    std::vector<Term> g_terms;
    std::vector<Term> h_terms;
    ExactReal theta_r;
    int k = 0;

    long double theta_r_value() const { return theta_r.approx(); }
};

/// A finite sum alpha_i x^beta_i with strictly decreasing positive
/// exponents, positive leading coefficient and at least one non-integral
/// exponent. Immutable once built.
class PseudoPolynomial {
public:
    /// Merges equal exponents, drops zero terms, sorts by decreasing
    /// exponent and validates. Throws NotPseudoPolynomial. With
    /// `allow_polynomial` an all-integer exponent set is accepted, which
    /// covers the classical constructions built from f(x) = x.
    static PseudoPolynomial from_terms(std::vector<Term> terms, bool allow_polynomial = false);

    /// True when every exponent is an integer (only possible when built
    /// with allow_polynomial).
    bool is_polynomial() const;

    const std::vector<Term>& terms() const noexcept { return terms_; }
    const ExactReal& leading_coefficient() const { return terms_.front().coefficient; }
    const ExactReal& leading_exponent() const { return terms_.front().exponent; }
    long double beta() const { return leading_exponent().approx(); }

    /// Enclosure of f(n) at the given working precision.
    Interval enclose(const mpz_class& n, mpfr_prec_t precision) const;

    /// Plain floating evaluation, for quadrature and plotting only.
    long double eval_approx(long double x) const;
    long double derivative_approx(long double x, unsigned order) const;

    std::string to_string() const;

private:
    std::vector<Term> terms_;
};

PseudoPolynomial parse_pseudo_polynomial(std::string_view text);
/// Same grammar, but also accepts ordinary polynomials such as "x".
PseudoPolynomial parse_function(std::string_view text);

/// Throws NotPseudoPolynomial for polynomial input.
Decomposition decompose(const PseudoPolynomial& f);
PseudoPolynomial recombine(const Decomposition& d);

/// floor(f(n)), certified by adaptive precision.
mpz_class eval_floor(const PseudoPolynomial& f, std::uint64_t n, const PrecisionPolicy& policy);

/// floor(scale * f(n)) for a positive rational scale, certified.
mpz_class eval_scaled_floor(const PseudoPolynomial& f, std::uint64_t n, const mpq_class& scale,
                            const PrecisionPolicy& policy);

/// Enclosure of frac(nu * f(n) / q^j) with width <= 2^-53.
CertifiedValue eval_scaled_fraction(const PseudoPolynomial& f, std::uint64_t n, std::uint64_t nu,
                                    unsigned j, unsigned q, const PrecisionPolicy& policy);

/// frac(f(n) / q^j) as a 128-bit binary fixed-point number, rounded down,
/// with absolute error below 2^-100. Multiplying by an integer nu with
/// wrap-around gives frac(nu f(n) / q^j) to within nu * 2^-100.
unsigned __int128 scaled_fraction_fixed(const PseudoPolynomial& f, std::uint64_t n, unsigned j,
                                        unsigned q, const PrecisionPolicy& policy);

/// Converts a 128-bit fixed-point fraction to a double in [0, 1).
double fixed_to_double(unsigned __int128 value);

/// Rigorous lower bound for min |f^(order)(x)| over [a, b], 1 <= a <= b.
double derivative_lower_bound(const PseudoPolynomial& f, unsigned order, double a, double b);

}  // namespace normlab
