#pragma once

#include <mpfr.h>
#include <gmpxx.h>

#include <optional>
#include <string>

namespace normlab {

/// Owning wrapper around an `mpfr_t`.
class Mpfr {
public:
    explicit Mpfr(mpfr_prec_t precision);
    Mpfr(const Mpfr& other);
    Mpfr(Mpfr&& other) noexcept;
    Mpfr& operator=(const Mpfr& other);
    Mpfr& operator=(Mpfr&& other) noexcept;
    ~Mpfr();

    mpfr_ptr get() noexcept { return value_; }
    mpfr_srcptr get() const noexcept { return value_; }
    mpfr_prec_t precision() const noexcept { return mpfr_get_prec(value_); }

    double to_double(mpfr_rnd_t rnd = MPFR_RNDN) const { return mpfr_get_d(value_, rnd); }
    std::string to_string(int digits = 20) const;

private:
    mpfr_t value_;
    bool live_ = true;
};

/// Closed interval [lo, hi] with outward-rounded endpoints. All arithmetic
/// keeps the true value inside the enclosure.
class Interval {
public:
    explicit Interval(mpfr_prec_t precision);

    static Interval point(long value, mpfr_prec_t precision);
    static Interval rational(const mpq_class& value, mpfr_prec_t precision);
    static Interval pi(mpfr_prec_t precision);
    static Interval euler(mpfr_prec_t precision);
    static Interval sqrt2(mpfr_prec_t precision);

    const Mpfr& lo() const noexcept { return lo_; }
    const Mpfr& hi() const noexcept { return hi_; }
    Mpfr& lo() noexcept { return lo_; }
    Mpfr& hi() noexcept { return hi_; }
    mpfr_prec_t precision() const noexcept { return lo_.precision(); }

    bool is_point() const { return mpfr_equal_p(lo_.get(), hi_.get()) != 0; }
    bool contains_zero() const;
    bool positive() const { return mpfr_sgn(lo_.get()) > 0; }
    bool negative() const { return mpfr_sgn(hi_.get()) < 0; }

    /// hi - lo rounded up.
    Mpfr width() const;

    friend Interval operator+(const Interval& a, const Interval& b);
    friend Interval operator-(const Interval& a, const Interval& b);
    friend Interval operator*(const Interval& a, const Interval& b);
    Interval operator-() const;

    /// Division by an interval that excludes zero.
    friend Interval operator/(const Interval& a, const Interval& b);

    /// base^exponent for an integer base >= 1, monotone in the exponent.
    static Interval power(const mpz_class& base, const Interval& exponent, mpfr_prec_t precision);

    /// Floor of the enclosed value, present only when both endpoints share it.
    std::optional<mpz_class> certified_floor() const;

private:
    Mpfr lo_;
    Mpfr hi_;
};

}  // namespace normlab
