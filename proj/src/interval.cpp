#include "normlab/interval.hpp"

#include <algorithm>
#include <array>
#include <utility>

namespace normlab {

Mpfr::Mpfr(mpfr_prec_t precision) { mpfr_init2(value_, precision); }

Mpfr::Mpfr(const Mpfr& other) {
    mpfr_init2(value_, other.precision());
    mpfr_set(value_, other.value_, MPFR_RNDN);
}

Mpfr::Mpfr(Mpfr&& other) noexcept {
    // Steal the limbs; leave `other` destructible but unusable.
    *value_ = *other.value_;
    other.live_ = false;
}

Mpfr& Mpfr::operator=(const Mpfr& other) {
    if (this != &other) {
        if (!live_) {
            mpfr_init2(value_, other.precision());
            live_ = true;
        } else {
            mpfr_set_prec(value_, other.precision());
        }
        mpfr_set(value_, other.value_, MPFR_RNDN);
    }
    return *this;
}

Mpfr& Mpfr::operator=(Mpfr&& other) noexcept {
    if (this != &other) {
        if (live_) mpfr_clear(value_);
        *value_ = *other.value_;
        live_ = true;
        other.live_ = false;
    }
    return *this;
}

Mpfr::~Mpfr() {
    if (live_) mpfr_clear(value_);
}

std::string Mpfr::to_string(int digits) const {
    char* raw = nullptr;
    mpfr_asprintf(&raw, "%.*Rg", digits, value_);
    std::string out(raw);
    mpfr_free_str(raw);
    return out;
}

Interval::Interval(mpfr_prec_t precision) : lo_(precision), hi_(precision) {
    mpfr_set_zero(lo_.get(), 1);
    mpfr_set_zero(hi_.get(), 1);
}

Interval Interval::point(long value, mpfr_prec_t precision) {
    Interval r(precision);
    mpfr_set_si(r.lo_.get(), value, MPFR_RNDD);
    mpfr_set_si(r.hi_.get(), value, MPFR_RNDU);
    return r;
}

Interval Interval::rational(const mpq_class& value, mpfr_prec_t precision) {
    Interval r(precision);
    mpfr_set_q(r.lo_.get(), value.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(r.hi_.get(), value.get_mpq_t(), MPFR_RNDU);
    return r;
}

Interval Interval::pi(mpfr_prec_t precision) {
    Interval r(precision);
    mpfr_const_pi(r.lo_.get(), MPFR_RNDD);
    mpfr_const_pi(r.hi_.get(), MPFR_RNDU);
    return r;
}

Interval Interval::euler(mpfr_prec_t precision) {
    Interval r(precision);
    mpfr_set_ui(r.lo_.get(), 1, MPFR_RNDN);
    mpfr_set_ui(r.hi_.get(), 1, MPFR_RNDN);
    mpfr_exp(r.lo_.get(), r.lo_.get(), MPFR_RNDD);
    mpfr_exp(r.hi_.get(), r.hi_.get(), MPFR_RNDU);
    return r;
}

Interval Interval::sqrt2(mpfr_prec_t precision) {
    Interval r(precision);
    mpfr_sqrt_ui(r.lo_.get(), 2, MPFR_RNDD);
    mpfr_sqrt_ui(r.hi_.get(), 2, MPFR_RNDU);
    return r;
}

bool Interval::contains_zero() const {
    return mpfr_sgn(lo_.get()) <= 0 && mpfr_sgn(hi_.get()) >= 0;
}

Mpfr Interval::width() const {
    Mpfr w(precision());
    mpfr_sub(w.get(), hi_.get(), lo_.get(), MPFR_RNDU);
    return w;
}

Interval operator+(const Interval& a, const Interval& b) {
    Interval r(std::max(a.precision(), b.precision()));
    mpfr_add(r.lo_.get(), a.lo_.get(), b.lo_.get(), MPFR_RNDD);
    mpfr_add(r.hi_.get(), a.hi_.get(), b.hi_.get(), MPFR_RNDU);
    return r;
}

Interval operator-(const Interval& a, const Interval& b) {
    Interval r(std::max(a.precision(), b.precision()));
    mpfr_sub(r.lo_.get(), a.lo_.get(), b.hi_.get(), MPFR_RNDD);
    mpfr_sub(r.hi_.get(), a.hi_.get(), b.lo_.get(), MPFR_RNDU);
    return r;
}

Interval Interval::operator-() const {
    Interval r(precision());
    mpfr_neg(r.lo_.get(), hi_.get(), MPFR_RNDD);
    mpfr_neg(r.hi_.get(), lo_.get(), MPFR_RNDU);
    return r;
}

Interval operator*(const Interval& a, const Interval& b) {
    const mpfr_prec_t prec = std::max(a.precision(), b.precision());
    Interval r(prec);
    if (mpfr_sgn(a.lo_.get()) >= 0 && mpfr_sgn(b.lo_.get()) >= 0) {
        mpfr_mul(r.lo_.get(), a.lo_.get(), b.lo_.get(), MPFR_RNDD);
        mpfr_mul(r.hi_.get(), a.hi_.get(), b.hi_.get(), MPFR_RNDU);
        return r;
    }
    std::array<mpfr_srcptr, 2> xs{a.lo_.get(), a.hi_.get()};
    std::array<mpfr_srcptr, 2> ys{b.lo_.get(), b.hi_.get()};
    Mpfr t(prec);
    bool first = true;
    for (auto x : xs) {
        for (auto y : ys) {
            mpfr_mul(t.get(), x, y, MPFR_RNDD);
            if (first || mpfr_less_p(t.get(), r.lo_.get())) mpfr_set(r.lo_.get(), t.get(), MPFR_RNDD);
            mpfr_mul(t.get(), x, y, MPFR_RNDU);
            if (first || mpfr_greater_p(t.get(), r.hi_.get())) mpfr_set(r.hi_.get(), t.get(), MPFR_RNDU);
            first = false;
        }
    }
    return r;
}

Interval operator/(const Interval& a, const Interval& b) {
    const mpfr_prec_t prec = std::max(a.precision(), b.precision());
    Interval r(prec);
    std::array<mpfr_srcptr, 2> xs{a.lo_.get(), a.hi_.get()};
    std::array<mpfr_srcptr, 2> ys{b.lo_.get(), b.hi_.get()};
    Mpfr t(prec);
    bool first = true;
    for (auto x : xs) {
        for (auto y : ys) {
            mpfr_div(t.get(), x, y, MPFR_RNDD);
            if (first || mpfr_less_p(t.get(), r.lo_.get())) mpfr_set(r.lo_.get(), t.get(), MPFR_RNDD);
            mpfr_div(t.get(), x, y, MPFR_RNDU);
            if (first || mpfr_greater_p(t.get(), r.hi_.get())) mpfr_set(r.hi_.get(), t.get(), MPFR_RNDU);
            first = false;
        }
    }
    return r;
}

Interval Interval::power(const mpz_class& base, const Interval& exponent, mpfr_prec_t precision) {
    Interval r(precision);
    Mpfr b(std::max<mpfr_prec_t>(precision, static_cast<mpfr_prec_t>(mpz_sizeinbase(base.get_mpz_t(), 2))));
    mpfr_set_z(b.get(), base.get_mpz_t(), MPFR_RNDN);
    if (exponent.is_point()) {
        // One directed evaluation suffices: an inexact round-down result sits
        // strictly below the true value and one ulp below its successor.
        const int inexact = mpfr_pow(r.lo_.get(), b.get(), exponent.lo_.get(), MPFR_RNDD);
        mpfr_set(r.hi_.get(), r.lo_.get(), MPFR_RNDN);
        if (inexact != 0) mpfr_nextabove(r.hi_.get());
        return r;
    }
    // base >= 1, so x -> base^x is non-decreasing.
    mpfr_pow(r.lo_.get(), b.get(), exponent.lo_.get(), MPFR_RNDD);
    mpfr_pow(r.hi_.get(), b.get(), exponent.hi_.get(), MPFR_RNDU);
    return r;
}

std::optional<mpz_class> Interval::certified_floor() const {
    mpz_class a;
    mpz_class b;
    mpfr_get_z(a.get_mpz_t(), lo_.get(), MPFR_RNDD);
    mpfr_get_z(b.get_mpz_t(), hi_.get(), MPFR_RNDD);
    if (a != b) return std::nullopt;
    return a;
}

}  // namespace normlab
