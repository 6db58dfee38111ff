#include "normlab/smoothing.hpp"

#include "normlab/csv.hpp"
#include "normlab/error.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

namespace normlab {

namespace {

constexpr double kPi = std::numbers::pi;

mpq_class floor_q(const mpq_class& x) {
    mpz_class f;
    mpz_fdiv_q(f.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return mpq_class(f);
}

// x - floor(x), exact.
mpq_class frac_q(const mpq_class& x) { return x - floor_q(x); }

// sin(pi * x) with x reduced exactly modulo 2 first.
double sin_pi(const mpq_class& x) {
    mpq_class r = x / 2;
    r = 2 * frac_q(r);
    return std::sin(kPi * r.get_d());
}

}  // namespace

mpq_class exact_rational(double v) {
    if (!std::isfinite(v)) throw DomainError("non-finite value");
    mpq_class q;
    mpq_set_d(q.get_mpq_t(), v);
    return q;
}

TrapezoidSmoothing build_psi(const mpq_class& alpha, const mpq_class& beta, const mpq_class& delta) {
    const mpq_class len = beta - alpha;
    if (!(delta > 0 && delta < mpq_class(1, 2))) throw InvalidWindow("need 0 < delta < 1/2");
    if (!(delta <= len && len <= 1 - delta)) throw InvalidWindow("need delta <= beta - alpha <= 1 - delta");
    return TrapezoidSmoothing{alpha, beta, delta};
}

mpq_class psi_eval_exact(const TrapezoidSmoothing& psi, const mpq_class& t) {
    const mpq_class half = psi.delta / 2;
    const mpq_class start = psi.alpha - half;
    // Shift t into [start, start + 1).
    const mpq_class x = start + frac_q(t - start);
    if (x < psi.alpha + half) return (x - start) / psi.delta;
    if (x <= psi.beta - half) return 1;
    if (x < psi.beta + half) return (psi.beta + half - x) / psi.delta;
    return 0;
}

double psi_eval(const TrapezoidSmoothing& psi, double t) {
    const double a = psi.alpha.get_d();
    const double b = psi.beta.get_d();
    const double d = psi.delta.get_d();
    const double start = a - d / 2;
    double x = t - start;
    x -= std::floor(x);
    x += start;
    double v;
    if (x < a + d / 2) {
        v = (x - start) / d;
    } else if (x <= b - d / 2) {
        v = 1.0;
    } else if (x < b + d / 2) {
        v = (b + d / 2 - x) / d;
    } else {
        v = 0.0;
    }
    return std::clamp(v, 0.0, 1.0);
}

std::complex<double> psi_coeff(const TrapezoidSmoothing& psi, long nu) {
    if (nu == 0) return {psi.mean().get_d(), 0.0};
    const mpq_class n(nu);
    const double pn = kPi * static_cast<double>(nu);
    // Interval [alpha, beta]: e(-nu (alpha+beta)/2) sin(pi nu (beta-alpha)) / (pi nu).
    const double interval = sin_pi(n * psi.mean()) / pn;
    // Box of width delta: sin(pi nu delta) / (pi nu delta).
    const double kernel = sin_pi(n * psi.delta) / (pn * psi.delta.get_d());
    const double phase = -2.0 * kPi * frac_q(n * (psi.alpha + psi.beta) / 2).get_d();
    return std::polar(interval * kernel, phase);
}

double psi_coeff_bound(const TrapezoidSmoothing& psi, long nu) {
    const double n = std::abs(static_cast<double>(nu));
    return std::min({1.0 / (kPi * n), psi.mean().get_d(), 1.0 / (kPi * kPi * n * n * psi.delta.get_d())});
}

double fourier_tail_bound(const mpq_class& delta, long nu_max) {
    // sum_{nu > n} 1/nu^2 < 1/(n + 1/2), since 1/nu^2 < 1/(nu - 1/2) - 1/(nu + 1/2).
    const double n = static_cast<double>(std::max(nu_max, 0L));
    return 2.0 / (kPi * kPi * delta.get_d() * (n + 0.5));
}

PartialFourier partial_fourier_eval(const TrapezoidSmoothing& psi, double t, long nu_max) {
    PartialFourier out;
    double sum = psi.mean().get_d();
    const mpq_class tq = exact_rational(t);
    for (long nu = 1; nu <= nu_max; ++nu) {
        // A(-nu) = conj A(nu), so the pair contributes 2 Re(A(nu) e(nu t)).
        const double angle = 2.0 * kPi * frac_q(mpq_class(nu) * tq).get_d();
        sum += 2.0 * (psi_coeff(psi, nu) * std::polar(1.0, angle)).real();
    }
    out.value = sum;
    out.tail_bound = fourier_tail_bound(psi.delta, nu_max);
    return out;
}

BlockIndicator make_indicator(const Block& block) {
    BlockIndicator ind{block, 0, 1};
    mpq_class scale(1);
    for (Digit d : block.digits) {
        scale /= block.base;
        ind.left += scale * d;
    }
    ind.width = scale;
    return ind;
}

int indicator_eval_exact(const BlockIndicator& ind, const mpq_class& t) {
    const mpq_class x = frac_q(t);
    return (x >= ind.left && x < ind.left + ind.width) ? 1 : 0;
}

int indicator_eval(const BlockIndicator& ind, double t) {
    return indicator_eval_exact(ind, exact_rational(t - std::floor(t)));
}

SandwichPair build_sandwich(const BlockIndicator& ind, const mpq_class& delta) {
    if (!(delta > 0) || delta > ind.width / 4) {
        throw DeltaTooLarge("delta must lie in (0, q^-l / 4]");
    }
    const mpq_class half = delta / 2;
    SandwichPair s{build_psi(ind.left + half, ind.left + ind.width - half, delta),
                   build_psi(ind.left - half, ind.left + ind.width + half, delta), delta};
    return s;
}

void write_coefficients_csv(std::ostream& os, const TrapezoidSmoothing& psi, long nu_max) {
    os << "nu,re,im,bound\n";
    for (long nu = 1; nu <= nu_max; ++nu) {
        const auto a = psi_coeff(psi, nu);
        os << nu << ',' << format_double(a.real()) << ',' << format_double(a.imag()) << ','
           << format_double(psi_coeff_bound(psi, nu)) << '\n';
    }
}

}  // namespace normlab
