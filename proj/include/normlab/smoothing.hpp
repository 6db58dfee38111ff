#pragma once

#include "normlab/blockstats.hpp"

#include <gmpxx.h>

#include <complex>
#include <iosfwd>

namespace normlab {

/// 1-periodic trapezoid: the indicator of [alpha, beta] convolved with the
/// normalized box of width delta. It equals 1 on [alpha + delta/2,
/// beta - delta/2], 0 on [beta + delta/2, 1 + alpha - delta/2] and is
/// linear in between. Endpoints are exact rationals.
struct TrapezoidSmoothing {
    mpq_class alpha;
    mpq_class beta;
    mpq_class delta;

    /// Fourier coefficient of index 0, i.e. the mean.
    mpq_class mean() const { return beta - alpha; }
};

/// Throws InvalidWindow unless 0 < delta < 1/2 and delta <= beta - alpha <= 1 - delta.
TrapezoidSmoothing build_psi(const mpq_class& alpha, const mpq_class& beta, const mpq_class& delta);

double psi_eval(const TrapezoidSmoothing& psi, double t);
mpq_class psi_eval_exact(const TrapezoidSmoothing& psi, const mpq_class& t);

/// A(nu) = integral over one period of psi(x) e(-nu x) dx, in closed form.
std::complex<double> psi_coeff(const TrapezoidSmoothing& psi, long nu);

/// min(1/(pi |nu|), beta - alpha, 1/(pi^2 nu^2 delta)) for nu != 0.
double psi_coeff_bound(const TrapezoidSmoothing& psi, long nu);

/// Upper bound for the sum over |nu| > nu_max of 1/(pi^2 nu^2 delta).
double fourier_tail_bound(const mpq_class& delta, long nu_max);

struct PartialFourier {
    double value = 0.0;
    double tail_bound = 0.0;
};

/// A(0) + sum over 0 < |nu| <= nu_max of A(nu) e(nu t).
PartialFourier partial_fourier_eval(const TrapezoidSmoothing& psi, double t, long nu_max);

/// Indicator of the digit block: 1 when frac(t) lies in [L, L + q^-l).
struct BlockIndicator {
    Block block;
    mpq_class left;
    mpq_class width;
};

BlockIndicator make_indicator(const Block& block);
int indicator_eval(const BlockIndicator& ind, double t);
int indicator_eval_exact(const BlockIndicator& ind, const mpq_class& t);

/// minus <= indicator <= plus pointwise, with means q^-l -/+ delta.
struct SandwichPair {
    TrapezoidSmoothing minus;
    TrapezoidSmoothing plus;
    mpq_class delta;
};

/// Windows [L + delta/2, L + w - delta/2] and [L - delta/2, L + w + delta/2],
/// both smoothed with width delta. Throws DeltaTooLarge unless 0 < delta <= w/4.
SandwichPair build_sandwich(const BlockIndicator& ind, const mpq_class& delta);

/// Exact rational for a double (every finite double is a dyadic rational).
mpq_class exact_rational(double v);

/// CSV `nu,re,im,bound` for 1 <= nu <= nu_max.
void write_coefficients_csv(std::ostream& os, const TrapezoidSmoothing& psi, long nu_max);

}  // namespace normlab
