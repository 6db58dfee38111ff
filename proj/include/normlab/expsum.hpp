#pragma once

#include "normlab/blockstats.hpp"
#include "normlab/smoothing.hpp"

#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace normlab {

/// Position class of the digit index j relative to the sizes P^(theta_r - rho),
/// P^(k - 1 + rho), P^theta_r and P^k.
enum class RangeClass { LeastSignificant, Middle, MostSignificant, OutOfRange };

std::string_view to_string(RangeClass r);

struct RangeParameters {
    double gamma = 0.0;
    double rho = 0.0;

    /// Throws DomainError unless 0 < gamma < rho < min(1/(4(k+1)), theta_r/2).
    void validate(const Decomposition& d) const;
};

/// rho = rho_fraction * min(1/(4(k+1)), theta_r/2), gamma = gamma_fraction * rho.
RangeParameters choose_parameters(const Decomposition& d, double rho_fraction = 0.9, double gamma_fraction = 0.5);

RangeClass classify_range(int j, double P, unsigned q, const Decomposition& d, const RangeParameters& params);

/// Certified frac(f(p) / q^j) for every prime p <= P, as 128-bit fixed point.
/// Reused for every frequency nu.
struct PhaseTable {
    unsigned q = 10;
    int j = 0;
    std::uint64_t P = 0;
    std::vector<std::uint64_t> primes;
    std::vector<unsigned __int128> fractions;
};

PhaseTable phase_table(const PseudoPolynomial& f, unsigned q, int j, std::uint64_t limit,
                       const PrecisionPolicy& policy = {}, unsigned workers = 1);

struct ExpSumSample {
    std::uint64_t P = 0;
    int j = 0;
    long nu = 0;
    std::complex<double> value;
    RangeClass range = RangeClass::LeastSignificant;
    std::uint64_t prime_count = 0;
    double normalized = 0.0;  ///< |S| / pi(P)
};

/// S(P, j, nu) = sum over p <= P of e(nu f(p) / q^j). Summed in fixed
/// chunks with compensation, so the value does not depend on `workers`.
std::complex<double> exp_sum(const PhaseTable& table, long nu, unsigned workers = 1);

ExpSumSample exp_sum_sample(const PseudoPolynomial& f, unsigned q, int j, long nu, std::uint64_t limit,
                            const PrecisionPolicy& policy = {}, unsigned workers = 1);

/// Lambda(n): log p if n is a power of the prime p, else 0.
double von_mangoldt(std::uint64_t n);

/// Sum over n <= t of Lambda(n) e(nu f(n) / q^j).
std::complex<double> mangoldt_weighted_sum(const PseudoPolynomial& f, unsigned q, int j, long nu, std::uint64_t t,
                                           const PrecisionPolicy& policy = {});
/// Sum over p <= t of log(p) e(nu f(p) / q^j).
std::complex<double> prime_log_weighted_sum(const PseudoPolynomial& f, unsigned q, int j, long nu, std::uint64_t t,
                                            const PrecisionPolicy& policy = {});

struct IntegralEstimate {
    std::complex<double> value;
    double error_scale = 0.0;   ///< P / (log P)^G
    double quadrature_error = 0.0;
    double lower = 0.0;         ///< integration starts at max(2, P / (log P)^G)
};

/// Integral of e(nu f(t) / q^j) / log t over [P (log P)^-G, P].
IntegralEstimate integral_oracle(const PseudoPolynomial& f, unsigned q, int j, long nu, std::uint64_t limit,
                                 double G = 2.0, double rel_tol = 1e-10);

struct VdcCheck {
    double lhs = 0.0;     ///< |integral of e(F) over [a, b]|
    double rhs = 0.0;     ///< m 2^m Lambda^(-1/m)
    double lambda = 0.0;  ///< lower bound of |F^(m)| on [a, b]
    bool holds = false;
};

/// Generic form: phase F with a known lower bound `lambda` for |F^(m)|.
/// Throws NoBound when lambda <= 0.
VdcCheck vdc_check(const std::function<double(double)>& phase, double lambda, unsigned m, double a, double b);

/// F = nu f / q^j with lambda from derivative_lower_bound.
VdcCheck vdc_bound_check(const PseudoPolynomial& f, unsigned q, int j, long nu, double a, double b, unsigned m);

/// Least-squares slope of log(|S| / pi(P)) against log P.
double decay_fit(std::span<const ExpSumSample> samples);

struct FourierBounds {
    double lo = 0.0;
    double hi = 0.0;
    std::uint64_t count = 0;  ///< sum over p <= P of I(q^-j f(p)), computed from digits
    double main = 0.0;        ///< pi(P) q^-l
    double delta = 0.0;
    double tail = 0.0;
    long nu_max = 0;
    RangeClass range = RangeClass::LeastSignificant;

    bool contains() const { return lo <= static_cast<double>(count) && static_cast<double>(count) <= hi; }
};

/// Smoothing width used when none is given: min(P^-gamma, q^-l / 4).
mpq_class default_delta(std::uint64_t limit, const RangeParameters& params, const Block& block);
/// ceil(P^gamma).
long default_nu_max(std::uint64_t limit, const RangeParameters& params);

/// Brackets the block count at digit position j between the partial
/// Fourier sums of the minus and plus smoothings, widened by the tail bound.
FourierBounds fourier_block_bounds(const PseudoPolynomial& f, unsigned q, const Block& block, int j,
                                   std::uint64_t limit, const RangeParameters& params, long nu_max,
                                   std::optional<mpq_class> delta = std::nullopt,
                                   const PrecisionPolicy& policy = {}, unsigned workers = 1);

/// Count of primes p <= P with I(q^-j f(p)) = 1.
std::uint64_t direct_block_count(const PseudoPolynomial& f, const Block& block, int j,
                                 std::span<const std::uint64_t> primes, const PrecisionPolicy& policy = {},
                                 unsigned workers = 1);

struct SweepRow {
    int j = 0;
    FourierBounds bounds;
};

struct RangeSweep {
    std::vector<SweepRow> rows;
    double aggregate = 0.0;  ///< sum over j of |count_j - pi(P) q^-l|
    double scale = 0.0;      ///< P / log P
};

/// Rows for j = l .. J.
RangeSweep range_sweep(const PseudoPolynomial& f, unsigned q, const Block& block, std::uint64_t limit,
                       const RangeParameters& params, long nu_max, std::optional<mpq_class> delta = std::nullopt,
                       const PrecisionPolicy& policy = {}, unsigned workers = 1);

/// CSV `P,j,nu,range,re,im,abs,normalized`.
void write_expsum_csv(std::ostream& os, std::span<const ExpSumSample> samples);
/// CSV `j,count,lo,hi,main`.
void write_sweep_csv(std::ostream& os, const RangeSweep& sweep);

}  // namespace normlab
