#include "normlab/expsum.hpp"

#include "normlab/csv.hpp"
#include "normlab/error.hpp"
#include "normlab/parallel.hpp"
#include "normlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

namespace normlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::size_t kChunk = 4096;

// Neumaier-compensated accumulator.
struct Compensated {
    double sum = 0.0;
    double comp = 0.0;

    void add(double v) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v)) {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    double value() const { return sum + comp; }
};

mpz_class pow_u(unsigned q, unsigned e) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), q, e);
    return r;
}

// Number of initial pieces so that each carries about half an oscillation.
int oscillation_pieces(const std::function<double(double)>& phase, double a, double b) {
    constexpr int kSamples = 256;
    double variation = 0.0;
    double prev = phase(a);
    for (int i = 1; i <= kSamples; ++i) {
        const double x = a + (b - a) * i / kSamples;
        const double v = phase(x);
        variation += std::abs(v - prev);
        prev = v;
    }
    return static_cast<int>(std::clamp(2.0 * variation + 1.0, 1.0, 400000.0));
}

}  // namespace

std::string_view to_string(RangeClass r) {
    switch (r) {
        case RangeClass::LeastSignificant: return "least_significant";
        case RangeClass::Middle: return "middle";
        case RangeClass::MostSignificant: return "most_significant";
        case RangeClass::OutOfRange: return "out_of_range";
    }
    return "unknown";
}

void RangeParameters::validate(const Decomposition& d) const {
    const double cap = std::min(1.0 / (4.0 * (d.k + 1)), static_cast<double>(d.theta_r_value()) / 2.0);
    if (!(0.0 < gamma && gamma < rho && rho < cap)) {
        throw DomainError("need 0 < gamma < rho < " + format_double(cap));
    }
}

RangeParameters choose_parameters(const Decomposition& d, double rho_fraction, double gamma_fraction) {
    const double cap = std::min(1.0 / (4.0 * (d.k + 1)), static_cast<double>(d.theta_r_value()) / 2.0);
    RangeParameters p{gamma_fraction * rho_fraction * cap, rho_fraction * cap};
    p.validate(d);
    return p;
}

RangeClass classify_range(int j, double P, unsigned q, const Decomposition& d, const RangeParameters& params) {
    const double lq = j * std::log(static_cast<double>(q));
    const double lp = std::log(P);
    const double theta = static_cast<double>(d.theta_r_value());
    if (lq <= (theta - params.rho) * lp) return RangeClass::LeastSignificant;
    if (theta > d.k) {
        return lq <= theta * lp ? RangeClass::MostSignificant : RangeClass::OutOfRange;
    }
    if (lq <= (d.k - 1 + params.rho) * lp) return RangeClass::Middle;
    if (lq <= d.k * lp) return RangeClass::MostSignificant;
    return RangeClass::OutOfRange;
}

// ---------------------------------------------------------------------------
// Exponential sums

PhaseTable phase_table(const PseudoPolynomial& f, unsigned q, int j, std::uint64_t limit, const PrecisionPolicy& policy,
                       unsigned workers) {
    if (j < 0) throw DomainError("digit index j must be non-negative");
    PhaseTable t;
    t.q = q;
    t.j = j;
    t.P = limit;
    t.primes = primes_up_to(limit, workers);
    t.fractions.resize(t.primes.size());
    for_each_chunk(t.primes.size(), 1024, workers, [&](std::size_t b, std::size_t e, std::size_t) {
        for (std::size_t i = b; i < e; ++i) {
            t.fractions[i] = scaled_fraction_fixed(f, t.primes[i], static_cast<unsigned>(j), q, policy);
        }
    });
    return t;
}

std::complex<double> exp_sum(const PhaseTable& table, long nu, unsigned workers) {
    if (nu < 1) throw DomainError("exp_sum requires nu >= 1");
    const std::size_t n = table.fractions.size();
    std::vector<Compensated> re((n + kChunk - 1) / kChunk);
    std::vector<Compensated> im(re.size());
    const auto scale = static_cast<unsigned __int128>(nu);
    for_each_chunk(n, kChunk, workers, [&](std::size_t b, std::size_t e, std::size_t c) {
        for (std::size_t i = b; i < e; ++i) {
            // Wrapping multiplication keeps frac(nu * x) exactly.
            const double x = fixed_to_double(table.fractions[i] * scale);
            re[c].add(std::cos(kTwoPi * x));
            im[c].add(std::sin(kTwoPi * x));
        }
    });
    Compensated total_re;
    Compensated total_im;
    for (std::size_t c = 0; c < re.size(); ++c) {
        total_re.add(re[c].value());
        total_im.add(im[c].value());
    }
    return {total_re.value(), total_im.value()};
}

ExpSumSample exp_sum_sample(const PseudoPolynomial& f, unsigned q, int j, long nu, std::uint64_t limit,
                            const PrecisionPolicy& policy, unsigned workers) {
    const PhaseTable table = phase_table(f, q, j, limit, policy, workers);
    ExpSumSample s;
    s.P = limit;
    s.j = j;
    s.nu = nu;
    s.value = exp_sum(table, nu, workers);
    const Decomposition d = decompose(f);
    s.range = classify_range(j, static_cast<double>(limit), q, d, choose_parameters(d));
    s.prime_count = table.primes.size();
    s.normalized = s.prime_count == 0 ? 0.0 : std::abs(s.value) / static_cast<double>(s.prime_count);
    return s;
}

double von_mangoldt(std::uint64_t n) {
    if (n < 2) return 0.0;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        if (n % p != 0) continue;
        while (n % p == 0) n /= p;
        return n == 1 ? std::log(static_cast<double>(p)) : 0.0;
    }
    return std::log(static_cast<double>(n));
}

namespace {

std::complex<double> weighted_sum(const PseudoPolynomial& f, unsigned q, int j, long nu, std::uint64_t t,
                                  const PrecisionPolicy& policy, bool prime_powers) {
    if (nu < 1) throw DomainError("nu must be positive");
    Compensated re;
    Compensated im;
    const auto scale = static_cast<unsigned __int128>(nu);
    for (std::uint64_t p : primes_up_to(t)) {
        const double w = std::log(static_cast<double>(p));
        for (std::uint64_t n = p; n <= t; n *= p) {
            const double x = fixed_to_double(scaled_fraction_fixed(f, n, static_cast<unsigned>(j), q, policy) * scale);
            re.add(w * std::cos(kTwoPi * x));
            im.add(w * std::sin(kTwoPi * x));
            if (!prime_powers || n > t / p) break;
        }
    }
    return {re.value(), im.value()};
}

}  // namespace

std::complex<double> mangoldt_weighted_sum(const PseudoPolynomial& f, unsigned q, int j, long nu, std::uint64_t t,
                                           const PrecisionPolicy& policy) {
    return weighted_sum(f, q, j, nu, t, policy, true);
}

std::complex<double> prime_log_weighted_sum(const PseudoPolynomial& f, unsigned q, int j, long nu, std::uint64_t t,
                                            const PrecisionPolicy& policy) {
    return weighted_sum(f, q, j, nu, t, policy, false);
}

// ---------------------------------------------------------------------------
// Integral oracles

IntegralEstimate integral_oracle(const PseudoPolynomial& f, unsigned q, int j, long nu, std::uint64_t limit, double G,
                                 double rel_tol) {
    IntegralEstimate out;
    const double P = static_cast<double>(limit);
    if (limit < 3) return out;
    const double logp = std::log(P);
    out.error_scale = P / std::pow(logp, G);
    out.lower = std::max(2.0, out.error_scale);
    if (out.lower >= P) return out;

    const long double scale = static_cast<long double>(nu) / std::pow(static_cast<long double>(q), j);
    auto phase = [&](double t) {
        return static_cast<double>(std::fmod(scale * f.eval_approx(t), 1.0L));
    };
    auto unwrapped = [&](double t) { return static_cast<double>(scale * f.eval_approx(t)); };
    auto integrand = [&](double t) { return std::polar(1.0 / std::log(t), kTwoPi * phase(t)); };
    const int pieces = oscillation_pieces(unwrapped, out.lower, P);
    const double abs_tol = rel_tol * (P - out.lower) / std::log(out.lower);
    const auto r = gauss_kronrod(integrand, out.lower, P, abs_tol, 0.0, pieces);
    out.value = r.value;
    out.quadrature_error = r.error_estimate;
    return out;
}

VdcCheck vdc_check(const std::function<double(double)>& phase, double lambda, unsigned m, double a, double b) {
    if (!(lambda > 0.0)) throw NoBound("no positive lower bound for the derivative");
    if (m < 1) throw DomainError("derivative order must be positive");
    VdcCheck out;
    out.lambda = lambda;
    out.rhs = m * std::ldexp(1.0, static_cast<int>(m)) * std::pow(lambda, -1.0 / m);
    auto integrand = [&](double x) { return std::polar(1.0, kTwoPi * std::fmod(phase(x), 1.0)); };
    const int pieces = oscillation_pieces(phase, a, b);
    out.lhs = std::abs(gauss_kronrod(integrand, a, b, 1e-11 * std::max(1.0, b - a), 0.0, pieces).value);
    out.holds = out.lhs <= out.rhs;
    return out;
}

VdcCheck vdc_bound_check(const PseudoPolynomial& f, unsigned q, int j, long nu, double a, double b, unsigned m) {
    const double fbound = derivative_lower_bound(f, m, a, b);
    // nu / q^j scaling, rounded down so the bound stays valid.
    const double scale = std::nextafter(static_cast<double>(nu) / std::pow(static_cast<double>(q), j), 0.0);
    const long double s = static_cast<long double>(nu) / std::pow(static_cast<long double>(q), j);
    return vdc_check([&](double x) { return static_cast<double>(s * f.eval_approx(x)); },
                     std::nextafter(fbound * scale, 0.0), m, a, b);
}

double decay_fit(std::span<const ExpSumSample> samples) {
    if (samples.size() < 2) throw DomainError("decay_fit needs at least two samples");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& s : samples) {
        if (!(s.normalized > 0.0)) throw DomainError("decay_fit needs non-zero sums");
        const double x = std::log(static_cast<double>(s.P));
        const double y = std::log(s.normalized);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(samples.size());
    const double denom = n * sxx - sx * sx;
    if (!(denom > 0.0)) throw DomainError("decay_fit needs at least two distinct P");
    return (n * sxy - sx * sy) / denom;
}

// ---------------------------------------------------------------------------
// Fourier bracketing

mpq_class default_delta(std::uint64_t limit, const RangeParameters& params, const Block& block) {
    const BlockIndicator ind = make_indicator(block);
    const mpq_class cap = ind.width / 4;
    const mpq_class natural = exact_rational(std::pow(static_cast<double>(limit), -params.gamma));
    return natural < cap ? natural : cap;
}

long default_nu_max(std::uint64_t limit, const RangeParameters& params) {
    return static_cast<long>(std::ceil(std::pow(static_cast<double>(limit), params.gamma)));
}

std::uint64_t direct_block_count(const PseudoPolynomial& f, const Block& block, int j,
                                 std::span<const std::uint64_t> primes, const PrecisionPolicy& policy,
                                 unsigned workers) {
    // I(q^-j f(p)) = 1 iff floor(f(p) q^(l-j)) mod q^l is the block's code.
    const auto l = static_cast<int>(block.length());
    const mpz_class modulus = pow_u(block.base, static_cast<unsigned>(l));
    const mpz_class code(static_cast<unsigned long>(block.code()));
    std::vector<std::uint64_t> partial((primes.size() + kChunk - 1) / kChunk, 0);
    for_each_chunk(primes.size(), kChunk, workers, [&](std::size_t b, std::size_t e, std::size_t c) {
        for (std::size_t i = b; i < e; ++i) {
            mpz_class v;
            if (j >= l) {
                v = eval_floor(f, primes[i], policy) / pow_u(block.base, static_cast<unsigned>(j - l));
            } else {
                v = eval_scaled_floor(f, primes[i], mpq_class(pow_u(block.base, static_cast<unsigned>(l - j))), policy);
            }
            mpz_class r;
            mpz_fdiv_r(r.get_mpz_t(), v.get_mpz_t(), modulus.get_mpz_t());
            if (r == code) ++partial[c];
        }
    });
    std::uint64_t total = 0;
    for (auto v : partial) total += v;
    return total;
}

namespace {

FourierBounds bounds_for(const PseudoPolynomial& f, const Decomposition& d, const Block& block, int j,
                         std::uint64_t limit, const PhaseTable& table, const RangeParameters& params, long nu_max,
                         const mpq_class& delta, const PrecisionPolicy& policy, unsigned workers) {
    const BlockIndicator ind = make_indicator(block);
    const SandwichPair pair = build_sandwich(ind, delta);
    const double pi_p = static_cast<double>(table.primes.size());

    FourierBounds out;
    out.delta = delta.get_d();
    out.nu_max = std::max(nu_max, 0L);
    out.tail = pi_p * fourier_tail_bound(delta, out.nu_max);
    out.main = pi_p * ind.width.get_d();
    out.range = classify_range(j, static_cast<double>(limit), block.base, d, params);

    Compensated minus;
    Compensated plus;
    minus.add(pi_p * pair.minus.mean().get_d());
    plus.add(pi_p * pair.plus.mean().get_d());
    for (long nu = 1; nu <= out.nu_max; ++nu) {
        const std::complex<double> s = exp_sum(table, nu, workers);
        // nu and -nu together contribute 2 Re(A(nu) S(nu)).
        minus.add(2.0 * (psi_coeff(pair.minus, nu) * s).real());
        plus.add(2.0 * (psi_coeff(pair.plus, nu) * s).real());
    }
    out.lo = minus.value() - out.tail;
    out.hi = plus.value() + out.tail;
    out.count = direct_block_count(f, block, j, table.primes, policy, workers);
    return out;
}

}  // namespace

FourierBounds fourier_block_bounds(const PseudoPolynomial& f, unsigned q, const Block& block, int j,
                                   std::uint64_t limit, const RangeParameters& params, long nu_max,
                                   std::optional<mpq_class> delta, const PrecisionPolicy& policy, unsigned workers) {
    if (block.base != q) throw DomainError("block base differs from q");
    const Decomposition d = decompose(f);
    const PhaseTable table = phase_table(f, q, j, limit, policy, workers);
    return bounds_for(f, d, block, j, limit, table, params, nu_max, delta.value_or(default_delta(limit, params, block)),
                      policy, workers);
}

RangeSweep range_sweep(const PseudoPolynomial& f, unsigned q, const Block& block, std::uint64_t limit,
                       const RangeParameters& params, long nu_max, std::optional<mpq_class> delta,
                       const PrecisionPolicy& policy, unsigned workers) {
    if (block.base != q) throw DomainError("block base differs from q");
    const Decomposition d = decompose(f);
    const mpq_class width = delta.value_or(default_delta(limit, params, block));
    const std::size_t J = compute_J(f, q, limit, policy);
    RangeSweep out;
    out.scale = static_cast<double>(limit) / std::log(static_cast<double>(limit));
    for (auto j = static_cast<int>(block.length()); j <= static_cast<int>(J); ++j) {
        const PhaseTable table = phase_table(f, q, j, limit, policy, workers);
        SweepRow row{j, bounds_for(f, d, block, j, limit, table, params, nu_max, width, policy, workers)};
        out.aggregate += std::abs(static_cast<double>(row.bounds.count) - row.bounds.main);
        out.rows.push_back(row);
    }
    return out;
}

void write_expsum_csv(std::ostream& os, std::span<const ExpSumSample> samples) {
    os << "P,j,nu,range,re,im,abs,normalized\n";
    for (const auto& s : samples) {
        os << s.P << ',' << s.j << ',' << s.nu << ',' << to_string(s.range) << ',' << format_double(s.value.real())
           << ',' << format_double(s.value.imag()) << ',' << format_double(std::abs(s.value)) << ','
           << format_double(s.normalized) << '\n';
    }
}

void write_sweep_csv(std::ostream& os, const RangeSweep& sweep) {
    os << "j,count,lo,hi,main\n";
    for (const auto& r : sweep.rows) {
        os << r.j << ',' << r.bounds.count << ',' << format_double(r.bounds.lo) << ',' << format_double(r.bounds.hi)
           << ',' << format_double(r.bounds.main) << '\n';
    }
}

}  // namespace normlab
