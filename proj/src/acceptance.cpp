#include "normlab/acceptance.hpp"

#include "normlab/blockstats.hpp"
#include "normlab/commands.hpp"
#include "normlab/config.hpp"
#include "normlab/digitstream.hpp"
#include "normlab/error.hpp"
#include "normlab/expsum.hpp"
#include "normlab/quadrature.hpp"
#include "normlab/smoothing.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

namespace normlab {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        std::random_device rd;
        for (int attempt = 0; attempt < 100; ++attempt) {
            path_ = fs::temp_directory_path() / ("normlab-" + tag + "-" + std::to_string(rd()));
            if (fs::create_directory(path_)) return;
        }
        throw std::runtime_error("cannot create a temporary directory");
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    const fs::path& path() const { return path_; }

private:
    fs::path path_;
};

bool naive_is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) return false;
    }
    return true;
}

std::string naive_prefix(bool primes, std::size_t n) {
    std::string s;
    for (std::uint64_t v = primes ? 2 : 1; s.size() < n; ++v) {
        if (!primes || naive_is_prime(v)) s += std::to_string(v);
    }
    s.resize(n);
    return s;
}

std::uint64_t naive_count(const std::vector<Digit>& seq, const std::vector<Digit>& block) {
    std::uint64_t c = 0;
    for (std::size_t i = 0; i + block.size() <= seq.size(); ++i) {
        bool eq = true;
        for (std::size_t k = 0; k < block.size(); ++k) eq = eq && seq[i + k] == block[k];
        c += eq ? 1 : 0;
    }
    return c;
}

std::vector<std::uint64_t> powers_of_ten(int lo, int hi) {
    std::vector<std::uint64_t> v;
    std::uint64_t x = 1;
    for (int e = 0; e <= hi; ++e, x *= 10) {
        if (e >= lo) v.push_back(x);
    }
    return v;
}

// -------------------------------------------------------------------------

void classical_prefixes(const AcceptanceOptions& o, CriterionResult& r) {
    constexpr std::size_t n = 10000;
    bool ok = true;
    double generate_seconds = 0.0;
    for (bool primes : {false, true}) {
        ExperimentConfig c;
        c.function = "x";
        c.base = 10;
        c.mode = primes ? SourceMode::Primes : SourceMode::Integers;
        c.digits = n;
        c.format = "text";
        c.workers = o.workers;
        c.policy = o.policy;
        TempDir dir("prefix");
        std::ostringstream quiet;
        const auto t0 = std::chrono::steady_clock::now();
        run_generate(c, dir.path(), quiet);
        generate_seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const std::string got = slurp(dir.path() / "digits.txt");
        const std::string want = naive_prefix(primes, n) + "\n";
        const bool match = got == want;
        ok = ok && match;
        r.measured[primes ? "copeland_erdos" : "champernowne"] = {
            {"digits", n}, {"byte_exact", match}, {"head", got.substr(0, 20)}};
    }
    r.measured["generate_under_1s"] = generate_seconds < 1.0;
    r.passed = ok && generate_seconds < 1.0;
}

void length_bookkeeping(const AcceptanceOptions& o, CriterionResult& r) {
    const PseudoPolynomial f = parse_pseudo_polynomial("x^1.5");
    const auto grid = powers_of_ten(3, o.full ? 6 : 5);
    json rows = json::array();
    std::vector<double> values, envelope;
    for (auto P : grid) {
        const auto total = total_digit_length(f, 10, P, o.policy, o.workers);
        const double p = static_cast<double>(P);
        const double main = static_cast<double>(f.beta()) / std::log(10.0) * p;
        const double value = std::abs(static_cast<double>(total) - main) / (p / std::log(p));
        values.push_back(value);
        envelope.push_back(envelope.empty() ? value : std::max(envelope.back(), value));
        rows.push_back({{"P", P}, {"digits", total}, {"main", main}, {"normalized", value},
                        {"running_bound", envelope.back()}});
    }
    bool ok = true;
    json ratios = json::array(), literal = json::array();
    for (std::size_t i = 1; i < values.size(); ++i) {
        ratios.push_back(envelope[i] / envelope[i - 1]);
        literal.push_back(values[i] / values[i - 1]);
        ok = ok && envelope[i] <= 1.5 * envelope[i - 1];
    }
    r.measured["rows"] = rows;
    r.measured["running_bound_ratios"] = ratios;
    r.measured["pointwise_ratios"] = literal;
    r.passed = ok;
}

void discrepancy_trend(const AcceptanceOptions& o, CriterionResult& r) {
    const auto grid = powers_of_ten(4, o.full ? 7 : 5);
    bool ok = true;
    for (const char* text : {"x^1.5", "x^2.5+x^2"}) {
        const PseudoPolynomial f = parse_pseudo_polynomial(text);
        const DigitStream stream = build_tau_prefix(f, 10, grid.back(), o.policy, o.workers);
        for (std::size_t l : {1u, 2u}) {
            const auto curve = discrepancy_curve(stream.digits(), 10, l, grid);
            double worst = 0.0;
            json values = json::array();
            for (const auto& pt : curve) {
                worst = std::max(worst, pt.r_log_n);
                values.push_back(pt.r_log_n);
            }
            const double ratio = worst / curve.front().r_log_n;
            ok = ok && ratio <= 3.0;
            r.measured[std::string(text) + " l=" + std::to_string(l)] = {{"RlogN", values}, {"max_over_first", ratio}};
        }
    }
    r.measured["N"] = grid;
    r.passed = ok;
}

void digit_sum_trend(const AcceptanceOptions& o, CriterionResult& r) {
    const PseudoPolynomial f = parse_pseudo_polynomial("x^1.5");
    const auto grid = powers_of_ten(3, o.full ? 6 : 5);
    double lo = INFINITY, hi = 0.0, spot = 0.0;
    json rows = json::array();
    for (auto P : grid) {
        const Comparison c = summatory_compare(f, 10, P, o.policy, o.workers);
        lo = std::min(lo, std::abs(c.normalized));
        hi = std::max(hi, std::abs(c.normalized));
        if (P == 10000) spot = c.main;
        rows.push_back({{"P", P}, {"sum", c.sum}, {"main", c.main}, {"normalized", c.normalized}});
    }
    r.measured["rows"] = rows;
    r.measured["band_ratio"] = hi / lo;
    r.measured["main_at_1e4"] = spot;
    r.passed = hi <= 2.0 * lo && std::abs(spot - 33183.0) < 1e-6;
}

void central_trend(const AcceptanceOptions& o, CriterionResult& r) {
    const PseudoPolynomial f = parse_pseudo_polynomial("x^1.5");
    const auto grid = powers_of_ten(4, o.full ? 6 : 5);
    json rows = json::array();
    double first = 0.0, worst = 0.0;
    for (auto P : grid) {
        const PaddedTable table = padded_table(f, 10, P, o.policy, o.workers);
        double b = 0.0;
        json per_digit = json::array();
        for (Digit d = 0; d < 10; ++d) {
            const Comparison c = central_compare(f, table, make_block(10, {d}));
            b = std::max(b, std::abs(c.normalized));
            per_digit.push_back(c.normalized);
        }
        if (rows.empty()) first = b;
        worst = std::max(worst, b);
        rows.push_back({{"P", P}, {"max_over_digits", b}, {"normalized", per_digit}});
    }
    r.measured["rows"] = rows;
    r.measured["max_over_first"] = worst / first;
    r.passed = worst <= 3.0 * first;
}

void smoothing_exactness(const AcceptanceOptions& o, CriterionResult& r) {
    constexpr long kGrid = 100000;
    constexpr long kNu = 10000;
    struct Case {
        Block block;
        mpq_class delta;
    };
    const std::vector<Case> cases{{make_block(10, {4, 6}), mpq_class(1, 1000)},
                                  {make_block(10, {7}), mpq_class(1, 50)}};
    std::uint64_t sandwich_bad = 0, coeff_bad = 0;
    double mean_err = 0.0;
    for (const auto& cs : cases) {
        const BlockIndicator ind = make_indicator(cs.block);
        SandwichPair pair = build_sandwich(ind, cs.delta);
        if (o.inject_fault == "sandwich_delta") pair.minus.delta *= 4;
        for (long i = 0; i < kGrid; ++i) {
            const mpq_class t(i, kGrid);
            const int v = indicator_eval_exact(ind, t);
            if (psi_eval_exact(pair.minus, t) > v || psi_eval_exact(pair.plus, t) < v) ++sandwich_bad;
        }
        for (const TrapezoidSmoothing* psi : {&pair.minus, &pair.plus}) {
            for (long nu = 1; nu <= kNu; ++nu) {
                const double a = std::abs(psi_coeff(*psi, nu));
                if (a > psi_coeff_bound(*psi, nu) * (1 + 1e-12)) ++coeff_bad;
            }
            auto integrand = [psi](double t) { return std::complex<double>(psi_eval(*psi, t), 0.0); };
            const double integral = gauss_kronrod(integrand, 0.0, 1.0, 1e-14, 0.0, 64).value.real();
            mean_err = std::max({mean_err, std::abs(integral - psi->mean().get_d()),
                                 std::abs(psi_coeff(*psi, 0).real() - psi->mean().get_d())});
        }
    }
    r.measured["grid_points"] = kGrid * static_cast<long>(cases.size());
    r.measured["sandwich_violations"] = sandwich_bad;
    r.measured["coefficient_violations"] = coeff_bad;
    r.measured["mean_error"] = mean_err;
    if (sandwich_bad) r.measured["failed_invariant"] = "psi_minus <= indicator <= psi_plus";
    r.passed = sandwich_bad == 0 && coeff_bad == 0 && mean_err <= 1e-10;
}

void fourier_bracketing(const AcceptanceOptions& o, std::mt19937_64& rng, CriterionResult& r) {
    const std::vector<std::string> functions{"x^1.5", "x^2.5+x^2", "sqrt2*x^1.2"};
    const std::vector<std::uint64_t> limits =
        o.full ? std::vector<std::uint64_t>{1000, 10000, 100000} : std::vector<std::uint64_t>{1000, 10000};
    const long floor_nu = o.full ? 200 : 100;
    const long cap_nu = o.full ? 2000 : 400;
    constexpr int kConfigs = 24;
    int inside = 0, informative = 0;
    json rows = json::array();
    for (int i = 0; i < kConfigs; ++i) {
        const PseudoPolynomial f = parse_pseudo_polynomial(functions[i % functions.size()]);
        const unsigned q = (i / 3) % 2 ? 3 : 10;
        const std::uint64_t P = limits[i % limits.size()];
        const std::size_t len = std::uniform_int_distribution<std::size_t>(1, 2)(rng);
        std::vector<Digit> digits(len);
        for (auto& d : digits) d = static_cast<Digit>(std::uniform_int_distribution<unsigned>(0, q - 1)(rng));
        const Block block = make_block(q, digits);
        const int J = static_cast<int>(compute_J(f, q, P, o.policy));
        const int j = std::uniform_int_distribution<int>(1, J)(rng);
        const RangeParameters params = choose_parameters(decompose(f));
        // The tail 2 pi(P) / (pi^2 delta nu_max) with delta = q^-l / 4 drops
        // to about the main term pi(P) q^-l once nu_max ~ 0.8 q^(2l).
        const double wanted = std::ceil(0.82 * std::pow(static_cast<double>(q), 2.0 * static_cast<double>(len)));
        const long nu_max = std::clamp(static_cast<long>(wanted), floor_nu, cap_nu);
        const FourierBounds b = fourier_block_bounds(f, q, block, j, P, params, nu_max, std::nullopt, o.policy, o.workers);
        const bool ok = b.contains();
        inside += ok ? 1 : 0;
        informative += b.lo > 0 ? 1 : 0;
        std::string bname;
        for (auto d : digits) bname += std::to_string(d);
        rows.push_back({{"f", f.to_string()}, {"q", q}, {"block", bname}, {"j", j}, {"P", P},
                        {"nu_max", nu_max}, {"range", std::string(to_string(b.range))}, {"count", b.count}, {"lo", b.lo}, {"hi", b.hi},
                        {"inside", ok}});
    }
    r.measured["configurations"] = kConfigs;
    r.measured["inside"] = inside;
    r.measured["informative"] = informative;
    r.measured["rows"] = rows;
    r.passed = inside == kConfigs;
}

void small_oracles(const AcceptanceOptions& o, std::mt19937_64& rng, CriterionResult& r) {
    const std::uint64_t n_limit = o.full ? 100000 : 10000;
    std::uint64_t identity_bad = 0;
    for (unsigned q : {2u, 7u, 10u}) {
        const QAdditiveWeight w = QAdditiveWeight::sum_of_digits(q);
        for (std::uint64_t n = 0; n < n_limit; ++n) {
            const mpz_class m(static_cast<unsigned long>(n));
            const Expansion e = qary_digits(m, q);
            std::uint64_t rhs = 0;
            for (unsigned d = 1; d < q; ++d) rhs += d * count_block(e.digits, Block{q, {static_cast<Digit>(d)}});
            if (w.apply(m) != static_cast<double>(rhs)) ++identity_bad;
        }
    }

    const std::uint64_t P = o.full ? 10000 : 1000;
    std::uint64_t rows_checked = 0, star_bad = 0;
    for (auto [text, q] : {std::pair<const char*, unsigned>{"x^1.5", 10}, {"x^2.5+x^2", 7}}) {
        const PaddedTable table = padded_table(parse_pseudo_polynomial(text), q, P, o.policy, o.workers);
        for (const auto& row : table.rows) {
            ++rows_checked;
            const std::span<const Digit> all(row.digits);
            const auto plain = all.subspan(all.size() - row.unpadded_length);
            for (std::uint64_t code = 0; code < std::uint64_t{q} * q + q; ++code) {
                Block b = code < q ? Block{q, {static_cast<Digit>(code)}}
                                   : Block{q, {static_cast<Digit>((code - q) / q), static_cast<Digit>((code - q) % q)}};
                if (count_block(all, b) < count_block(plain, b)) ++star_bad;
            }
        }
    }

    const int sequences = o.full ? 1000 : 200;
    int scanner_bad = 0;
    for (int s = 0; s < sequences; ++s) {
        const unsigned q = std::uniform_int_distribution<unsigned>(2, 16)(rng);
        const std::size_t n = std::uniform_int_distribution<std::size_t>(0, 400)(rng);
        const std::size_t l = std::uniform_int_distribution<std::size_t>(1, 4)(rng);
        const unsigned alphabet = std::min(q, 3u);
        std::uniform_int_distribution<unsigned> digit(0, alphabet - 1);
        std::vector<Digit> seq(n), block(l);
        for (auto& d : seq) d = static_cast<Digit>(digit(rng));
        for (auto& d : block) d = static_cast<Digit>(digit(rng));
        if (count_block(seq, make_block(q, block)) != naive_count(seq, block)) ++scanner_bad;
    }
    r.measured["identity_n_below"] = n_limit;
    r.measured["identity_failures"] = identity_bad;
    r.measured["padded_rows_checked"] = rows_checked;
    r.measured["padded_failures"] = star_bad;
    r.measured["random_sequences"] = sequences;
    r.measured["scanner_mismatches"] = scanner_bad;
    r.passed = identity_bad == 0 && star_bad == 0 && scanner_bad == 0;
}

void expsum_checks(const AcceptanceOptions& o, std::mt19937_64& rng, CriterionResult& r) {
    bool ok = true;
    std::uint64_t samples = 0, over = 0;
    auto record = [&](const ExpSumSample& s) {
        ++samples;
        if (std::abs(s.value) > static_cast<double>(s.prime_count)) ++over;
    };

    // P = 10 against the multiprecision oracle.
    const PseudoPolynomial f = parse_pseudo_polynomial("x^1.5");
    const ExpSumSample small = exp_sum_sample(f, 10, 1, 1, 10, o.policy, o.workers);
    record(small);
    const std::complex<double> oracle(0.13809418016689694648, 0.72987013173533055622);
    const double small_err = std::abs(small.value - oracle);
    ok = ok && small_err <= 1e-3;
    r.measured["p10_sample"] = {{"re", small.value.real()}, {"im", small.value.imag()}, {"error", small_err}};

    // Decay in the least significant range.
    const Decomposition d = decompose(f);
    const RangeParameters params = choose_parameters(d);
    const auto grid = powers_of_ten(3, o.full ? 6 : 5);
    json slopes = json::object();
    for (int j = 1; j <= 3; ++j) {
        std::vector<ExpSumSample> fit;
        for (auto P : grid) {
            const PhaseTable table = phase_table(f, 10, j, P, o.policy, o.workers);
            for (long nu : {1L, 2L, 7L}) {
                ExpSumSample s;
                s.P = P;
                s.j = j;
                s.nu = nu;
                s.value = exp_sum(table, nu, o.workers);
                s.prime_count = table.primes.size();
                s.normalized = std::abs(s.value) / static_cast<double>(s.prime_count);
                s.range = classify_range(j, static_cast<double>(P), 10, d, params);
                record(s);
                if (nu == 1 && s.range == RangeClass::LeastSignificant) fit.push_back(s);
            }
        }
        if (fit.size() < 2) {
            slopes["j=" + std::to_string(j)] = nullptr;
            continue;
        }
        const double slope = decay_fit(fit);
        ok = ok && slope < 0.0;
        slopes["j=" + std::to_string(j)] = slope;
    }
    r.measured["decay_slopes"] = slopes;

    // Van der Corput bound on random configurations.
    const std::vector<std::string> functions{"x^1.5", "x^2.5+x^2", "2*x^1.7", "x^1.25", "pi*x^1.5+x"};
    const int configs = o.full ? 50 : 20;
    int held = 0;
    json failures = json::array();
    for (int made = 0; made < configs;) {
        const PseudoPolynomial g = parse_pseudo_polynomial(functions[std::uniform_int_distribution<std::size_t>(0, functions.size() - 1)(rng)]);
        const unsigned q = std::uniform_int_distribution<int>(0, 1)(rng) ? 10 : 2;
        const int j = q == 10 ? std::uniform_int_distribution<int>(1, 3)(rng) : std::uniform_int_distribution<int>(3, 9)(rng);
        const long nu = std::uniform_int_distribution<long>(1, 20)(rng);
        const double a = std::uniform_real_distribution<double>(2.0, 200.0)(rng);
        const double b = a + std::uniform_real_distribution<double>(1.0, 50.0)(rng);
        const unsigned m = std::uniform_int_distribution<unsigned>(1, 3)(rng);
        const double scale = static_cast<double>(nu) / std::pow(static_cast<double>(q), j);
        if (scale * (g.eval_approx(b) - g.eval_approx(a)) > 2e4) continue;
        try {
            const VdcCheck c = vdc_bound_check(g, q, j, nu, a, b, m);
            ++made;
            if (c.holds) {
                ++held;
            } else {
                failures.push_back({{"f", g.to_string()}, {"q", q}, {"j", j}, {"nu", nu}, {"a", a}, {"b", b},
                                    {"m", m}, {"lhs", c.lhs}, {"rhs", c.rhs}});
            }
        } catch (const NoBound&) {
            continue;  // not a valid configuration
        }
    }
    ok = ok && held == configs;
    r.measured["vdc_configurations"] = configs;
    r.measured["vdc_held"] = held;
    if (!failures.empty()) r.measured["vdc_failures"] = failures;
    r.measured["samples"] = samples;
    r.measured["abs_over_pi"] = over;
    r.passed = ok && over == 0;
}

ExperimentConfig determinism_config(const std::string& command, const AcceptanceOptions& o) {
    ExperimentConfig c;
    c.function = "x^1.5";
    c.policy = o.policy;
    c.seed = o.seed;
    if (command == "generate") {
        c.digits = 200000;
        c.format = "text";
        c.table_limit = 2000;
    } else if (command == "discrepancy") {
        c.ell = 2;
        c.n_grid = {10000, 100000, 200000};
    } else if (command == "sumdigits") {
        c.p_grid = {1000, 10000};
        c.central_blocks = {"1", "7"};
    } else if (command == "expsum") {
        c.expsum_p_grid = {1000, 20000};
        c.j_values = {1, 2, 3};
        c.nu_values = {1, 2, 3};
        c.sweep = true;
        c.sweep_block = "7";
        c.nu_max = 50;
        c.dump_coefficients = true;
    } else {
        c.scale = "quick";
    }
    return c;
}

void determinism(const AcceptanceOptions& o, CriterionResult& r) {
    bool ok = true;
    for (const std::string command : {"generate", "discrepancy", "sumdigits", "expsum", "verify"}) {
        std::map<unsigned, std::map<std::string, std::string>> outputs;
        std::map<unsigned, int> codes;
        for (unsigned workers : {1u, 4u}) {
            ExperimentConfig c = determinism_config(command, o);
            c.workers = workers;
            TempDir dir(command);
            std::ostringstream quiet;
            codes[workers] = run_command(command, c, dir.path(), quiet, true);
            for (const auto& entry : fs::directory_iterator(dir.path())) {
                outputs[workers][entry.path().filename().string()] = slurp(entry.path());
            }
        }
        const bool same = codes[1] == 0 && codes[4] == 0 && outputs[1] == outputs[4] && !outputs[1].empty();
        std::vector<std::string> files;
        for (const auto& [name, bytes] : outputs[1]) files.push_back(name);
        r.measured[command] = {{"identical", same}, {"files", files}, {"exit", {codes[1], codes[4]}}};
        ok = ok && same;
    }
    r.passed = ok;
}

struct Criterion {
    int id;
    const char* name;
    double budget;
    std::function<void(const AcceptanceOptions&, std::mt19937_64&, CriterionResult&)> run;
};

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& o) {
    std::mt19937_64 rng(o.seed);
    const std::vector<Criterion> criteria{
        {1, "classical_prefixes", 0, [](auto& op, auto&, auto& r) { classical_prefixes(op, r); }},
        {2, "length_bookkeeping", 120, [](auto& op, auto&, auto& r) { length_bookkeeping(op, r); }},
        {3, "discrepancy_trend", 600, [](auto& op, auto&, auto& r) { discrepancy_trend(op, r); }},
        {4, "digit_sum_trend", 120, [](auto& op, auto&, auto& r) { digit_sum_trend(op, r); }},
        {5, "central_count_trend", 300, [](auto& op, auto&, auto& r) { central_trend(op, r); }},
        {6, "smoothing_exactness", 30, [](auto& op, auto&, auto& r) { smoothing_exactness(op, r); }},
        {7, "fourier_bracketing", 300, [](auto& op, auto& g, auto& r) { fourier_bracketing(op, g, r); }},
        {8, "small_instance_oracles", 60, [](auto& op, auto& g, auto& r) { small_oracles(op, g, r); }},
        {9, "exponential_sums", 300, [](auto& op, auto& g, auto& r) { expsum_checks(op, g, r); }},
        {10, "determinism", 0, [](auto& op, auto&, auto& r) { determinism(op, r); }},
    };
    std::vector<CriterionResult> results;
    for (const auto& c : criteria) {
        if (c.id == 10 && !o.include_determinism) continue;
        if (o.only != 0 && c.id != o.only) continue;
        CriterionResult r;
        r.id = c.id;
        r.name = c.name;
        r.budget_seconds = c.budget;
        r.measured = json::object();
        const auto t0 = std::chrono::steady_clock::now();
        try {
            c.run(o, rng, r);
        } catch (const std::exception& e) {
            r.passed = false;
            r.measured["error"] = e.what();
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.budget > 0 && r.seconds > c.budget) {
            r.passed = false;
            r.measured["over_budget"] = true;
        }
        if (o.log) {
            *o.log << "[normlab] criterion " << r.id << ' ' << r.name << ": " << (r.passed ? "pass" : "FAIL") << " ("
                   << std::round(r.seconds * 100) / 100 << " s)" << std::endl;
        }
        results.push_back(std::move(r));
    }
    return results;
}

json acceptance_report(const std::vector<CriterionResult>& results, const std::string& config_hash,
                       const AcceptanceOptions& o) {
    json report;
    report["config_hash"] = config_hash;
    report["scale"] = o.full ? "full" : "quick";
    report["seed"] = o.seed;
    report["inject_fault"] = o.inject_fault;
    bool all = true;
    json failed = json::array();
    json rows = json::array();
    for (const auto& r : results) {
        all = all && r.passed;
        if (!r.passed) failed.push_back(r.name);
        rows.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"measured", r.measured}});
    }
    report["passed"] = all;
    report["failed"] = failed;
    report["criteria"] = rows;
    return report;
}

}  // namespace normlab
