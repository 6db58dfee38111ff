#include "normlab/commands.hpp"

#include "normlab/acceptance.hpp"
#include "normlab/blockstats.hpp"
#include "normlab/digitstream.hpp"
#include "normlab/error.hpp"
#include "normlab/expsum.hpp"
#include "normlab/smoothing.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <ostream>

namespace normlab {

namespace fs = std::filesystem;

namespace {

class Stage {
public:
    Stage(std::ostream& log, std::string name) : log_(log), name_(std::move(name)),
        start_(std::chrono::steady_clock::now()) {}
    ~Stage() {
        const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start_;
        log_ << "[normlab] " << name_ << " (" << std::round(dt.count() * 1000) / 1000 << " s)" << std::endl;
    }

private:
    std::ostream& log_;
    std::string name_;
    std::chrono::steady_clock::time_point start_;
};

std::ofstream open_out(const fs::path& dir, const std::string& name, bool binary = false) {
    fs::create_directories(dir);
    std::ofstream os(dir / name, binary ? std::ios::binary : std::ios::out);
    if (!os) throw std::runtime_error("cannot write " + (dir / name).string());
    return os;
}

RangeParameters parameters_for(const ExperimentConfig& c, const Decomposition& d) {
    RangeParameters p = choose_parameters(d);
    if (c.rho) p.rho = *c.rho;
    if (c.gamma) p.gamma = *c.gamma;
    try {
        p.validate(d);
    } catch (const DomainError& e) {
        throw ConfigError(std::string("expsum gamma/rho: ") + e.what());
    }
    return p;
}

std::string block_name(const Block& b) {
    std::string s;
    for (std::size_t i = 0; i < b.digits.size(); ++i) {
        if (b.base > 10 && i) s += '-';
        s += std::to_string(b.digits[i]);
    }
    return s;
}

}  // namespace

void run_generate(const ExperimentConfig& c, const fs::path& out, std::ostream& log) {
    const PseudoPolynomial f = c.parsed_function();
    DigitStream stream(f, c.base, c.mode, c.policy, c.workers);
    {
        Stage s(log, "generate: " + std::to_string(c.digits) + " digits");
        stream.extend_to(c.digits);
    }
    {
        Stage s(log, "generate: write digits");
        if (c.format == "text") {
            auto os = open_out(out, "digits.txt");
            write_digits_text(os, stream.digits());
        } else {
            auto os = open_out(out, "digits.bin", true);
            write_digits_raw(os, stream.digits());
        }
        auto bs = open_out(out, "boundaries.csv");
        write_boundaries_csv(bs, stream);
    }
    if (c.table_limit > 0) {
        Stage s(log, "generate: padded table to P=" + std::to_string(c.table_limit));
        const PaddedTable table = padded_table(f, c.base, c.table_limit, c.policy, c.workers);
        auto os = open_out(out, "table.csv");
        write_padded_csv(os, table);
    }
}

void run_discrepancy(const ExperimentConfig& c, const fs::path& out, std::ostream& log) {
    // Refuse an oversized block space before generating anything.
    BlockCounter probe(c.base, c.ell, c.max_block_space);
    (void)probe;
    std::vector<std::uint64_t> grid = c.n_grid;
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    const std::uint64_t n = grid.empty() ? 0 : grid.back();

    DigitStream stream(c.parsed_function(), c.base, c.mode, c.policy, c.workers);
    {
        Stage s(log, "discrepancy: " + std::to_string(n) + " digits");
        stream.extend_to(n);
    }
    std::vector<CurvePoint> curve;
    {
        Stage s(log, "discrepancy: curve over " + std::to_string(grid.size()) + " points, l=" + std::to_string(c.ell));
        if (!grid.empty()) curve = discrepancy_curve(stream.digits(), c.base, c.ell, grid, c.max_block_space);
    }
    auto os = open_out(out, "discrepancy.csv");
    write_curve_csv(os, curve);
}

void run_sumdigits(const ExperimentConfig& c, const fs::path& out, std::ostream& log) {
    const PseudoPolynomial f = c.parsed_function();
    std::vector<Comparison> rows;
    for (auto P : c.p_grid) {
        Stage s(log, "sumdigits: P=" + std::to_string(P));
        rows.push_back(summatory_compare(f, c.base, P, c.policy, c.workers));
    }
    {
        auto os = open_out(out, "sumdigits.csv");
        write_comparison_csv(os, rows);
    }
    if (c.central_blocks.empty()) return;

    std::vector<Block> blocks;
    for (const auto& b : c.central_blocks) blocks.push_back(c.parse_block(b));
    std::vector<std::vector<Comparison>> central(blocks.size());
    for (auto P : c.p_grid) {
        Stage s(log, "sumdigits: padded counts at P=" + std::to_string(P));
        const PaddedTable table = padded_table(f, c.base, P, c.policy, c.workers);
        for (std::size_t i = 0; i < blocks.size(); ++i) central[i].push_back(central_compare(f, table, blocks[i]));
    }
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        auto os = open_out(out, "central_" + block_name(blocks[i]) + ".csv");
        write_comparison_csv(os, central[i]);
    }
}

void run_expsum(const ExperimentConfig& c, const fs::path& out, std::ostream& log) {
    const PseudoPolynomial f = c.parsed_function();
    const Decomposition d = decompose(f);
    const RangeParameters params = parameters_for(c, d);

    std::vector<ExpSumSample> samples;
    for (auto P : c.expsum_p_grid) {
        for (int j : c.j_values) {
            Stage s(log, "expsum: P=" + std::to_string(P) + " j=" + std::to_string(j));
            const PhaseTable table = phase_table(f, c.base, j, P, c.policy, c.workers);
            for (long nu : c.nu_values) {
                ExpSumSample e;
                e.P = P;
                e.j = j;
                e.nu = nu;
                e.value = exp_sum(table, nu, c.workers);
                e.range = classify_range(j, static_cast<double>(P), c.base, d, params);
                e.prime_count = table.primes.size();
                e.normalized = e.prime_count == 0 ? 0.0 : std::abs(e.value) / static_cast<double>(e.prime_count);
                samples.push_back(e);
            }
        }
    }
    {
        auto os = open_out(out, "expsum.csv");
        write_expsum_csv(os, samples);
    }
    if (!c.sweep && !c.dump_coefficients) return;

    if (c.sweep_block.empty()) throw ConfigError("expsum.block is required for the sweep and coefficients");
    const Block block = c.parse_block(c.sweep_block);
    const std::uint64_t P =
        c.expsum_p_grid.empty() ? 0 : *std::max_element(c.expsum_p_grid.begin(), c.expsum_p_grid.end());
    if (P < 2) throw ConfigError("expsum.p_grid must be non-empty for the sweep");
    const long nu_max = c.nu_max.value_or(default_nu_max(P, params));
    const mpq_class delta = c.delta ? exact_rational(*c.delta) : default_delta(P, params, block);

    if (c.sweep) {
        Stage s(log, "expsum: sweep at P=" + std::to_string(P) + " nu_max=" + std::to_string(nu_max));
        const RangeSweep sweep = range_sweep(f, c.base, block, P, params, nu_max, delta, c.policy, c.workers);
        auto os = open_out(out, "sweep.csv");
        write_sweep_csv(os, sweep);
    }
    if (c.dump_coefficients) {
        Stage s(log, "expsum: coefficients");
        const SandwichPair pair = build_sandwich(make_indicator(block), delta);
        auto os = open_out(out, "coefficients.csv");
        write_coefficients_csv(os, pair.plus, nu_max);
    }
}

bool run_verify(const ExperimentConfig& c, const fs::path& out, std::ostream& log, bool nested) {
    AcceptanceOptions opt;
    opt.full = c.scale == "full";
    opt.seed = c.seed;
    opt.workers = c.workers;
    opt.inject_fault = c.inject_fault;
    opt.policy = c.policy;
    opt.include_determinism = !nested;
    opt.log = &log;
    const auto results = run_acceptance(opt);
    const auto report = acceptance_report(results, c.hash(), opt);
    auto os = open_out(out, "report.json");
    os << report.dump(2) << '\n';
    bool ok = true;
    for (const auto& r : results) {
        if (!r.passed) {
            log << "[normlab] FAILED criterion " << r.id << " (" << r.name << ")" << std::endl;
            ok = false;
        }
    }
    return ok;
}

int exit_code_for(const std::exception& e) {
    if (const auto* err = dynamic_cast<const Error*>(&e)) {
        return err->kind() == "AmbiguousValue" ? 3 : 2;
    }
    return 1;
}

bool is_command(std::string_view name) {
    return name == "generate" || name == "discrepancy" || name == "sumdigits" || name == "expsum" ||
           name == "verify";
}

int run_command(std::string_view name, const ExperimentConfig& c, const fs::path& out, std::ostream& log,
                bool nested) {
    try {
        c.validate();
        if (name == "generate") run_generate(c, out, log);
        else if (name == "discrepancy") run_discrepancy(c, out, log);
        else if (name == "sumdigits") run_sumdigits(c, out, log);
        else if (name == "expsum") run_expsum(c, out, log);
        else if (name == "verify") return run_verify(c, out, log, nested) ? 0 : 1;
        else throw ConfigError("unknown command " + std::string(name));
        return 0;
    } catch (const std::exception& e) {
        log << "[normlab] error: " << e.what() << std::endl;
        return exit_code_for(e);
    }
}

}  // namespace normlab
