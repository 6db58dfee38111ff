#pragma once

#include "normlab/blockstats.hpp"
#include "normlab/digitstream.hpp"
#include "normlab/pseudopoly.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace normlab {

/// Everything a run depends on. Parsed from a flat key = value file with
/// one section per command; unknown keys are rejected.
struct ExperimentConfig {
    // common
    std::string function = "x^1.5";
    unsigned base = 10;
    SourceMode mode = SourceMode::Primes;
    unsigned workers = 1;
    std::uint64_t seed = 1;
    PrecisionPolicy policy;

    // [generate]
    std::uint64_t digits = 0;
    std::string format = "raw";  // raw | text
    std::uint64_t table_limit = 0;

    // [discrepancy]
    std::size_t ell = 1;
    std::vector<std::uint64_t> n_grid;
    std::uint64_t max_block_space = std::uint64_t{1} << 20;

    // [sumdigits]
    std::vector<std::uint64_t> p_grid;
    std::vector<std::string> central_blocks;

    // [expsum]
    std::vector<std::uint64_t> expsum_p_grid;
    std::vector<int> j_values;
    std::vector<long> nu_values;
    std::optional<double> gamma;
    std::optional<double> rho;
    bool sweep = false;
    std::string sweep_block;
    std::optional<long> nu_max;
    std::optional<double> delta;
    bool dump_coefficients = false;

    // [verify]
    std::string scale = "quick";  // quick | full
    std::string inject_fault;     // empty | sandwich_delta

    /// NORMLAB_MAX_BITS, when set, replaces policy.max_bits.
    void apply_environment();
    /// Checks module preconditions; throws ConfigError.
    void validate() const;
    /// Canonical key = value text; equal configs serialize identically.
    std::string serialize() const;
    /// FNV-1a 64 of serialize(), as 16 hex digits.
    std::string hash() const;

    PseudoPolynomial parsed_function() const;
    Block parse_block(std::string_view text) const;
};

ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::string& path);

}  // namespace normlab
