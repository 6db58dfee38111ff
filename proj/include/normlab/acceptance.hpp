#pragma once

#include "normlab/pseudopoly.hpp"

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace normlab {

struct AcceptanceOptions {
    bool full = false;            ///< desk-scale grids; quick mode shrinks them
    std::uint64_t seed = 1;
    unsigned workers = 1;
    std::string inject_fault;     ///< "sandwich_delta" corrupts the minus smoothing
    PrecisionPolicy policy;
    bool include_determinism = true;
    int only = 0;                 ///< run a single criterion when non-zero
    std::ostream* log = nullptr;
};

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    nlohmann::ordered_json measured;
    double seconds = 0.0;
    double budget_seconds = 0.0;
};

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options);

/// Report without timings, so equal configs give equal bytes.
nlohmann::ordered_json acceptance_report(const std::vector<CriterionResult>& results, const std::string& config_hash,
                                         const AcceptanceOptions& options);

}  // namespace normlab
