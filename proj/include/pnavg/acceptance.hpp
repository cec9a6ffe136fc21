#pragma once

// Acceptance suites. Each check records what was measured, the bound it was
// held to and the master seed it ran with; criteria group related checks.

#include "pnavg/config.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace pnavg {

struct CheckResult {
    int criterion = 0;
    std::string name;
    double measured = 0.0;
    double tolerance = 0.0;
    // How measured relates to tolerance for a pass: "<=", ">=" or "==".
    std::string relation = "<=";
    bool passed = false;
    std::uint64_t seed = 0;
    std::string detail;
};

struct AcceptanceReport {
    std::vector<CheckResult> checks;

    bool all_passed() const;
    // Pass state of every check belonging to a criterion (false if none).
    bool criterion_passed(int criterion) const;
    // Deterministic JSON: no timestamps or host details.
    std::string to_json() const;
};

int criterion_count();
std::string criterion_title(int criterion);

// Runs one criterion's checks with the seed and thread count from cfg.
std::vector<CheckResult> run_criterion(int criterion, const ExperimentConfig& cfg);

// Validates cfg (so a bad config fails before any simulation), then runs
// every criterion.
AcceptanceReport run_acceptance(const ExperimentConfig& cfg);

} // namespace pnavg
