#pragma once

#include <string>
#include <vector>

namespace evostab {

/// One end-to-end check of the library against its contract, run at pinned
/// tolerances. Criteria 1..9 live here; the CLI determinism check needs
/// the built binary and lives in the acceptance test driver.
struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

std::vector<int> acceptance_criterion_ids();
std::string acceptance_criterion_name(int id);
CriterionResult run_acceptance_criterion(int id);

/// Bundles runnable through the CLI `reproduce` command; each maps to a
/// subset of the criteria above.
std::vector<std::string> reproduce_bundle_ids();
std::vector<int> reproduce_bundle_criteria(const std::string& bundle);

} // namespace evostab
