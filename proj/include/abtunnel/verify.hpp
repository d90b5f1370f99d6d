#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace abtunnel {

enum class VerifyLevel { fast, full };

struct CriterionResult {
    int id = 0;
    std::string title;
    bool passed = false;
    bool skipped = false;
    std::string detail;
    double seconds = 0.0;
};

struct VerifyOptions {
    VerifyLevel level = VerifyLevel::fast;
    std::vector<int> only;       // empty: all of 1..11
    std::ostream* log = nullptr;  // progress lines, may be null
};

// The acceptance suite. In fast mode lattice runs above 300^2 nodes are
// skipped and reported as such; a skip is not a failure.
std::vector<CriterionResult> run_acceptance(const VerifyOptions& opt);

// "PASS  7  title  (12.3 s)  detail"
std::string format_result(const CriterionResult& r);

bool all_passed(const std::vector<CriterionResult>& rs);

}  // namespace abtunnel
