#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace dgff {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

struct AcceptanceOptions {
    std::uint64_t seed = 20240601;
    int threads = 1;
    std::vector<int> only;  // empty runs all sixteen
};

struct CriterionInfo {
    int id;
    std::string name;
};
std::vector<CriterionInfo> acceptance_criteria();

// Runs the acceptance criteria in order; the callback sees each result as it
// completes. An exception inside a criterion counts as a failure.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt,
                                            const std::function<void(const CriterionResult&)>& on_result = {});

// "PASS 01 green-poisson-residual (1.2 s): detail"
std::string format_result(const CriterionResult& r);

} // namespace dgff
