#pragma once
// The thirteen acceptance gates, shared by the `verify` subcommand and the
// standalone acceptance binary. Each runner re-measures its criterion from
// scratch with pinned tolerances, sweeps and seeds; `details` carries the
// measured numbers next to their gates so a failing line is diagnosable
// from the log alone.

#include <string>
#include <vector>

namespace xkg {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string details;
};

inline constexpr int kNumCriteria = 13;

// workers > 0 pins the OpenMP thread count (otherwise the runtime default).
CriterionResult run_criterion(int id, int workers = 0, unsigned seed = 12345);
std::vector<CriterionResult> run_all_criteria(int workers = 0,
                                              unsigned seed = 12345);

}  // namespace xkg
