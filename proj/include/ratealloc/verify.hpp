#ifndef RATEALLOC_VERIFY_HPP
#define RATEALLOC_VERIFY_HPP

#include "ratealloc/oracle.hpp"
#include "ratealloc/sim_engine.hpp"

#include <string>
#include <vector>

namespace ratealloc {

/// Auction settings used for certification. They replace the scenario's own
/// delta and iteration cap: a 20-round, delta = 1e-2 auction stops far from
/// the optimum the oracle is compared against.
struct VerifyOptions {
    GridSpec grid;
    double delta = 1e-7;
    std::uint32_t max_iterations = 100000;
    double solver_tolerance = 1e-9;
};

struct UserDiscrepancy {
    UserId user;
    double distributed = 0.0;
    double oracle = 0.0;
    double abs_diff = 0.0;
};

struct VerifyReport {
    std::vector<UserDiscrepancy> users;
    double max_discrepancy = 0.0;
    double distributed_log_objective = 0.0;
    double oracle_log_objective = 0.0;
    /// oracle minus distributed; negative when the continuous solution beats the grid.
    double objective_gap = 0.0;
    StopReason stop_reason = StopReason::iteration_cap_reached;
    std::uint32_t iterations_used = 0;
};

/// Runs the distributed auction and the brute-force oracle on the same
/// deterministic scenario (M <= 3) and compares them. Throws
/// BudgetExceeded before running anything if the grid is too large and
/// InvalidParameter for scenarios with random parameters.
VerifyReport verify(const Scenario &s, const VerifyOptions &opts = {});

std::string render_report(const VerifyReport &report);

} // namespace ratealloc

#endif
