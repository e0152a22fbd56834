#include "ratealloc/verify.hpp"

#include "ratealloc/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace ratealloc {

VerifyReport verify(const Scenario &s, const VerifyOptions &opts)
{
    validate(s);
    if (is_stochastic(s)) {
        throw InvalidParameter("verify: scenario has random parameters; the oracle needs fixed utilities");
    }
    const std::size_t m = s.users.size();
    if (m > 3) {
        throw BudgetExceeded(fmt::format("verify: oracle enumeration supports at most 3 users, got {}", m));
    }
    const double points = std::pow(s.capacity / opts.grid.step, static_cast<double>(m - 1));
    if (points > opts.grid.budget) {
        throw BudgetExceeded(fmt::format("verify: grid of {:.3g} points exceeds budget of {:.3g}", points,
                                         opts.grid.budget));
    }

    std::vector<UtilityFunction> utilities;
    for (const auto &u : s.users) {
        utilities.push_back(nominal_utility(u, s.capacity));
    }

    Scenario tight = s;
    tight.delta = opts.delta;
    tight.max_iterations = opts.max_iterations;
    const RunResult run_result = run(tight, EngineOptions{.solver_tolerance = opts.solver_tolerance});
    const OracleSolution oracle = centralized_argmax(utilities, s.capacity, opts.grid);

    VerifyReport report;
    report.stop_reason = run_result.stop_reason;
    report.iterations_used = run_result.iterations_used;
    std::vector<double> distributed;
    for (const auto &[user, rate] : run_result.final_rates) {
        const double reference = oracle.rates.at(user);
        report.users.push_back({user, rate, reference, std::abs(rate - reference)});
        report.max_discrepancy = std::max(report.max_discrepancy, std::abs(rate - reference));
        distributed.push_back(rate);
    }
    report.distributed_log_objective = log_objective(utilities, distributed);
    report.oracle_log_objective = oracle.log_objective;
    report.objective_gap = oracle.log_objective - report.distributed_log_objective;
    return report;
}

std::string render_report(const VerifyReport &report)
{
    std::string out = fmt::format("auction: {} after {} iterations\n",
                                  report.stop_reason == StopReason::converged ? "converged" : "iteration cap reached",
                                  report.iterations_used);
    out += "user_id,distributed_rate,oracle_rate,abs_diff\n";
    for (const auto &u : report.users) {
        out += fmt::format("{},{:.9g},{:.9g},{:.3g}\n", u.user.value, u.distributed, u.oracle, u.abs_diff);
    }
    out += fmt::format("max_discrepancy: {:.6g}\n", report.max_discrepancy);
    out += fmt::format("log_objective distributed: {:.12g}\n", report.distributed_log_objective);
    out += fmt::format("log_objective oracle: {:.12g}\n", report.oracle_log_objective);
    out += fmt::format("objective_gap: {:.6g}\n", report.objective_gap);
    return out;
}

} // namespace ratealloc
