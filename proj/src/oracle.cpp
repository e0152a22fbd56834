#include "ratealloc/oracle.hpp"

#include "ratealloc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace ratealloc {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Number of whole grid steps that fit in `span`, tolerant of representation
// error in span / step.
std::size_t steps_within(double span, double step)
{
    const double ratio = span / step;
    return static_cast<std::size_t>(std::floor(ratio + 1e-9));
}

std::vector<double> log_utility_table(const UtilityFunction &f, std::size_t count, auto &&rate_at)
{
    std::vector<double> table(count);
    for (std::size_t j = 0; j < count; ++j) {
        const double r = rate_at(j);
        table[j] = r > 0.0 ? log_utility(f, r) : kNegInf;
    }
    return table;
}

} // namespace

double log_objective(std::span<const UtilityFunction> utilities, std::span<const double> rates)
{
    if (utilities.size() != rates.size()) {
        throw InvalidParameter("log_objective: utility and rate counts differ");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < utilities.size(); ++i) {
        total += log_utility(utilities[i], rates[i]);
    }
    return total;
}

OracleSolution centralized_argmax(std::span<const UtilityFunction> utilities, double capacity, const GridSpec &grid)
{
    const std::size_t m = utilities.size();
    if (m == 0 || m > 3) {
        throw InvalidParameter("centralized_argmax supports 1 to 3 users, got " + std::to_string(m));
    }
    if (!(capacity > 0.0) || !(grid.step > 0.0) || grid.step > capacity) {
        throw InvalidParameter("centralized_argmax: need capacity > 0 and 0 < step <= capacity");
    }
    const double points = std::pow(capacity / grid.step, static_cast<double>(m - 1));
    if (points > grid.budget) {
        throw BudgetExceeded("grid of " + std::to_string(points) + " points exceeds budget of " +
                             std::to_string(grid.budget));
    }

    if (m == 1) {
        return {{{UserId{1}, capacity}}, log_utility(utilities[0], capacity)};
    }

    const double step = grid.step;
    const std::size_t n = steps_within(capacity, step);
    // table[j] holds log U at j * step for the leading users and at
    // capacity - j * step for the last one.
    const auto leading = [step](std::size_t j) { return static_cast<double>(j) * step; };
    const auto remainder = [capacity, step](std::size_t j) { return capacity - static_cast<double>(j) * step; };
    const auto last_rate_ok = [&](std::size_t used) { return remainder(used) >= step * (1.0 - 1e-9); };

    std::vector<std::vector<double>> tables;
    for (std::size_t i = 0; i + 1 < m; ++i) {
        tables.push_back(log_utility_table(utilities[i], n + 1, leading));
    }
    const std::vector<double> last = log_utility_table(utilities[m - 1], n + 1, remainder);

    double best = kNegInf;
    std::vector<std::size_t> best_idx(m - 1, 0);

    if (m == 2) {
        for (std::size_t j = 1; j <= n && last_rate_ok(j); ++j) {
            const double v = tables[0][j] + last[j];
            if (v > best) {
                best = v;
                best_idx = {j};
            }
        }
    } else {
        for (std::size_t j1 = 1; j1 <= n && last_rate_ok(j1 + 1); ++j1) {
            const double v1 = tables[0][j1];
            if (v1 == kNegInf) {
                continue;
            }
            for (std::size_t j2 = 1; j1 + j2 <= n && last_rate_ok(j1 + j2); ++j2) {
                const double v = v1 + tables[1][j2] + last[j1 + j2];
                if (v > best) {
                    best = v;
                    best_idx = {j1, j2};
                }
            }
        }
    }
    if (best == kNegInf) {
        throw SolverError("centralized_argmax: no grid point with positive utility for every user");
    }

    OracleSolution sol;
    sol.log_objective = best;
    std::size_t used = 0;
    for (std::size_t i = 0; i + 1 < m; ++i) {
        sol.rates.emplace(UserId{static_cast<std::uint32_t>(i + 1)}, leading(best_idx[i]));
        used += best_idx[i];
    }
    sol.rates.emplace(UserId{static_cast<std::uint32_t>(m)}, remainder(used));
    return sol;
}

double subproblem_argmax(const UtilityFunction &f, double price, double capacity, const GridSpec &grid)
{
    if (!(price > 0.0) || !(capacity > 0.0) || !(grid.step > 0.0)) {
        throw InvalidParameter("subproblem_argmax: price, capacity and step must be > 0");
    }
    const std::size_t n = steps_within(capacity, grid.step);
    double best_rate = 0.0;
    double best = kNegInf;
    const auto consider = [&](double r) {
        const double v = log_utility(f, r) - price * r;
        if (v > best) {
            best = v;
            best_rate = r;
        }
    };
    double r = 0.0;
    for (std::size_t j = 1; j <= n; ++j) {
        r = std::min(static_cast<double>(j) * grid.step, capacity);
        consider(r);
    }
    if (r < capacity) {
        consider(capacity);
    }
    return best_rate;
}

} // namespace ratealloc
