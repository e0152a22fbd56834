#ifndef RATEALLOC_ORACLE_HPP
#define RATEALLOC_ORACLE_HPP

#include "ratealloc/base_station.hpp"
#include "ratealloc/utility.hpp"

#include <span>

namespace ratealloc {

inline constexpr double kDefaultGridBudget = 1e10;

struct GridSpec {
    double step = 1e-3;
    /// Upper bound on (capacity / step)^(M - 1).
    double budget = kDefaultGridBudget;
};

struct OracleSolution {
    RateMap rates;
    double log_objective = 0.0;
};

/// Sum of log U_i(r_i); users are matched to rates by position.
double log_objective(std::span<const UtilityFunction> utilities, std::span<const double> rates);

/// Brute-force maximizer of prod U_i(r_i) subject to sum r_i = capacity.
///
/// Enumerates multiples of step for users 1..M-1 (each >= step) and gives
/// the remainder, also required to be >= step, to user M. The objective is
/// summed in log space; grid points where any utility is zero are skipped.
/// Ties go to the lexicographically smallest rate vector. Supports M <= 3.
/// Throws BudgetExceeded when the enumeration is too large, InvalidParameter
/// for M == 0 or M > 3.
OracleSolution centralized_argmax(std::span<const UtilityFunction> utilities, double capacity, const GridSpec &grid);

/// Grid argmax of log U(r) - price * r over {step, 2 step, ...} plus capacity.
double subproblem_argmax(const UtilityFunction &f, double price, double capacity, const GridSpec &grid);

} // namespace ratealloc

#endif
