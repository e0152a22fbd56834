#ifndef RATEALLOC_UE_AGENT_HPP
#define RATEALLOC_UE_AGENT_HPP

#include "ratealloc/messages.hpp"
#include "ratealloc/utility.hpp"

#include <utility>

namespace ratealloc {

inline constexpr double kDefaultRateTolerance = 1e-6;
inline constexpr int kMaxBisectionSteps = 200;

/// What one user equipment remembers between auction rounds.
struct UserState {
    UserId id;
    UtilityFunction utility;
    double last_rate = 0.0;
    double last_bid = 0.0;
};

struct SubproblemSolution {
    double rate = 0.0;
    int bisection_steps = 0;
    /// True when the price was too low to bind and the rate was clamped to capacity.
    bool clamped = false;
};

/// argmax over 0 <= r <= capacity of log U(r) - price * r.
///
/// Bisects g(r) = log_utility_slope(f, r) - price on [tol, capacity] until
/// the bracket is no wider than tol and returns its midpoint. When
/// g(capacity) >= 0 the optimum lies at or beyond capacity and capacity is
/// returned; when g(tol) <= 0 the optimum lies below tol and tol is
/// returned. Throws SolverError if kMaxBisectionSteps is exhausted.
SubproblemSolution solve_rate(const UtilityFunction &f, double price, double capacity,
                              double tol = kDefaultRateTolerance);

/// Kelly bid: price times requested rate.
double compute_bid(double price, double rate);

/// One UE round: solve for the rate at the broadcast price and bid for it.
std::pair<UserState, BidMessage> ue_step(const UserState &state, const PriceUpdate &msg, double capacity,
                                         double tol = kDefaultRateTolerance);

} // namespace ratealloc

#endif
