#include "ratealloc/ue_agent.hpp"

#include "ratealloc/errors.hpp"

#include <cmath>
#include <string>

namespace ratealloc {

SubproblemSolution solve_rate(const UtilityFunction &f, double price, double capacity, double tol)
{
    if (!(price > 0.0) || !std::isfinite(price)) {
        throw InvalidParameter("solve_rate: price must be finite and > 0, got " + std::to_string(price));
    }
    if (!(capacity > 0.0) || !std::isfinite(capacity)) {
        throw InvalidParameter("solve_rate: capacity must be finite and > 0, got " + std::to_string(capacity));
    }
    if (!(tol > 0.0) || tol >= capacity) {
        throw InvalidParameter("solve_rate: tolerance must lie in (0, capacity), got " + std::to_string(tol));
    }

    const auto excess_slope = [&](double r) { return log_utility_slope(f, r) - price; };

    if (excess_slope(capacity) >= 0.0) {
        return {capacity, 0, true};
    }
    if (excess_slope(tol) <= 0.0) {
        return {tol, 0, false};
    }

    double lo = tol;
    double hi = capacity;
    int steps = 0;
    while (hi - lo > tol) {
        if (++steps > kMaxBisectionSteps) {
            throw SolverError("solve_rate: bisection did not converge within " +
                              std::to_string(kMaxBisectionSteps) + " steps");
        }
        const double mid = 0.5 * (lo + hi);
        if (excess_slope(mid) > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return {0.5 * (lo + hi), steps, false};
}

double compute_bid(double price, double rate) { return price * rate; }

std::pair<UserState, BidMessage> ue_step(const UserState &state, const PriceUpdate &msg, double capacity,
                                         double tol)
{
    UserState next = state;
    next.last_rate = solve_rate(state.utility, msg.price, capacity, tol).rate;
    next.last_bid = compute_bid(msg.price, next.last_rate);
    return {next, BidMessage{next.id, next.last_bid}};
}

} // namespace ratealloc
