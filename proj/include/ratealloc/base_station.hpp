#ifndef RATEALLOC_BASE_STATION_HPP
#define RATEALLOC_BASE_STATION_HPP

#include "ratealloc/messages.hpp"

#include <cstdint>
#include <map>

namespace ratealloc {

using RateMap = std::map<UserId, double>;

/// Bids of the current and the previous round, as stored by the base station.
class BidLedger {
public:
    /// Throws InvalidParameter unless capacity > 0 and delta > 0.
    BidLedger(double capacity, double delta);

    /// Records a bid for the current round, replacing any earlier bid of the
    /// same user in this round. Throws InvalidParameter for negative bids.
    void submit(const BidMessage &msg);

    /// Closes the round: current bids become the previous ones.
    void advance();

    double capacity() const noexcept { return capacity_; }
    double delta() const noexcept { return delta_; }
    const std::map<UserId, double> &current() const noexcept { return current_; }
    const std::map<UserId, double> &previous() const noexcept { return previous_; }

private:
    double capacity_;
    double delta_;
    std::map<UserId, double> current_;
    std::map<UserId, double> previous_;
};

/// p = (sum of current bids) / capacity. Throws SolverError when no bid is
/// strictly positive.
PriceUpdate compute_price(const BidLedger &ledger, std::uint32_t iteration = 0);

/// True iff both rounds cover the same users and every user's bid moved by
/// at most delta in absolute value. False while no previous round exists.
bool check_convergence(const BidLedger &ledger);

/// r_i = w_i / p for every current bid. Throws InvalidParameter for p <= 0.
RateMap allocate_rates(const BidLedger &ledger, double price);

} // namespace ratealloc

#endif
