#include "ratealloc/base_station.hpp"

#include "ratealloc/errors.hpp"

#include <cmath>
#include <string>

namespace ratealloc {

BidLedger::BidLedger(double capacity, double delta) : capacity_(capacity), delta_(delta)
{
    if (!(capacity > 0.0) || !std::isfinite(capacity)) {
        throw InvalidParameter("ledger capacity must be finite and > 0, got " + std::to_string(capacity));
    }
    if (!(delta > 0.0) || !std::isfinite(delta)) {
        throw InvalidParameter("convergence threshold delta must be finite and > 0, got " + std::to_string(delta));
    }
}

void BidLedger::submit(const BidMessage &msg)
{
    if (!(msg.bid >= 0.0) || !std::isfinite(msg.bid)) {
        throw InvalidParameter("bid of user " + std::to_string(msg.user.value) + " must be finite and >= 0, got " +
                               std::to_string(msg.bid));
    }
    current_[msg.user] = msg.bid;
}

void BidLedger::advance()
{
    previous_ = std::move(current_);
    current_.clear();
}

PriceUpdate compute_price(const BidLedger &ledger, std::uint32_t iteration)
{
    double total = 0.0;
    for (const auto &[user, bid] : ledger.current()) {
        total += bid;
    }
    if (!(total > 0.0)) {
        throw SolverError("compute_price: no strictly positive bid in the current round");
    }
    return {iteration, total / ledger.capacity()};
}

bool check_convergence(const BidLedger &ledger)
{
    const auto &cur = ledger.current();
    const auto &prev = ledger.previous();
    if (prev.empty() || cur.size() != prev.size()) {
        return false;
    }
    for (auto c = cur.begin(), p = prev.begin(); c != cur.end(); ++c, ++p) {
        if (c->first != p->first || std::abs(c->second - p->second) > ledger.delta()) {
            return false;
        }
    }
    return true;
}

RateMap allocate_rates(const BidLedger &ledger, double price)
{
    if (!(price > 0.0) || !std::isfinite(price)) {
        throw InvalidParameter("allocate_rates: price must be finite and > 0, got " + std::to_string(price));
    }
    RateMap rates;
    for (const auto &[user, bid] : ledger.current()) {
        rates.emplace(user, bid / price);
    }
    return rates;
}

} // namespace ratealloc
