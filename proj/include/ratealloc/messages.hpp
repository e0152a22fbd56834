#ifndef RATEALLOC_MESSAGES_HPP
#define RATEALLOC_MESSAGES_HPP

#include <compare>
#include <cstdint>

namespace ratealloc {

/// 1-based index of a user equipment at the base station.
struct UserId {
    std::uint32_t value = 0;

    friend auto operator<=>(const UserId &, const UserId &) = default;
};

/// Shadow price broadcast from the base station to every UE.
struct PriceUpdate {
    std::uint32_t iteration = 0;
    double price = 0.0; // > 0
};

/// Bid returned by one UE after solving its subproblem.
struct BidMessage {
    UserId user;
    double bid = 0.0; // >= 0
};

} // namespace ratealloc

#endif
