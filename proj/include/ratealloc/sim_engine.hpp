#ifndef RATEALLOC_SIM_ENGINE_HPP
#define RATEALLOC_SIM_ENGINE_HPP

#include "ratealloc/base_station.hpp"
#include "ratealloc/stochastic.hpp"
#include "ratealloc/ue_agent.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace ratealloc {

struct SigmoidalUserSpec {
    ParamSpec a;
    ParamSpec b;
    friend bool operator==(const SigmoidalUserSpec &, const SigmoidalUserSpec &) = default;
};

struct LogUserSpec {
    double k = 1.0;
    double r_max = 100.0;
    friend bool operator==(const LogUserSpec &, const LogUserSpec &) = default;
};

using UserSpec = std::variant<SigmoidalUserSpec, LogUserSpec>;

/// A complete experiment. Users receive ids 1..M in list order.
struct Scenario {
    double capacity = 100.0;
    double delta = 1e-2;
    std::uint32_t max_iterations = 20;
    std::uint64_t seed = 0;
    /// Lets a scenario with random parameters stop as soon as bids settle.
    bool allow_early_stop = false;
    std::vector<UserSpec> users;

    friend bool operator==(const Scenario &, const Scenario &) = default;
};

/// Throws InvalidParameter naming the first offending field.
void validate(const Scenario &s);

/// True if any sigmoidal user has a NORM or TRIA parameter.
bool is_stochastic(const Scenario &s);

/// Utility a user holds before the first draw: fixed value, mean or mode,
/// clamped like a random draw.
UtilityFunction nominal_utility(const UserSpec &spec, double capacity);

struct TraceRecord {
    std::uint32_t iteration = 0;
    UserId user;
    double price = 0.0;
    double rate = 0.0;
    double bid = 0.0;
    std::optional<double> a;
    std::optional<double> b;

    friend bool operator==(const TraceRecord &, const TraceRecord &) = default;
};

enum class StopReason { converged, iteration_cap_reached };

struct RunResult {
    StopReason stop_reason = StopReason::iteration_cap_reached;
    std::uint32_t iterations_used = 0;
    /// Price at which the final allocation was made.
    double final_price = 0.0;
    RateMap final_rates;
    std::vector<TraceRecord> trace;

    friend bool operator==(const RunResult &, const RunResult &) = default;
};

struct EngineOptions {
    /// Broadcast price before any bid exists; seeds w_i(0) = capacity / M * price.
    double initial_price = 1.0;
    double solver_tolerance = kDefaultRateTolerance;
};

/// Runs the bid / shadow-price auction to convergence or the iteration cap.
///
/// Each iteration n: sigmoidal users redraw (a, b) from Rng::for_draw(seed,
/// n, id); every UE solves its subproblem at the broadcast price and bids;
/// the base station prices the new bids and tests convergence against the
/// previous round. Scenarios with random parameters always run to the cap
/// unless allow_early_stop is set. The final allocation is w_i / p with p
/// the price of the last round's bids.
RunResult run(const Scenario &s, const EngineOptions &opts = {});

/// One independent run per seed, in seed order.
std::vector<RunResult> run_replication(const Scenario &s, std::span<const std::uint64_t> seeds,
                                       const EngineOptions &opts = {});

} // namespace ratealloc

#endif
