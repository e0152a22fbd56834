#include "ratealloc/sim_engine.hpp"

#include "ratealloc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <string>

namespace ratealloc {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

double nominal(const ParamSpec &spec)
{
    return std::visit(overloaded{
                          [](const FixedSpec &s) { return s.value; },
                          [](const NormalSpec &s) { return s.mu; },
                          [](const TriangularSpec &s) { return s.ml; },
                      },
                      spec);
}

std::string user_field(std::size_t index, const char *field)
{
    return "users[" + std::to_string(index) + "]." + field;
}

} // namespace

void validate(const Scenario &s)
{
    if (!(s.capacity > 0.0) || !std::isfinite(s.capacity)) {
        throw InvalidParameter("R: capacity must be finite and > 0");
    }
    if (!(s.delta > 0.0) || !std::isfinite(s.delta)) {
        throw InvalidParameter("delta: must be finite and > 0");
    }
    if (s.max_iterations < 1) {
        throw InvalidParameter("max_iterations: must be >= 1");
    }
    if (s.users.empty()) {
        throw InvalidParameter("users: at least one user is required");
    }
    for (std::size_t i = 0; i < s.users.size(); ++i) {
        std::visit(overloaded{
                       [&](const SigmoidalUserSpec &u) {
                           for (auto [spec, name] : {std::pair{&u.a, "a"}, std::pair{&u.b, "b"}}) {
                               try {
                                   validate(*spec);
                               } catch (const InvalidParameter &e) {
                                   throw InvalidParameter(user_field(i, name) + ": " + e.what());
                               }
                               if (const auto *fixed = std::get_if<FixedSpec>(spec); fixed && !(fixed->value > 0.0)) {
                                   throw InvalidParameter(user_field(i, name) + ": FIXED value must be > 0");
                               }
                           }
                       },
                       [&](const LogUserSpec &u) {
                           if (!(u.k > 0.0) || !std::isfinite(u.k)) {
                               throw InvalidParameter(user_field(i, "k") + ": must be finite and > 0");
                           }
                           if (!(u.r_max > 0.0) || !std::isfinite(u.r_max)) {
                               throw InvalidParameter(user_field(i, "r_max") + ": must be finite and > 0");
                           }
                       },
                   },
                   s.users[i]);
    }
}

bool is_stochastic(const Scenario &s)
{
    return std::any_of(s.users.begin(), s.users.end(), [](const UserSpec &u) {
        const auto *sig = std::get_if<SigmoidalUserSpec>(&u);
        return sig && (is_random(sig->a) || is_random(sig->b));
    });
}

UtilityFunction nominal_utility(const UserSpec &spec, double capacity)
{
    return std::visit(overloaded{
                          [capacity](const SigmoidalUserSpec &u) {
                              double a = nominal(u.a);
                              double b = nominal(u.b);
                              if (is_random(u.a)) {
                                  a = std::max(a, kMinSteepness);
                              }
                              if (is_random(u.b)) {
                                  b = std::clamp(b, kMinInflection, std::max(kMinInflection, capacity));
                              }
                              return UtilityFunction::sigmoidal(a, b);
                          },
                          [](const LogUserSpec &u) { return UtilityFunction::logarithmic(u.k, u.r_max); },
                      },
                      spec);
}

RunResult run(const Scenario &s, const EngineOptions &opts)
{
    validate(s);
    if (!(opts.initial_price > 0.0) || !std::isfinite(opts.initial_price)) {
        throw InvalidParameter("initial_price must be finite and > 0");
    }

    const std::size_t m = s.users.size();
    const bool stop_early = !is_stochastic(s) || s.allow_early_stop;

    std::vector<UserState> states;
    states.reserve(m);
    BidLedger ledger(s.capacity, s.delta);
    const double seed_bid = s.capacity / static_cast<double>(m) * opts.initial_price;
    for (std::size_t i = 0; i < m; ++i) {
        const UserId id{static_cast<std::uint32_t>(i + 1)};
        states.push_back(UserState{id, nominal_utility(s.users[i], s.capacity), 0.0, seed_bid});
        ledger.submit({id, seed_bid});
    }
    ledger.advance();

    RunResult result;
    result.trace.reserve(m * s.max_iterations);
    PriceUpdate broadcast{0, opts.initial_price};

    for (std::uint32_t n = 1; n <= s.max_iterations; ++n) {
        broadcast.iteration = n;
        for (std::size_t i = 0; i < m; ++i) {
            UserState &state = states[i];
            TraceRecord rec{n, state.id, broadcast.price, 0.0, 0.0, std::nullopt, std::nullopt};
            try {
                if (const auto *sig = std::get_if<SigmoidalUserSpec>(&s.users[i])) {
                    Rng rng = Rng::for_draw(s.seed, n, state.id.value);
                    state = resample_user(state, sig->a, sig->b, rng, s.capacity);
                    const auto &params = std::get<SigmoidalParams>(state.utility.params());
                    rec.a = params.a();
                    rec.b = params.b();
                }
                auto [next, bid] = ue_step(state, broadcast, s.capacity, opts.solver_tolerance);
                state = next;
                ledger.submit(bid);
            } catch (const Error &e) {
                throw SolverError("user " + std::to_string(state.id.value) + ", iteration " + std::to_string(n) +
                                  ": " + e.what());
            }
            rec.rate = state.last_rate;
            rec.bid = state.last_bid;
            result.trace.push_back(rec);
        }

        const bool converged = check_convergence(ledger);
        const PriceUpdate next_price = compute_price(ledger, n + 1);
        result.iterations_used = n;
        result.final_price = next_price.price;

        if ((converged && stop_early) || n == s.max_iterations) {
            result.stop_reason = converged && stop_early ? StopReason::converged : StopReason::iteration_cap_reached;
            result.final_rates = allocate_rates(ledger, next_price.price);
            break;
        }
        ledger.advance();
        broadcast = next_price;
    }
    return result;
}

std::vector<RunResult> run_replication(const Scenario &s, std::span<const std::uint64_t> seeds,
                                       const EngineOptions &opts)
{
    if (seeds.empty()) {
        throw InvalidParameter("run_replication: seed list is empty");
    }
    std::vector<std::future<RunResult>> pending;
    pending.reserve(seeds.size());
    for (const std::uint64_t seed : seeds) {
        Scenario copy = s;
        copy.seed = seed;
        pending.push_back(std::async(std::launch::async, [copy = std::move(copy), opts] { return run(copy, opts); }));
    }
    std::vector<RunResult> results;
    results.reserve(pending.size());
    for (auto &f : pending) {
        results.push_back(f.get());
    }
    return results;
}

} // namespace ratealloc
