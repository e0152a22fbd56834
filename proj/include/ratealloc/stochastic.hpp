#ifndef RATEALLOC_STOCHASTIC_HPP
#define RATEALLOC_STOCHASTIC_HPP

#include "ratealloc/ue_agent.hpp"

#include <cstdint>
#include <variant>

namespace ratealloc {

struct FixedSpec {
    double value = 0.0;
    friend bool operator==(const FixedSpec &, const FixedSpec &) = default;
};

struct NormalSpec {
    double mu = 0.0;
    double sigma = 1.0; // > 0
    friend bool operator==(const NormalSpec &, const NormalSpec &) = default;
};

struct TriangularSpec {
    double min = 0.0;
    double ml = 0.0; // most likely value
    double max = 0.0;
    friend bool operator==(const TriangularSpec &, const TriangularSpec &) = default;
};

/// Distribution of one sigmoid parameter: FIXED(v), NORM(mu,sigma) or TRIA(min,ml,max).
using ParamSpec = std::variant<FixedSpec, NormalSpec, TriangularSpec>;

/// Throws InvalidParameter if the spec violates its invariants
/// (finite values, sigma > 0, min <= ml <= max with min < max).
void validate(const ParamSpec &spec);

bool is_random(const ParamSpec &spec) noexcept;

/// Counter-based generator.
///
/// A stream is a SplitMix64 sequence started from a 64-bit key; draw i of the
/// stream is the SplitMix64 finalizer applied to key + (i + 1) * golden-gamma.
/// `for_draw` derives the key from (seed, iteration, user) by chained
/// finalizer mixing, so any draw can be reproduced without replaying others.
class Rng {
public:
    explicit Rng(std::uint64_t key) noexcept : key_(key) {}

    static Rng for_draw(std::uint64_t seed, std::uint64_t iteration, std::uint64_t user) noexcept;

    std::uint64_t next_u64() noexcept;
    /// Uniform on the open interval (0, 1).
    double uniform() noexcept;
    /// Standard normal via Box-Muller (cosine branch; two uniforms per draw).
    double standard_normal() noexcept;

    std::uint64_t key() const noexcept { return key_; }
    std::uint64_t counter() const noexcept { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

/// One draw from the distribution. Fixed specs consume no randomness.
/// Triangular draws use the inverse CDF.
double sample(const ParamSpec &spec, Rng &rng);

inline constexpr double kMinSteepness = 0.1;
inline constexpr double kMinInflection = 1.0;

/// Redraws (a, b) of a sigmoidal user. Random draws are clamped to
/// a >= kMinSteepness and kMinInflection <= b <= capacity; fixed values pass
/// through unchanged. Throws InvalidParameter for a logarithmic user.
UserState resample_user(const UserState &user, const ParamSpec &a_spec, const ParamSpec &b_spec, Rng &rng,
                        double capacity);

} // namespace ratealloc

#endif
