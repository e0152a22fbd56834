#include "ratealloc/stochastic.hpp"

#include "ratealloc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace ratealloc {

namespace {

constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t splitmix_finalize(std::uint64_t z) noexcept
{
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

bool finite(double x) { return std::isfinite(x); }

} // namespace

void validate(const ParamSpec &spec)
{
    std::visit(overloaded{
                   [](const FixedSpec &s) {
                       if (!finite(s.value)) {
                           throw InvalidParameter("FIXED value must be finite");
                       }
                   },
                   [](const NormalSpec &s) {
                       if (!finite(s.mu) || !finite(s.sigma) || !(s.sigma > 0.0)) {
                           throw InvalidParameter("NORM requires finite mu and sigma > 0, got sigma=" +
                                                  std::to_string(s.sigma));
                       }
                   },
                   [](const TriangularSpec &s) {
                       if (!finite(s.min) || !finite(s.ml) || !finite(s.max)) {
                           throw InvalidParameter("TRIA bounds must be finite");
                       }
                       if (!(s.min <= s.ml && s.ml <= s.max && s.min < s.max)) {
                           throw InvalidParameter("TRIA requires min <= ml <= max and min < max");
                       }
                   },
               },
               spec);
}

bool is_random(const ParamSpec &spec) noexcept { return !std::holds_alternative<FixedSpec>(spec); }

Rng Rng::for_draw(std::uint64_t seed, std::uint64_t iteration, std::uint64_t user) noexcept
{
    std::uint64_t key = splitmix_finalize(seed + kGoldenGamma);
    key = splitmix_finalize(key ^ (iteration + kGoldenGamma));
    key = splitmix_finalize(key ^ (user * kGoldenGamma + 1));
    return Rng(key);
}

std::uint64_t Rng::next_u64() noexcept
{
    ++counter_;
    return splitmix_finalize(key_ + counter_ * kGoldenGamma);
}

double Rng::uniform() noexcept
{
    // 53 random mantissa bits, offset by half an ulp so 0 and 1 are excluded.
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::standard_normal() noexcept
{
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double sample(const ParamSpec &spec, Rng &rng)
{
    return std::visit(overloaded{
                          [](const FixedSpec &s) { return s.value; },
                          [&rng](const NormalSpec &s) { return s.mu + s.sigma * rng.standard_normal(); },
                          [&rng](const TriangularSpec &s) {
                              const double u = rng.uniform();
                              const double width = s.max - s.min;
                              const double split = (s.ml - s.min) / width;
                              const double x = u < split
                                                   ? s.min + std::sqrt(u * width * (s.ml - s.min))
                                                   : s.max - std::sqrt((1.0 - u) * width * (s.max - s.ml));
                              return std::clamp(x, s.min, s.max);
                          },
                      },
                      spec);
}

UserState resample_user(const UserState &user, const ParamSpec &a_spec, const ParamSpec &b_spec, Rng &rng,
                        double capacity)
{
    if (!user.utility.is_sigmoidal()) {
        throw InvalidParameter("resample_user: user " + std::to_string(user.id.value) + " is not sigmoidal");
    }
    double a = sample(a_spec, rng);
    double b = sample(b_spec, rng);
    if (is_random(a_spec)) {
        a = std::max(a, kMinSteepness);
    }
    if (is_random(b_spec)) {
        b = std::clamp(b, kMinInflection, std::max(kMinInflection, capacity));
    }
    UserState next = user;
    next.utility = UtilityFunction::sigmoidal(a, b);
    return next;
}

} // namespace ratealloc
