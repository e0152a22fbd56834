#include "ratealloc/utility.hpp"

#include "ratealloc/errors.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace ratealloc {

namespace {

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

// Logistic 1 / (1 + exp(-x)) without overflow for either sign of x.
double logistic(double x)
{
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

// log of the logistic function.
double log_logistic(double x)
{
    if (x >= 0.0) {
        return -std::log1p(std::exp(-x));
    }
    return x - std::log1p(std::exp(x));
}

// s(x) * (1 - s(x)) with s the logistic function.
double logistic_slope(double x)
{
    const double e = std::exp(-std::abs(x));
    const double denom = 1.0 + e;
    return e / (denom * denom);
}

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

void require_rate(double r, const char *op)
{
    if (!(r >= 0.0) || std::isinf(r)) {
        throw DomainError(std::string(op) + ": rate must be finite and >= 0, got " + std::to_string(r));
    }
}

} // namespace

SigmoidalParams::SigmoidalParams(double a, double b) : a_(a), b_(b)
{
    if (!positive_finite(a)) {
        throw InvalidParameter("sigmoidal steepness a must be > 0, got " + std::to_string(a));
    }
    if (!positive_finite(b)) {
        throw InvalidParameter("sigmoidal inflection b must be > 0, got " + std::to_string(b));
    }
}

double SigmoidalParams::c() const noexcept { return 1.0 + std::exp(-a_ * b_); }

double SigmoidalParams::d() const noexcept
{
    const double e = std::exp(-a_ * b_);
    return e / (1.0 + e);
}

double SigmoidalParams::cd() const noexcept { return std::exp(-a_ * b_); }

LogParams::LogParams(double k, double r_max) : k_(k), r_max_(r_max)
{
    if (!positive_finite(k)) {
        throw InvalidParameter("logarithmic coefficient k must be > 0, got " + std::to_string(k));
    }
    if (!positive_finite(r_max)) {
        throw InvalidParameter("logarithmic r_max must be > 0, got " + std::to_string(r_max));
    }
}

// c (s(a (r - b)) - d) rearranges to (1 - exp(-a r)) * s(a (r - b)): exactly
// zero at r = 0 and never above one.
double eval_utility(const UtilityFunction &f, double r)
{
    require_rate(r, "eval_utility");
    return std::visit(overloaded{
                          [r](const SigmoidalParams &p) {
                              return -std::expm1(-p.a() * r) * logistic(p.a() * (r - p.b()));
                          },
                          [r](const LogParams &p) {
                              return std::log1p(p.k() * r) / std::log1p(p.k() * p.r_max());
                          },
                      },
                      f.params());
}

double eval_derivative(const UtilityFunction &f, double r)
{
    require_rate(r, "eval_derivative");
    return std::visit(overloaded{
                          [r](const SigmoidalParams &p) {
                              return p.c() * p.a() * logistic_slope(p.a() * (r - p.b()));
                          },
                          [r](const LogParams &p) {
                              return p.k() / ((1.0 + p.k() * r) * std::log1p(p.k() * p.r_max()));
                          },
                      },
                      f.params());
}

double log_utility_slope(const UtilityFunction &f, double r)
{
    if (!(r > 0.0) || std::isinf(r)) {
        throw DomainError("log_utility_slope: rate must be finite and > 0, got " + std::to_string(r));
    }
    return std::visit(overloaded{
                          [r](const SigmoidalParams &p) {
                              const double x = p.a() * (r - p.b());
                              return p.c() * p.a() * logistic(-x) / -std::expm1(-p.a() * r);
                          },
                          [r](const LogParams &p) {
                              const double kr = p.k() * r;
                              return p.k() / ((1.0 + kr) * std::log1p(kr));
                          },
                      },
                      f.params());
}

double log_utility(const UtilityFunction &f, double r)
{
    require_rate(r, "log_utility");
    if (r == 0.0) {
        return -std::numeric_limits<double>::infinity();
    }
    return std::visit(overloaded{
                          [r](const SigmoidalParams &p) {
                              return std::log(-std::expm1(-p.a() * r)) + log_logistic(p.a() * (r - p.b()));
                          },
                          [r](const LogParams &p) {
                              return std::log(std::log1p(p.k() * r)) - std::log(std::log1p(p.k() * p.r_max()));
                          },
                      },
                      f.params());
}

} // namespace ratealloc
