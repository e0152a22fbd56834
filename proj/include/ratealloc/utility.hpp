#ifndef RATEALLOC_UTILITY_HPP
#define RATEALLOC_UTILITY_HPP

#include <variant>

namespace ratealloc {

/// S-shaped utility of an adaptive real-time application.
///
/// U(r) = c * (1 / (1 + exp(-a (r - b))) - d) with c = 1 + exp(-a b) and
/// d = 1 / (1 + exp(a b)), so that U(0) = 0 and U(inf) = 1. The
/// normalization constants are derived on demand from (a, b) and never
/// formed through exp(a b), which overflows for realistic parameters.
class SigmoidalParams {
public:
    /// Throws InvalidParameter unless a > 0 and b > 0 (both finite).
    SigmoidalParams(double a, double b);

    double a() const noexcept { return a_; }
    double b() const noexcept { return b_; }

    double c() const noexcept;
    double d() const noexcept;
    /// c * d == exp(-a b), evaluated directly.
    double cd() const noexcept;

    friend bool operator==(const SigmoidalParams &, const SigmoidalParams &) = default;

private:
    double a_;
    double b_;
};

/// Concave utility of a delay-tolerant application:
/// U(r) = log(1 + k r) / log(1 + k r_max).
class LogParams {
public:
    /// Throws InvalidParameter unless k > 0 and r_max > 0 (both finite).
    LogParams(double k, double r_max);

    double k() const noexcept { return k_; }
    double r_max() const noexcept { return r_max_; }

    friend bool operator==(const LogParams &, const LogParams &) = default;

private:
    double k_;
    double r_max_;
};

/// One user's utility: either sigmoidal or logarithmic.
class UtilityFunction {
public:
    using Variant = std::variant<SigmoidalParams, LogParams>;

    UtilityFunction(SigmoidalParams p) : params_(p) {}
    UtilityFunction(LogParams p) : params_(p) {}

    static UtilityFunction sigmoidal(double a, double b) { return SigmoidalParams(a, b); }
    static UtilityFunction logarithmic(double k, double r_max) { return LogParams(k, r_max); }

    bool is_sigmoidal() const noexcept { return std::holds_alternative<SigmoidalParams>(params_); }
    bool is_logarithmic() const noexcept { return std::holds_alternative<LogParams>(params_); }

    const Variant &params() const noexcept { return params_; }

    friend bool operator==(const UtilityFunction &, const UtilityFunction &) = default;

private:
    Variant params_;
};

/// U(r) for r >= 0; result lies in [0, 1].
double eval_utility(const UtilityFunction &f, double r);

/// dU/dr. The sigmoid slope is formed from the logistic value and its
/// complement so neither factor overflows.
double eval_derivative(const UtilityFunction &f, double r);

/// d(log U)/dr = U'(r) / U(r), the marginal log-utility a user equates
/// with the shadow price. Strictly decreasing in r and unbounded as
/// r -> 0+. Throws DomainError for r <= 0 or non-finite r.
///
/// Both families use closed forms that avoid the 0/0 of the quotient near
/// r = 0: for the logarithmic family k / ((1 + k r) log(1 + k r)), with
/// the r_max normalization cancelled; for the sigmoid
/// a c (1 - s(a (r - b))) / (1 - exp(-a r)) with s the logistic function.
double log_utility_slope(const UtilityFunction &f, double r);

/// log U(r), accurate for tiny utilities. Returns -inf at r = 0.
double log_utility(const UtilityFunction &f, double r);

} // namespace ratealloc

#endif
