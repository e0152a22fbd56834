// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include "ratealloc/oracle.hpp"
#include "ratealloc/scenario_io.hpp"
#include "ratealloc/sim_engine.hpp"
#include "ratealloc/verify.hpp"

#include "../test_support.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace ratealloc;
using ratealloc::testing::dense_grid_max;
using ratealloc::testing::price_for_rate;
using ratealloc::testing::random_utility;
using ratealloc::testing::subproblem_objective;
using ratealloc::testing::triangular_cdf;

namespace {

class Criterion {
public:
    explicit Criterion(std::string title) : title_(std::move(title)) {}

    void check(bool ok, const std::string &what)
    {
        pass_ = pass_ && ok;
        details_.push_back(fmt::format("    [{}] {}", ok ? "ok" : "FAILED", what));
    }
    void note(const std::string &what) { details_.push_back("    note: " + what); }

    bool report() const
    {
        fmt::print("{} {}\n", pass_ ? "[PASS]" : "[FAIL]", title_);
        for (const auto &d : details_) {
            fmt::print("{}\n", d);
        }
        std::fflush(stdout);
        return pass_;
    }

private:
    std::string title_;
    bool pass_ = true;
    std::vector<std::string> details_;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double total(const RateMap &rates)
{
    return std::accumulate(rates.begin(), rates.end(), 0.0, [](double acc, const auto &kv) { return acc + kv.second; });
}

// Utility a trace record was solved against.
UtilityFunction record_utility(const Scenario &s, const TraceRecord &rec)
{
    if (rec.a) {
        return UtilityFunction::sigmoidal(*rec.a, *rec.b);
    }
    return nominal_utility(s.users[rec.user.value - 1], s.capacity);
}

std::string slurp(const std::filesystem::path &p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

double naive_sigmoid(double a, double b, double r)
{
    const double eab = std::exp(a * b);
    return (1.0 + eab) / eab * (1.0 / (1.0 + std::exp(-a * (r - b))) - 1.0 / (1.0 + eab));
}

bool paper_fixed()
{
    Criterion c("AC1 paper-fixed scenario: converges (delta=1e-2) within 20 iterations, capacity, rates above b_i, "
                "positive log rates, runtime << 1 s");
    const Scenario s = preset("paper-fixed");
    const auto t0 = Clock::now();
    const RunResult r = run(s);
    const double elapsed = seconds_since(t0);

    c.check(r.stop_reason == StopReason::converged && r.iterations_used <= 20,
            fmt::format("converged within 20 iterations: stop={}, iterations={}",
                        r.stop_reason == StopReason::converged ? "converged" : "cap", r.iterations_used));
    c.check(std::abs(total(r.final_rates) - 100.0) <= 1e-6 * 100.0,
            fmt::format("final rates sum to 100 within 1e-6 relative: {:.12g}", total(r.final_rates)));
    const double b[] = {20, 25, 35};
    for (std::uint32_t i = 0; i < 3; ++i) {
        const double rate = r.final_rates.at(UserId{4 + i});
        c.check(rate > b[i], fmt::format("sigmoid user {} rate {:.6f} > b = {}", 4 + i, rate, b[i]));
    }
    for (std::uint32_t i = 1; i <= 3; ++i) {
        const double rate = r.final_rates.at(UserId{i});
        c.check(rate > 0.0, fmt::format("logarithmic user {} rate {:.6f} > 0", i, rate));
    }
    c.check(elapsed < 0.1, fmt::format("runtime {:.4f} s < 0.1 s", elapsed));

    Scenario uncapped = s;
    uncapped.max_iterations = 1000;
    const RunResult settled = run(uncapped);
    c.note(fmt::format("with the cap lifted the same auction first satisfies delta=1e-2 at iteration {} (price {:.6f})",
                       settled.iterations_used, settled.final_price));
    return c.report();
}

Scenario random_scenario(std::mt19937_64 &gen, std::size_t m)
{
    Scenario s;
    s.capacity = std::uniform_real_distribution<double>(20.0, 100.0)(gen);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t i = 0; i < m; ++i) {
        // Multi-user scenarios keep one logarithmic user so capacity is never
        // left unused by users whose demand saturates.
        const bool logarithmic = (m > 1 && i == 0) || unit(gen) < 0.5;
        if (logarithmic) {
            s.users.emplace_back(LogUserSpec{std::uniform_real_distribution<double>(0.01, 2.0)(gen),
                                             std::uniform_real_distribution<double>(0.5, 2.0)(gen) * s.capacity});
        } else {
            s.users.emplace_back(
                SigmoidalUserSpec{FixedSpec{std::uniform_real_distribution<double>(0.3, 3.0)(gen)},
                                  FixedSpec{std::uniform_real_distribution<double>(0.05, 0.3)(gen) * s.capacity}});
        }
    }
    return s;
}

bool oracle_equivalence()
{
    Criterion c("AC2 oracle equivalence: 20 random scenarios, M in {1,2,3}, per-user rate within 0.05 and "
                "log-objective within 1e-3, total runtime <= 300 s");
    std::mt19937_64 gen(20240601);
    const auto t0 = Clock::now();
    double worst_rate = 0.0;
    double worst_gap = 0.0;
    for (int t = 0; t < 20; ++t) {
        const std::size_t m = static_cast<std::size_t>(t % 3) + 1;
        const Scenario s = random_scenario(gen, m);
        const VerifyReport rep = verify(s, VerifyOptions{.grid = GridSpec{m == 3 ? 1e-2 : 1e-3}});
        worst_rate = std::max(worst_rate, rep.max_discrepancy);
        worst_gap = std::max(worst_gap, std::abs(rep.objective_gap));
        c.check(rep.max_discrepancy <= 0.05 && std::abs(rep.objective_gap) <= 1e-3,
                fmt::format("scenario {:2} (M={}, R={:.2f}): max |dr| = {:.2e}, |gap| = {:.2e}, {} in {} iterations", t,
                            m, s.capacity, rep.max_discrepancy, std::abs(rep.objective_gap),
                            rep.stop_reason == StopReason::converged ? "converged" : "capped", rep.iterations_used));
    }
    const double elapsed = seconds_since(t0);
    c.check(elapsed <= 300.0, fmt::format("runtime {:.1f} s <= 300 s", elapsed));
    c.note(fmt::format("worst rate discrepancy {:.3e}, worst objective gap {:.3e}", worst_rate, worst_gap));
    return c.report();
}

bool subproblem_certification()
{
    Criterion c("AC3 subproblem certification: 500 random (utility, price) pairs, objective within 1e-6 of dense "
                "grid (step 1e-4), <= 200 bisection steps, rate > 0");
    std::mt19937_64 gen(3);
    int objective_failures = 0;
    int step_failures = 0;
    int rate_failures = 0;
    int max_steps = 0;
    double worst = 0.0;
    int clamped = 0;
    for (int t = 0; t < 500; ++t) {
        const double capacity = std::uniform_real_distribution<double>(10.0, 100.0)(gen);
        const auto f = random_utility(gen, capacity);
        double p = 0.0;
        if (t % 4 == 3) {
            p = std::exp(std::uniform_real_distribution<double>(std::log(1e-4), std::log(1e2))(gen));
        } else {
            p = price_for_rate(f, std::uniform_real_distribution<double>(0.01, 1.2)(gen) * capacity);
        }
        if (!(p > 0.0)) {
            p = 1e-12; // slope underflowed far above a sigmoid's inflection
        }
        const SubproblemSolution sol = solve_rate(f, p, capacity);
        const auto grid = dense_grid_max(f, p, kDefaultRateTolerance, capacity, 1e-4);
        const double shortfall = grid.value - subproblem_objective(f, p, sol.rate);
        worst = std::max(worst, shortfall);
        max_steps = std::max(max_steps, sol.bisection_steps);
        clamped += sol.clamped ? 1 : 0;
        objective_failures += shortfall > 1e-6 ? 1 : 0;
        step_failures += sol.bisection_steps > kMaxBisectionSteps ? 1 : 0;
        rate_failures += sol.rate > 0.0 ? 0 : 1;
    }
    c.check(objective_failures == 0, fmt::format("objective shortfall <= 1e-6 in all cases (worst {:.3e}, {} failures)",
                                                 worst, objective_failures));
    c.check(step_failures == 0, fmt::format("bisection steps <= 200 (max observed {})", max_steps));
    c.check(rate_failures == 0, "returned rate > 0 in all cases");
    c.note(fmt::format("{} of 500 cases hit the capacity clamp", clamped));
    return c.report();
}

bool kkt_stationarity()
{
    Criterion c("AC4 KKT stationarity: paper-fixed with delta=1e-6, |U'/U - p| <= 1e-3 for every interior user");
    Scenario s = preset("paper-fixed");
    s.delta = 1e-6;
    s.max_iterations = 100000;
    const RunResult r = run(s);
    c.check(r.stop_reason == StopReason::converged,
            fmt::format("converged at iteration {}, price {:.9f}", r.iterations_used, r.final_price));
    for (std::size_t i = 0; i < s.users.size(); ++i) {
        const UserId id{static_cast<std::uint32_t>(i + 1)};
        const double rate = r.final_rates.at(id);
        if (rate >= s.capacity) {
            c.note(fmt::format("user {} at capacity, not interior", id.value));
            continue;
        }
        const double residual = std::abs(log_utility_slope(nominal_utility(s.users[i], s.capacity), rate) - r.final_price);
        c.check(residual <= 1e-3, fmt::format("user {} rate {:.6f}: residual {:.3e}", id.value, rate, residual));
    }
    return c.report();
}

bool numerical_stability()
{
    Criterion c("AC5 numerical stability: stable vs textbook sigmoid within 1e-12 relative for a*b <= 30, "
                "a*b = 300 finite in [0,1] on [0,100], log-concavity second difference <= 1e-8");
    std::mt19937_64 gen(5);
    double worst = 0.0;
    for (int t = 0; t < 1000; ++t) {
        const double a = std::uniform_real_distribution<double>(0.05, 15.0)(gen);
        const double b = std::uniform_real_distribution<double>(0.1, 30.0 / a)(gen);
        const auto f = UtilityFunction::sigmoidal(a, b);
        for (int j = 0; j <= 100; ++j) {
            const double r = b * (0.1 + 9.9 * j / 100.0);
            worst = std::max(worst, std::abs(eval_utility(f, r) / naive_sigmoid(a, b, r) - 1.0));
        }
    }
    c.check(worst <= 1e-12, fmt::format("max relative difference {:.3e} over r in [b/10, 10b]", worst));

    const auto steep = UtilityFunction::sigmoidal(15, 20);
    bool bounded = true;
    for (int j = 0; j <= 100000; ++j) {
        const double u = eval_utility(steep, j * 1e-3);
        bounded = bounded && std::isfinite(u) && u >= 0.0 && u <= 1.0;
    }
    c.check(bounded, "sigmoid(a=15, b=20) finite and in [0, 1] at 100001 points of [0, 100]");

    const double h = 1e-2;
    for (const auto &[a, b] : {std::pair{15.0, 20.0}, std::pair{10.0, 25.0}, std::pair{5.0, 35.0}}) {
        const auto f = UtilityFunction::sigmoidal(a, b);
        double max_second = -INFINITY;
        for (int j = 0; j <= 10000; ++j) {
            const double r = b / 10.0 + j * (3.0 * b - b / 10.0) / 10000.0;
            const double second =
                (log_utility(f, r + h) - 2.0 * log_utility(f, r) + log_utility(f, r - h)) / (h * h);
            max_second = std::max(max_second, second);
        }
        c.check(max_second <= 1e-8,
                fmt::format("sigmoid(a={}, b={}): max second difference of log U on [b/10, 3b] = {:.3e}", a, b,
                            max_second));
    }
    return c.report();
}

bool stochastic_regimes()
{
    Criterion c("AC6 stochastic regimes: paper-normal and paper-triangular, 50 seeds, full 20 iterations, "
                "per-iteration invariants, 3-sigma mass >= 0.995, byte-identical traces per seed");
    std::vector<std::uint64_t> seeds(50);
    std::iota(seeds.begin(), seeds.end(), std::uint64_t{1});
    const auto dir = std::filesystem::temp_directory_path() / "ratealloc_acceptance";
    std::filesystem::create_directories(dir);

    for (const char *name : {"paper-normal", "paper-triangular"}) {
        const Scenario s = preset(name);
        const auto runs = run_replication(s, seeds);
        int wrong_length = 0;
        int bad_records = 0;
        int bracket_failures = 0;
        int out_of_support = 0;
        for (const auto &r : runs) {
            wrong_length += (r.iterations_used == 20 && r.stop_reason == StopReason::iteration_cap_reached &&
                             r.trace.size() == 20 * s.users.size())
                                ? 0
                                : 1;
            for (const auto &rec : r.trace) {
                bad_records += (rec.rate > 0.0 && rec.price > 0.0 && rec.bid > 0.0) ? 0 : 1;
                // The solver's lower bracket must sit left of the optimum.
                bracket_failures += log_utility_slope(record_utility(s, rec), kDefaultRateTolerance) > rec.price ? 0 : 1;
                if (rec.a) {
                    const auto &sig = std::get<SigmoidalUserSpec>(s.users[rec.user.value - 1]);
                    if (const auto *ta = std::get_if<TriangularSpec>(&sig.a)) {
                        const auto &tb = std::get<TriangularSpec>(sig.b);
                        out_of_support += (*rec.a >= ta->min && *rec.a <= ta->max && *rec.b >= tb.min &&
                                           *rec.b <= tb.max)
                                              ? 0
                                              : 1;
                    }
                }
            }
        }
        c.check(wrong_length == 0, fmt::format("{}: all 50 runs execute exactly 20 iterations", name));
        c.check(bad_records == 0, fmt::format("{}: every rate, price and bid positive ({} violations)", name, bad_records));
        c.check(bracket_failures == 0,
                fmt::format("{}: slope at the lower bracket exceeds the price in every round ({} violations)", name,
                            bracket_failures));
        if (std::string(name) == "paper-triangular") {
            c.check(out_of_support == 0,
                    fmt::format("{}: every sampled a, b inside [min, max] ({} violations)", name, out_of_support));
        }

        bool identical = true;
        for (const std::uint64_t seed : {1ULL, 17ULL, 50ULL}) {
            Scenario seeded = s;
            seeded.seed = seed;
            const auto first = dir / fmt::format("{}_{}_a.csv", name, seed);
            const auto second = dir / fmt::format("{}_{}_b.csv", name, seed);
            emit_trace(run(seeded), first);
            emit_trace(run(seeded), second);
            identical = identical && slurp(first) == slurp(second) &&
                        slurp(summary_path(first)) == slurp(summary_path(second)) && !slurp(first).empty();
        }
        c.check(identical, fmt::format("{}: identical seed gives byte-identical trace and summary files", name));
    }
    std::filesystem::remove_all(dir);

    Rng rng(0xACCE97ULL);
    int inside = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const double x = sample(NormalSpec{15, 2}, rng);
        inside += (x >= 9.0 && x <= 21.0) ? 1 : 0;
    }
    const double mass = static_cast<double>(inside) / n;
    c.check(mass >= 0.995, fmt::format("NORM(15,2) mass inside [9, 21] over 1e5 draws = {:.5f}", mass));
    return c.report();
}

bool distribution_correctness()
{
    Criterion c("AC7 triangular sampling: KS statistic <= 0.01 over 1e5 draws, mean of TRIA(13,15,17) = 15 +- 0.02");
    Rng rng(0x7121AULL);
    const TriangularSpec spec{13, 15, 17};
    std::vector<double> xs(100000);
    for (auto &x : xs) {
        x = sample(spec, rng);
    }
    const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
    std::sort(xs.begin(), xs.end());
    double ks = 0.0;
    const double n = static_cast<double>(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double cdf = triangular_cdf(xs[i], spec.min, spec.ml, spec.max);
        ks = std::max({ks, std::abs(cdf - i / n), std::abs((i + 1) / n - cdf)});
    }
    c.check(ks <= 0.01, fmt::format("KS statistic {:.5f}", ks));
    c.check(std::abs(mean - 15.0) <= 0.02, fmt::format("empirical mean {:.5f}", mean));
    return c.report();
}

std::map<UserId, double> final_rate_stddev(const std::vector<RunResult> &runs)
{
    std::map<UserId, std::vector<double>> by_user;
    for (const auto &r : runs) {
        for (const auto &[user, rate] : r.final_rates) {
            by_user[user].push_back(rate);
        }
    }
    std::map<UserId, double> out;
    for (const auto &[user, v] : by_user) {
        // Welford: identical samples give exactly zero.
        double mean = 0.0;
        double m2 = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            const double d = v[i] - mean;
            mean += d / static_cast<double>(i + 1);
            m2 += d * (v[i] - mean);
        }
        out[user] = std::sqrt(m2 / v.size());
    }
    return out;
}

bool fluctuation()
{
    Criterion c("AC8 fluctuation: final-rate std dev across 50 seeds > 0 for every sigmoid user under paper-normal, "
                "= 0 for every user under paper-fixed");
    std::vector<std::uint64_t> seeds(50);
    std::iota(seeds.begin(), seeds.end(), std::uint64_t{1});
    const auto normal = final_rate_stddev(run_replication(preset("paper-normal"), seeds));
    for (std::uint32_t i = 4; i <= 6; ++i) {
        c.check(normal.at(UserId{i}) > 0.0, fmt::format("paper-normal user {}: std dev {:.4f}", i, normal.at(UserId{i})));
    }
    const auto fixed = final_rate_stddev(run_replication(preset("paper-fixed"), seeds));
    for (const auto &[user, sd] : fixed) {
        c.check(sd == 0.0, fmt::format("paper-fixed user {}: std dev {}", user.value, sd));
    }
    return c.report();
}

} // namespace

int main()
{
    const bool results[] = {
        paper_fixed(),        oracle_equivalence(), subproblem_certification(), kkt_stationarity(),
        numerical_stability(), stochastic_regimes(), distribution_correctness(),  fluctuation(),
    };
    const auto passed = std::count(std::begin(results), std::end(results), true);
    fmt::print("\n{} of {} acceptance criteria passed\n", passed, std::size(results));
    return passed == static_cast<long>(std::size(results)) ? 0 : 1;
}
