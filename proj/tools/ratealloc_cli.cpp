// ratealloc: run, replicate and certify the bid / shadow-price rate auction.

#include "ratealloc/errors.hpp"
#include "ratealloc/scenario_io.hpp"
#include "ratealloc/sim_engine.hpp"
#include "ratealloc/verify.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <map>
#include <filesystem>
#include <iostream>
#include <limits>
#include <numeric>
#include <optional>

namespace {

using namespace ratealloc;

enum ExitCode : int {
    kOk = 0,
    kIoError = 1,
    kParseError = 2,
    kSolverError = 3,
    kBudgetExceeded = 4,
};

struct ScenarioSource {
    std::string scenario_path;
    std::string preset_name;

    void attach(CLI::App &cmd)
    {
        auto *file = cmd.add_option("--scenario", scenario_path, "Scenario JSON file");
        auto *named = cmd.add_option("--preset", preset_name, "Built-in scenario")
                          ->check(CLI::IsMember(preset_names()));
        file->excludes(named);
        named->excludes(file);
    }

    Scenario load() const
    {
        if (!scenario_path.empty()) {
            return load_scenario(scenario_path);
        }
        if (!preset_name.empty()) {
            return preset(preset_name);
        }
        throw ParseError("one of --scenario or --preset is required");
    }
};

std::string describe(const RunResult &r)
{
    const double total = std::accumulate(r.final_rates.begin(), r.final_rates.end(), 0.0,
                                         [](double acc, const auto &kv) { return acc + kv.second; });
    std::string out = fmt::format("{} after {} iterations, price {:.9g}\n",
                                  r.stop_reason == StopReason::converged ? "converged" : "iteration cap reached",
                                  r.iterations_used, r.final_price);
    for (const auto &[user, rate] : r.final_rates) {
        out += fmt::format("  user {}: rate {:.9g}\n", user.value, rate);
    }
    out += fmt::format("  total: {:.9g}\n", total);
    return out;
}

void write_envelope(const std::vector<RunResult> &runs, const std::filesystem::path &path)
{
    struct Stats {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        double sum = 0.0;
        std::size_t n = 0;
    };
    std::map<std::pair<std::uint32_t, std::uint32_t>, Stats> rates;
    for (const auto &run : runs) {
        for (const auto &rec : run.trace) {
            Stats &s = rates[{rec.iteration, rec.user.value}];
            s.lo = std::min(s.lo, rec.rate);
            s.hi = std::max(s.hi, rec.rate);
            s.sum += rec.rate;
            ++s.n;
        }
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(fmt::format("cannot open '{}' for writing", path.string()));
    }
    out << "iteration,user_id,rate_min,rate_mean,rate_max\n";
    for (const auto &[key, s] : rates) {
        out << fmt::format("{},{},{:.9g},{:.9g},{:.9g}\n", key.first, key.second, s.lo,
                           s.sum / static_cast<double>(s.n), s.hi);
    }
    if (!out) {
        throw Error(fmt::format("failed writing '{}'", path.string()));
    }
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Rate allocation by bid / shadow-price auction"};
    app.require_subcommand(1);

    ScenarioSource run_src;
    std::optional<std::uint64_t> run_seed;
    std::string run_output;
    std::optional<double> run_delta;
    std::optional<std::uint32_t> run_iterations;
    bool run_early = false;
    auto *run_cmd = app.add_subcommand("run", "Run one auction and write its trace");
    run_src.attach(*run_cmd);
    run_cmd->add_option("--seed", run_seed, "Override the scenario seed");
    run_cmd->add_option("--output", run_output, "Trace CSV path (summary goes to <path>.summary.json)")->required();
    run_cmd->add_option("--delta", run_delta, "Override the convergence threshold");
    run_cmd->add_option("--iterations", run_iterations, "Override the iteration cap");
    run_cmd->add_flag("--allow-early-stop", run_early, "Stop random scenarios once bids settle");

    std::string verify_path;
    double verify_step = 1e-2;
    VerifyOptions verify_opts;
    auto *verify_cmd = app.add_subcommand("verify", "Compare the auction with the brute-force optimum (M <= 3)");
    verify_cmd->add_option("--scenario", verify_path, "Scenario JSON file")->required();
    verify_cmd->add_option("--step", verify_step, "Oracle grid step")->required();
    verify_cmd->add_option("--budget", verify_opts.grid.budget, "Maximum oracle grid size")->capture_default_str();
    verify_cmd->add_option("--delta", verify_opts.delta, "Auction convergence threshold")->capture_default_str();
    verify_cmd->add_option("--iterations", verify_opts.max_iterations, "Auction iteration cap")->capture_default_str();

    ScenarioSource rep_src;
    std::uint32_t rep_seeds = 50;
    std::string rep_dir;
    auto *rep_cmd = app.add_subcommand("replicate", "Run seeds 1..n and write traces plus rate envelopes");
    rep_src.attach(*rep_cmd);
    rep_cmd->add_option("--seeds", rep_seeds, "Number of seeds")->capture_default_str()->check(CLI::PositiveNumber);
    rep_cmd->add_option("--output-dir", rep_dir, "Output directory")->required();

    std::string show_name;
    auto *show_cmd = app.add_subcommand("show-preset", "Print a built-in scenario as a scenario file");
    show_cmd->add_option("name", show_name, "Preset name")->required()->check(CLI::IsMember(preset_names()));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kParseError;
    }

    try {
        if (*run_cmd) {
            Scenario s = run_src.load();
            if (run_seed) {
                s.seed = *run_seed;
            }
            if (run_delta) {
                s.delta = *run_delta;
            }
            if (run_iterations) {
                s.max_iterations = *run_iterations;
            }
            s.allow_early_stop = s.allow_early_stop || run_early;
            try {
                validate(s);
            } catch (const InvalidParameter &e) {
                throw ParseError(e.what());
            }
            const RunResult result = run(s);
            emit_trace(result, run_output);
            std::cout << describe(result);
        } else if (*verify_cmd) {
            const Scenario s = load_scenario(verify_path);
            verify_opts.grid.step = verify_step;
            std::cout << render_report(verify(s, verify_opts));
        } else if (*rep_cmd) {
            const Scenario s = rep_src.load();
            std::vector<std::uint64_t> seeds(rep_seeds);
            std::iota(seeds.begin(), seeds.end(), std::uint64_t{1});
            const auto runs = run_replication(s, seeds);
            const std::filesystem::path dir(rep_dir);
            std::filesystem::create_directories(dir);
            std::ofstream finals(dir / "final_rates.csv", std::ios::binary | std::ios::trunc);
            finals << "seed,user_id,rate\n";
            for (std::size_t i = 0; i < runs.size(); ++i) {
                emit_trace(runs[i], dir / fmt::format("trace_seed{}.csv", seeds[i]));
                for (const auto &[user, rate] : runs[i].final_rates) {
                    finals << fmt::format("{},{},{:.9g}\n", seeds[i], user.value, rate);
                }
            }
            if (!finals) {
                throw Error("failed writing final_rates.csv");
            }
            write_envelope(runs, dir / "envelope.csv");
            std::cout << fmt::format("wrote {} runs to {}\n", runs.size(), dir.string());
        } else if (*show_cmd) {
            std::cout << to_scenario_json(preset(show_name));
        }
    } catch (const ParseError &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kParseError;
    } catch (const InvalidParameter &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kParseError;
    } catch (const BudgetExceeded &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kBudgetExceeded;
    } catch (const SolverError &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kSolverError;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kIoError;
    }
    return kOk;
}
