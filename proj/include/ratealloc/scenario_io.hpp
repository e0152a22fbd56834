#ifndef RATEALLOC_SCENARIO_IO_HPP
#define RATEALLOC_SCENARIO_IO_HPP

#include "ratealloc/sim_engine.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace ratealloc {

/// Parses FIXED(v), NORM(mu,sigma) or TRIA(min,ml,max). Names are
/// case-insensitive and whitespace is ignored. Throws ParseError.
ParamSpec parse_param_spec(std::string_view text);

/// Canonical spelling, e.g. "NORM(15,2)". Numbers use the shortest
/// representation that round-trips.
std::string format_param_spec(const ParamSpec &spec);

/// Parses a JSON scenario document:
///
///   { "R": 100, "delta": 0.01, "max_iterations": 20, "seed": 1,
///     "allow_early_stop": false,
///     "users": [ { "type": "logarithmic", "k": 1, "r_max": 100 },
///                { "type": "sigmoidal", "a": "NORM(15,2)", "b": "NORM(20,2)" } ] }
///
/// "R" and "users" are required; the other fields default to the values
/// above (seed 0). Unknown fields are rejected. Every error is a ParseError
/// naming the line and column (syntax) or the field path (schema and
/// validation). `source` prefixes the messages.
Scenario parse_scenario(std::string_view text, std::string_view source = "<scenario>");

Scenario load_scenario(const std::filesystem::path &path);

/// Canonical JSON document; parse_scenario(to_scenario_json(s)) == s.
std::string to_scenario_json(const Scenario &s);

std::vector<std::string> preset_names();

/// Built-in scenarios "paper-fixed", "paper-normal" and "paper-triangular":
/// R = 100, 20 iterations, delta = 1e-2, three logarithmic users
/// (k = 1, 0.1, 0.02; r_max = R) followed by three sigmoidal users.
/// Throws ParseError for an unknown name.
Scenario preset(std::string_view name);

/// Trace table with header "iteration,user_id,price,rate,bid,a,b", one row
/// per record, numbers rendered with 9 significant digits; a and b are
/// empty for logarithmic users.
std::string render_trace(const RunResult &result);

/// JSON summary: stop reason, iterations used, final price and final rates.
std::string render_summary(const RunResult &result);

/// Path of the summary written next to a trace file: "<trace>.summary.json".
std::filesystem::path summary_path(const std::filesystem::path &trace_path);

/// Writes render_trace to `path` and render_summary to summary_path(path).
/// Throws Error with the path on I/O failure.
void emit_trace(const RunResult &result, const std::filesystem::path &path);

} // namespace ratealloc

#endif
