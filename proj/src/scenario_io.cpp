#include "ratealloc/scenario_io.hpp"

#include "ratealloc/errors.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace ratealloc {

namespace {

using nlohmann::json;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

std::string upper(std::string_view s)
{
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::toupper(c); });
    return out;
}

std::vector<double> parse_arguments(std::string_view body, std::string_view text)
{
    std::vector<double> values;
    std::size_t pos = 0;
    while (pos <= body.size()) {
        const std::size_t comma = std::min(body.find(',', pos), body.size());
        const std::string_view arg = body.substr(pos, comma - pos);
        double v = 0.0;
        const auto [end, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), v);
        if (arg.empty() || ec != std::errc{} || end != arg.data() + arg.size()) {
            throw ParseError(fmt::format("invalid number '{}' in distribution spec '{}'", arg, text));
        }
        values.push_back(v);
        pos = comma + 1;
    }
    return values;
}

std::string where(std::string_view source, std::string_view field)
{
    return fmt::format("{}: {}", source, field);
}

class DocumentReader {
public:
    explicit DocumentReader(std::string_view source) : source_(source) {}

    [[noreturn]] void fail(const std::string &field, const std::string &what) const
    {
        throw ParseError(fmt::format("{}: {}", where(source_, field), what));
    }

    void reject_unknown(const json &obj, const std::string &path, std::initializer_list<const char *> allowed) const
    {
        const std::set<std::string> names(allowed.begin(), allowed.end());
        for (const auto &item : obj.items()) {
            if (!names.contains(item.key())) {
                fail(path.empty() ? item.key() : path + "." + item.key(), "unknown field");
            }
        }
    }

    const json &require(const json &obj, const std::string &path, const char *key) const
    {
        const auto it = obj.find(key);
        if (it == obj.end()) {
            fail(join(path, key), "missing required field");
        }
        return *it;
    }

    double number(const json &v, const std::string &field) const
    {
        if (!v.is_number()) {
            fail(field, "expected a number");
        }
        return v.get<double>();
    }

    std::uint64_t unsigned_integer(const json &v, const std::string &field, std::uint64_t max) const
    {
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
            fail(field, "expected a non-negative integer");
        }
        const auto value = v.get<std::uint64_t>();
        if (value > max) {
            fail(field, fmt::format("value {} out of range", value));
        }
        return value;
    }

    ParamSpec param(const json &v, const std::string &field) const
    {
        if (!v.is_string()) {
            fail(field, "expected a distribution string FIXED(v), NORM(mu,sigma) or TRIA(min,ml,max)");
        }
        try {
            ParamSpec spec = parse_param_spec(v.get<std::string>());
            validate(spec);
            return spec;
        } catch (const Error &e) {
            fail(field, e.what());
        }
    }

    static std::string join(const std::string &path, const char *key)
    {
        return path.empty() ? std::string(key) : path + "." + key;
    }

private:
    std::string_view source_;
};

std::string line_column(std::string_view text, std::size_t byte)
{
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return fmt::format("line {}, column {}", line, column);
}

std::string render_number(double v) { return fmt::format("{:.9g}", v); }

void write_file(const std::filesystem::path &path, const std::string &content)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(fmt::format("cannot open '{}' for writing", path.string()));
    }
    out << content;
    out.close();
    if (!out) {
        throw Error(fmt::format("failed writing '{}'", path.string()));
    }
}

} // namespace

ParamSpec parse_param_spec(std::string_view text)
{
    std::string compact;
    for (const char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c))) {
            compact.push_back(c);
        }
    }
    const auto open = compact.find('(');
    if (open == std::string::npos || compact.empty() || compact.back() != ')') {
        throw ParseError(fmt::format("malformed distribution spec '{}'", text));
    }
    const std::string name = upper(std::string_view(compact).substr(0, open));
    const std::vector<double> args =
        parse_arguments(std::string_view(compact).substr(open + 1, compact.size() - open - 2), text);

    const auto expect = [&](std::size_t n) {
        if (args.size() != n) {
            throw ParseError(fmt::format("{} takes {} argument(s), got {} in '{}'", name, n, args.size(), text));
        }
    };
    if (name == "FIXED") {
        expect(1);
        return FixedSpec{args[0]};
    }
    if (name == "NORM") {
        expect(2);
        return NormalSpec{args[0], args[1]};
    }
    if (name == "TRIA") {
        expect(3);
        return TriangularSpec{args[0], args[1], args[2]};
    }
    throw ParseError(fmt::format("unknown distribution '{}' in '{}'", name, text));
}

std::string format_param_spec(const ParamSpec &spec)
{
    return std::visit(overloaded{
                          [](const FixedSpec &s) { return fmt::format("FIXED({})", s.value); },
                          [](const NormalSpec &s) { return fmt::format("NORM({},{})", s.mu, s.sigma); },
                          [](const TriangularSpec &s) { return fmt::format("TRIA({},{},{})", s.min, s.ml, s.max); },
                      },
                      spec);
}

Scenario parse_scenario(std::string_view text, std::string_view source)
{
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error &e) {
        throw ParseError(fmt::format("{}: syntax error at {}: {}", source, line_column(text, e.byte), e.what()));
    }

    const DocumentReader rd(source);
    if (!doc.is_object()) {
        rd.fail("<root>", "expected a JSON object");
    }
    rd.reject_unknown(doc, "", {"R", "delta", "max_iterations", "seed", "allow_early_stop", "users"});

    Scenario s;
    s.capacity = rd.number(rd.require(doc, "", "R"), "R");
    if (doc.contains("delta")) {
        s.delta = rd.number(doc["delta"], "delta");
    }
    if (doc.contains("max_iterations")) {
        s.max_iterations = static_cast<std::uint32_t>(rd.unsigned_integer(
            doc["max_iterations"], "max_iterations", std::numeric_limits<std::uint32_t>::max()));
    }
    if (doc.contains("seed")) {
        s.seed = rd.unsigned_integer(doc["seed"], "seed", std::numeric_limits<std::uint64_t>::max());
    }
    if (doc.contains("allow_early_stop")) {
        if (!doc["allow_early_stop"].is_boolean()) {
            rd.fail("allow_early_stop", "expected true or false");
        }
        s.allow_early_stop = doc["allow_early_stop"].get<bool>();
    }

    const json &users = rd.require(doc, "", "users");
    if (!users.is_array()) {
        rd.fail("users", "expected an array");
    }
    for (std::size_t i = 0; i < users.size(); ++i) {
        const std::string path = fmt::format("users[{}]", i);
        const json &u = users[i];
        if (!u.is_object()) {
            rd.fail(path, "expected an object");
        }
        const json &type = rd.require(u, path, "type");
        if (!type.is_string()) {
            rd.fail(path + ".type", "expected \"sigmoidal\" or \"logarithmic\"");
        }
        const auto kind = type.get<std::string>();
        if (kind == "sigmoidal") {
            rd.reject_unknown(u, path, {"type", "a", "b"});
            s.users.emplace_back(SigmoidalUserSpec{rd.param(rd.require(u, path, "a"), path + ".a"),
                                                   rd.param(rd.require(u, path, "b"), path + ".b")});
        } else if (kind == "logarithmic") {
            rd.reject_unknown(u, path, {"type", "k", "r_max"});
            s.users.emplace_back(LogUserSpec{rd.number(rd.require(u, path, "k"), path + ".k"),
                                             rd.number(rd.require(u, path, "r_max"), path + ".r_max")});
        } else {
            rd.fail(path + ".type", fmt::format("unknown user type '{}'", kind));
        }
    }

    try {
        validate(s);
    } catch (const InvalidParameter &e) {
        throw ParseError(fmt::format("{}: {}", source, e.what()));
    }
    return s;
}

Scenario load_scenario(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError(fmt::format("cannot open scenario file '{}'", path.string()));
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str(), path.string());
}

std::string to_scenario_json(const Scenario &s)
{
    json users = json::array();
    for (const auto &u : s.users) {
        std::visit(overloaded{
                       [&](const SigmoidalUserSpec &sig) {
                           users.push_back(json{{"type", "sigmoidal"},
                                                {"a", format_param_spec(sig.a)},
                                                {"b", format_param_spec(sig.b)}});
                       },
                       [&](const LogUserSpec &lg) {
                           users.push_back(json{{"type", "logarithmic"}, {"k", lg.k}, {"r_max", lg.r_max}});
                       },
                   },
                   u);
    }
    const json doc{{"R", s.capacity},
                   {"delta", s.delta},
                   {"max_iterations", s.max_iterations},
                   {"seed", s.seed},
                   {"allow_early_stop", s.allow_early_stop},
                   {"users", users}};
    return doc.dump(2) + "\n";
}

std::vector<std::string> preset_names() { return {"paper-fixed", "paper-normal", "paper-triangular"}; }

Scenario preset(std::string_view name)
{
    Scenario s;
    s.capacity = 100.0;
    s.delta = 1e-2;
    s.max_iterations = 20;
    s.seed = 1;
    for (const double k : {1.0, 0.1, 0.02}) {
        s.users.emplace_back(LogUserSpec{k, s.capacity});
    }

    const auto add = [&s](ParamSpec a, ParamSpec b) { s.users.emplace_back(SigmoidalUserSpec{a, b}); };
    if (name == "paper-fixed") {
        add(FixedSpec{15}, FixedSpec{20});
        add(FixedSpec{10}, FixedSpec{25});
        add(FixedSpec{5}, FixedSpec{35});
    } else if (name == "paper-normal") {
        add(NormalSpec{15, 2}, NormalSpec{20, 2});
        add(NormalSpec{10, 2}, NormalSpec{25, 2});
        add(NormalSpec{5, 2}, NormalSpec{35, 2});
    } else if (name == "paper-triangular") {
        add(TriangularSpec{13, 15, 17}, TriangularSpec{18, 20, 22});
        add(TriangularSpec{8, 10, 12}, TriangularSpec{23, 25, 27});
        add(TriangularSpec{3, 5, 7}, TriangularSpec{33, 35, 37});
    } else {
        throw ParseError(fmt::format("unknown preset '{}'", name));
    }
    return s;
}

std::string render_trace(const RunResult &result)
{
    std::string out = "iteration,user_id,price,rate,bid,a,b\n";
    for (const auto &rec : result.trace) {
        out += fmt::format("{},{},{},{},{},{},{}\n", rec.iteration, rec.user.value, render_number(rec.price),
                           render_number(rec.rate), render_number(rec.bid), rec.a ? render_number(*rec.a) : "",
                           rec.b ? render_number(*rec.b) : "");
    }
    return out;
}

std::string render_summary(const RunResult &result)
{
    json rates = json::array();
    for (const auto &[user, rate] : result.final_rates) {
        rates.push_back(json{{"user_id", user.value}, {"rate", rate}});
    }
    const json doc{
        {"stop_reason", result.stop_reason == StopReason::converged ? "converged" : "iteration_cap_reached"},
        {"iterations_used", result.iterations_used},
        {"final_price", result.final_price},
        {"final_rates", rates},
    };
    return doc.dump(2) + "\n";
}

std::filesystem::path summary_path(const std::filesystem::path &trace_path)
{
    std::filesystem::path p = trace_path;
    p += ".summary.json";
    return p;
}

void emit_trace(const RunResult &result, const std::filesystem::path &path)
{
    write_file(path, render_trace(result));
    write_file(summary_path(path), render_summary(result));
}

} // namespace ratealloc
