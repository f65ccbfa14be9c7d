#include "oit/run_config.hpp"

#include <fmt/format.h>

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "oit/densities.hpp"
#include "oit/error.hpp"

namespace oit {
namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

template <class Int>
Int parse_unsigned(std::string_view key, std::string_view v) {
    v = trim(v);
    if (!v.empty() && v.front() == '-')
        throw InvalidInput(fmt::format("{} must be non-negative, got '{}'", key, v));
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size() || out > std::numeric_limits<Int>::max())
        throw InvalidInput(fmt::format("{}: '{}' is not a valid non-negative integer", key, v));
    return static_cast<Int>(out);
}

double parse_real(std::string_view key, std::string_view v) {
    v = trim(v);
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out))
        throw InvalidInput(fmt::format("{}: '{}' is not a finite number", key, v));
    return out;
}

}  // namespace

void RunConfig::set(std::string_view key, std::string_view value) {
    key = trim(key);
    value = trim(value);
    if (key == "density") density = std::string(value);
    else if (key == "ratio") ratio = value == "none" || value.empty() ? std::nullopt
                                                                      : std::optional(parse_real(key, value));
    else if (key == "grid") grid = parse_unsigned<std::size_t>(key, value);
    else if (key == "steps") steps = parse_unsigned<std::size_t>(key, value);
    else if (key == "seed") seed = parse_unsigned<std::uint64_t>(key, value);
    else if (key == "n") n = parse_unsigned<std::uint64_t>(key, value);
    else if (key == "bins") bins = parse_unsigned<std::size_t>(key, value);
    else if (key == "threads") threads = parse_unsigned<unsigned>(key, value);
    else if (key == "stride") stride = parse_unsigned<std::size_t>(key, value);
    else if (key == "out") out = std::string(value);
    else if (key == "map") map = std::string(value);
    else if (key == "bin_csv") bin_csv = std::string(value);
    else throw InvalidInput(fmt::format("unknown config key '{}'", key));
}

void RunConfig::validate() const {
    (void)parse_density_spec(density);
    if (ratio && !(*ratio > 1.0)) throw InvalidInput("ratio must be > 1");
    if (grid < 4) throw InvalidInput("grid must be at least 4");
    if (grid > 8192) throw InvalidInput("grid must be at most 8192");
    if (steps < 1) throw InvalidInput("steps must be at least 1");
    if (bins < 1) throw InvalidInput("bins must be at least 1");
    if (threads < 1) throw InvalidInput("threads must be at least 1");
    if (stride < 1) throw InvalidInput("stride must be at least 1");
}

std::string RunConfig::to_string() const {
    std::string s;
    auto line = [&s](std::string_view k, const auto& v) { s += fmt::format("{}={}\n", k, v); };
    line("density", density);
    line("ratio", ratio ? fmt::format("{}", *ratio) : std::string("none"));
    line("grid", grid);
    line("steps", steps);
    line("seed", seed);
    line("n", n);
    line("bins", bins);
    line("threads", threads);
    line("stride", stride);
    line("out", out);
    line("map", map);
    line("bin_csv", bin_csv);
    return s;
}

RunConfig RunConfig::parse(std::string_view text) {
    RunConfig cfg;
    std::size_t lineno = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw FormatError(fmt::format("config line {}: expected key=value", lineno));
        cfg.set(line.substr(0, eq), line.substr(eq + 1));
    }
    return cfg;
}

RunConfig RunConfig::load(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw InvalidInput("cannot open config file " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return parse(ss.str());
}

}  // namespace oit
