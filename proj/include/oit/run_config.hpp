#pragma once

// Effective configuration of a command-line run. Serialized as plain
// key=value lines; '#' starts a comment.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace oit {

struct RunConfig {
    std::string density = "two-bump";
    std::optional<double> ratio;  // dynamic-range override
    std::size_t grid = 256;
    std::size_t steps = 100;
    std::uint64_t seed = 0;
    std::uint64_t n = 100000;
    std::size_t bins = 32;
    unsigned threads = 1;
    std::size_t stride = 4;       // mesh export: every stride-th grid line
    std::string out;
    std::string map;
    std::string bin_csv;          // validate: optional per-bin CSV path

    // Apply one key=value assignment; throws InvalidInput on bad keys/values.
    void set(std::string_view key, std::string_view value);

    // Check every field against module preconditions.
    void validate() const;

    [[nodiscard]] std::string to_string() const;
    [[nodiscard]] static RunConfig parse(std::string_view text);
    [[nodiscard]] static RunConfig load(const std::string& path);

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

}  // namespace oit
