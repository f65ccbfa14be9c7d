#pragma once

// Philox4x32-10 counter-based generator (Salmon et al., SC'11). Output is a
// pure function of (key, counter), so any sample index can be generated
// independently of the others.

#include <array>
#include <cstdint>

namespace oit {

class Philox4x32 {
  public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static constexpr Counter generate(Counter ctr, Key key) noexcept {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += kWeyl0;
                key[1] += kWeyl1;
            }
            const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
            const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
            ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
                   static_cast<std::uint32_t>(p1),
                   static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
                   static_cast<std::uint32_t>(p0)};
        }
        return ctr;
    }

  private:
    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
};

// Two uniform doubles in [0, 1) with 53 random bits each, for draw `index`
// of `stream` under `seed`.
struct UniformPair {
    double a;
    double b;
};

[[nodiscard]] constexpr UniformPair uniform_pair(std::uint64_t seed, std::uint64_t index,
                                                 std::uint32_t stream) noexcept {
    const auto out = Philox4x32::generate(
        {static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), stream, 0u},
        {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)});
    const std::uint64_t w0 = (std::uint64_t{out[1]} << 32) | out[0];
    const std::uint64_t w1 = (std::uint64_t{out[3]} << 32) | out[2];
    constexpr double kScale = 0x1.0p-53;
    return {static_cast<double>(w0 >> 11) * kScale, static_cast<double>(w1 >> 11) * kScale};
}

}  // namespace oit
