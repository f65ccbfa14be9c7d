#pragma once

// Seeded uniform sampling on the torus and evaluation of a transport map on
// sample batches.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "oit/grid.hpp"

namespace oit {

// Philox stream ids. Distinct streams under one seed are independent.
enum class SampleStream : std::uint32_t {
    Uniform = 0,
    OracleProposal = 1,
    OracleAccept = 2,
};

struct SampleBatch {
    std::vector<Point2> points;  // every coordinate in [-pi, pi)
    std::uint64_t seed = 0;

    [[nodiscard]] std::size_t size() const noexcept { return points.size(); }
};

// Point `index` of the uniform stream for `seed`.
[[nodiscard]] Point2 uniform_point(std::uint64_t seed, std::uint64_t index,
                                   SampleStream stream = SampleStream::Uniform) noexcept;

// N i.i.d. uniform points. Output is independent of `threads`.
[[nodiscard]] SampleBatch draw_uniform(std::size_t n, std::uint64_t seed, unsigned threads = 1);

// y = wrap(x + d(x)) with d bilinearly interpolated from the forward
// displacement. Order is preserved.
[[nodiscard]] SampleBatch transform_samples(const DiffeoMap& map, const SampleBatch& batch,
                                            unsigned threads = 1);

[[nodiscard]] SampleBatch sample_target(const DiffeoMap& map, std::size_t n, std::uint64_t seed,
                                        unsigned threads = 1);

// CSV with header "x,y" and shortest round-trip decimal doubles.
void write_samples_csv(std::ostream& os, const SampleBatch& batch);
[[nodiscard]] SampleBatch read_samples_csv(std::istream& is);

// OITF with n_x = N, n_y = 1, two components (all x, then all y).
void write_samples_oitf(std::ostream& os, const SampleBatch& batch);
[[nodiscard]] SampleBatch read_samples_oitf(std::istream& is);

}  // namespace oit
