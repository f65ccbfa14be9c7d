#pragma once

// Figure artifacts: density heatmaps (binary PGM) and warp-mesh polylines.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "oit/grid.hpp"

namespace oit {

// 8-bit grayscale P5 image, width n_x (x to the right), height n_y with the
// top row at the largest y. Values map linearly from [min, max] to [0, 255];
// a constant field maps to 128 everywhere.
void write_heatmap_pgm(std::ostream& os, const ScalarField& field);

struct Heatmap {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint8_t> pixels;
};

[[nodiscard]] Heatmap read_pgm(std::istream& is);

// Images of every `stride`-th grid line under the map, as CSV rows
// "line,family,x,y". Family "x" lines hold x fixed in the source mesh, "y"
// lines hold y fixed. Each line closes with its periodic copy of the first
// node, and coordinates are left unwrapped so lines stay continuous.
void write_mesh_csv(std::ostream& os, const DiffeoMap& map, std::size_t stride,
                    bool use_inverse = false);

}  // namespace oit
