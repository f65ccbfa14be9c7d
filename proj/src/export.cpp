#include "oit/export.hpp"

#include <fmt/format.h>

#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "oit/error.hpp"

namespace oit {

void write_heatmap_pgm(std::ostream& os, const ScalarField& field) {
    const auto& g = field.grid();
    const double lo = field.min();
    const double hi = field.max();
    const std::string header = fmt::format("P5\n{} {}\n255\n", g.n_x(), g.n_y());
    os.write(header.data(), static_cast<std::streamsize>(header.size()));
    std::vector<char> row(g.n_x());
    for (std::size_t r = 0; r < g.n_y(); ++r) {
        const std::size_t j = g.n_y() - 1 - r;
        for (std::size_t i = 0; i < g.n_x(); ++i) {
            const double v = field(i, j);
            const double level = hi > lo ? std::round(255.0 * (v - lo) / (hi - lo)) : 128.0;
            row[i] = static_cast<char>(static_cast<std::uint8_t>(level));
        }
        os.write(row.data(), static_cast<std::streamsize>(row.size()));
    }
}

Heatmap read_pgm(std::istream& is) {
    std::string magic;
    Heatmap h;
    int maxval = 0;
    if (!(is >> magic >> h.width >> h.height >> maxval) || magic != "P5" || maxval != 255)
        throw FormatError("not an 8-bit binary PGM");
    is.get();  // single whitespace before the raster
    h.pixels.resize(h.width * h.height);
    is.read(reinterpret_cast<char*>(h.pixels.data()), static_cast<std::streamsize>(h.pixels.size()));
    if (static_cast<std::size_t>(is.gcount()) != h.pixels.size()) throw FormatError("truncated PGM raster");
    return h;
}

void write_mesh_csv(std::ostream& os, const DiffeoMap& map, std::size_t stride, bool use_inverse) {
    if (stride < 1) throw InvalidInput("mesh stride must be at least 1");
    if (use_inverse && !map.has_inverse()) throw InvalidInput("map carries no inverse");
    const auto& g = map.grid();
    const VectorField& d = use_inverse ? *map.inv_disp() : map.disp();

    fmt::memory_buffer buf;
    fmt::format_to(std::back_inserter(buf), "line,family,x,y\n");
    std::size_t line = 0;
    // Node (i, j) with unwrapped source coordinates; indices are taken mod n
    // for the displacement lookup.
    auto emit = [&](std::size_t i, std::size_t j, double x, double y, const char* family) {
        const std::size_t k = g.index(i % g.n_x(), j % g.n_y());
        fmt::format_to(std::back_inserter(buf), "{},{},{},{}\n", line, family,
                       x + d.u_x.values()[k], y + d.u_y.values()[k]);
    };
    for (std::size_t i = 0; i < g.n_x(); i += stride, ++line)
        for (std::size_t j = 0; j <= g.n_y(); ++j)
            emit(i, j, g.x(i), -kPi + static_cast<double>(j) * g.h_y(), "x");
    for (std::size_t j = 0; j < g.n_y(); j += stride, ++line)
        for (std::size_t i = 0; i <= g.n_x(); ++i)
            emit(i, j, -kPi + static_cast<double>(i) * g.h_x(), g.y(j), "y");
    os.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

}  // namespace oit
