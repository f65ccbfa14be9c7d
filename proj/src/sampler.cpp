#include "oit/sampler.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <string>
#include <thread>

#include "interp.hpp"
#include "oit/error.hpp"
#include "oit/field_io.hpp"
#include "oit/philox.hpp"

namespace oit {
namespace {

// Run body(begin, end) over [0, n) split into contiguous chunks.
template <class Body>
void parallel_chunks(std::size_t n, unsigned threads, Body&& body) {
    const std::size_t workers = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(n, 1));
    if (workers == 1) {
        body(std::size_t{0}, n);
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = std::min(n, w * chunk);
        const std::size_t end = std::min(n, begin + chunk);
        pool.emplace_back([&body, begin, end] { body(begin, end); });
    }
}

}  // namespace

Point2 uniform_point(std::uint64_t seed, std::uint64_t index, SampleStream stream) noexcept {
    const auto [a, b] = uniform_pair(seed, index, static_cast<std::uint32_t>(stream));
    return {wrap_coordinate(-kPi + kTwoPi * a), wrap_coordinate(-kPi + kTwoPi * b)};
}

SampleBatch draw_uniform(std::size_t n, std::uint64_t seed, unsigned threads) {
    SampleBatch batch{std::vector<Point2>(n), seed};
    parallel_chunks(n, threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) batch.points[k] = uniform_point(seed, k);
    });
    return batch;
}

SampleBatch transform_samples(const DiffeoMap& map, const SampleBatch& batch, unsigned threads) {
    const auto& g = map.grid();
    const double* dx = map.disp().u_x.values().data();
    const double* dy = map.disp().u_y.values().data();
    SampleBatch out{std::vector<Point2>(batch.size()), batch.seed};
    parallel_chunks(batch.size(), threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) {
            const Point2 p = wrap_point(batch.points[k]);
            const detail::BilinearStencil s(detail::index_coordinate(p.x, g.h_x()),
                                            detail::index_coordinate(p.y, g.h_y()), g.n_x(),
                                            g.n_y());
            out.points[k] = wrap_point({p.x + s(dx), p.y + s(dy)});
        }
    });
    return out;
}

SampleBatch sample_target(const DiffeoMap& map, std::size_t n, std::uint64_t seed,
                          unsigned threads) {
    return transform_samples(map, draw_uniform(n, seed, threads), threads);
}

// --- CSV -------------------------------------------------------------------

void write_samples_csv(std::ostream& os, const SampleBatch& batch) {
    fmt::memory_buffer buf;
    fmt::format_to(std::back_inserter(buf), "x,y\n");
    for (const auto& p : batch.points) {
        fmt::format_to(std::back_inserter(buf), "{},{}\n", p.x, p.y);
        if (buf.size() > (1u << 20)) {
            os.write(buf.data(), static_cast<std::streamsize>(buf.size()));
            buf.clear();
        }
    }
    os.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

namespace {

double parse_csv_double(std::string_view s, std::size_t line) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw FormatError("sample CSV line " + std::to_string(line) + ": bad number");
    return v;
}

}  // namespace

SampleBatch read_samples_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || (line != "x,y" && line != "x,y\r"))
        throw FormatError("sample CSV must start with header 'x,y'");
    SampleBatch batch;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw FormatError("sample CSV line " + std::to_string(lineno) + ": expected x,y");
        const std::string_view sv(line);
        batch.points.push_back(
            {parse_csv_double(sv.substr(0, comma), lineno), parse_csv_double(sv.substr(comma + 1), lineno)});
    }
    return batch;
}

void write_samples_oitf(std::ostream& os, const SampleBatch& batch) {
    FieldBlock b{static_cast<std::uint32_t>(batch.size()), 1, 2, {}};
    b.data.reserve(2 * batch.size());
    for (const auto& p : batch.points) b.data.push_back(p.x);
    for (const auto& p : batch.points) b.data.push_back(p.y);
    write_field_block(os, b);
}

SampleBatch read_samples_oitf(std::istream& is) {
    const FieldBlock b = read_field_block(is);
    if (b.components != 2 || b.n_y != 1) throw FormatError("sample OITF must be N x 1 with 2 components");
    SampleBatch batch;
    batch.points.resize(b.n_x);
    for (std::size_t k = 0; k < b.n_x; ++k) batch.points[k] = {b.data[k], b.data[b.n_x + k]};
    return batch;
}

}  // namespace oit
