#include "oit/field_io.hpp"

#include <array>
#include <bit>
#include <fstream>
#include <istream>
#include <ostream>

#include "oit/error.hpp"

namespace oit {
namespace {

template <class UInt>
std::array<char, sizeof(UInt)> to_le(UInt v) {
    std::array<char, sizeof(UInt)> out{};
    for (std::size_t k = 0; k < sizeof(UInt); ++k)
        out[k] = static_cast<char>((v >> (8 * k)) & 0xFFu);
    return out;
}

template <class UInt>
UInt from_le(const std::array<char, sizeof(UInt)>& b) {
    UInt v = 0;
    for (std::size_t k = 0; k < sizeof(UInt); ++k)
        v |= static_cast<UInt>(static_cast<unsigned char>(b[k])) << (8 * k);
    return v;
}

}  // namespace

void ByteWriter::bytes(std::string_view s) { os_.write(s.data(), static_cast<std::streamsize>(s.size())); }

void ByteWriter::u8(std::uint8_t v) { os_.put(static_cast<char>(v)); }

void ByteWriter::u32(std::uint32_t v) {
    const auto b = to_le(v);
    os_.write(b.data(), b.size());
}

void ByteWriter::f64(double v) {
    const auto b = to_le(std::bit_cast<std::uint64_t>(v));
    os_.write(b.data(), b.size());
}

void ByteWriter::f64s(std::span<const double> v) {
    for (double x : v) f64(x);
}

void ByteReader::read(char* dst, std::size_t n) {
    is_.read(dst, static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(is_.gcount()) != n)
        throw FormatError(what_ + ": unexpected end of data");
}

void ByteReader::expect_magic(std::string_view magic) {
    if (bytes(magic.size()) != magic) throw FormatError(what_ + ": bad magic bytes");
}

std::string ByteReader::bytes(std::size_t n) {
    std::string s(n, '\0');
    read(s.data(), n);
    return s;
}

std::uint8_t ByteReader::u8() {
    char c = 0;
    read(&c, 1);
    return static_cast<std::uint8_t>(c);
}

std::uint32_t ByteReader::u32() {
    std::array<char, 4> b{};
    read(b.data(), b.size());
    return from_le<std::uint32_t>(b);
}

double ByteReader::f64() {
    std::array<char, 8> b{};
    read(b.data(), b.size());
    return std::bit_cast<double>(from_le<std::uint64_t>(b));
}

std::vector<double> ByteReader::f64s(std::size_t n) {
    std::vector<double> out(n);
    for (auto& v : out) v = f64();
    return out;
}

void ByteReader::expect_end() {
    if (is_.peek() != std::char_traits<char>::eof())
        throw FormatError(what_ + ": trailing bytes after payload");
}

void write_field_block(std::ostream& os, const FieldBlock& block) {
    const std::size_t expected =
        static_cast<std::size_t>(block.components) * block.n_x * block.n_y;
    if (block.data.size() != expected) throw InvalidInput("OITF block size does not match header");
    ByteWriter w(os);
    w.bytes(kFieldMagic);
    w.u32(block.n_x);
    w.u32(block.n_y);
    w.u8(block.components);
    w.f64s(block.data);
}

FieldBlock read_field_block(std::istream& is) {
    ByteReader r(is, "OITF");
    r.expect_magic(kFieldMagic);
    FieldBlock b;
    b.n_x = r.u32();
    b.n_y = r.u32();
    b.components = r.u8();
    if (b.components == 0) throw FormatError("OITF: zero components");
    b.data = r.f64s(static_cast<std::size_t>(b.components) * b.n_x * b.n_y);
    r.expect_end();
    return b;
}

namespace {

void save_block(const std::filesystem::path& path, const FieldBlock& b) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw InvalidInput("cannot open " + path.string() + " for writing");
    write_field_block(os, b);
    if (!os) throw InvalidInput("failed writing " + path.string());
}

FieldBlock load_block(const std::filesystem::path& path, std::uint8_t components) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw InvalidInput("cannot open " + path.string());
    FieldBlock b = read_field_block(is);
    if (b.components != components)
        throw FormatError(path.string() + ": expected " + std::to_string(components) +
                          " component(s), found " + std::to_string(b.components));
    return b;
}

std::vector<double> component(const FieldBlock& b, std::size_t c) {
    const std::size_t n = static_cast<std::size_t>(b.n_x) * b.n_y;
    return {b.data.begin() + static_cast<std::ptrdiff_t>(c * n),
            b.data.begin() + static_cast<std::ptrdiff_t>((c + 1) * n)};
}

}  // namespace

void save_scalar_field(const std::filesystem::path& path, const ScalarField& field) {
    const auto& g = field.grid();
    FieldBlock b{static_cast<std::uint32_t>(g.n_x()), static_cast<std::uint32_t>(g.n_y()), 1,
                 {field.values().begin(), field.values().end()}};
    save_block(path, b);
}

void save_vector_field(const std::filesystem::path& path, const VectorField& field) {
    const auto& g = field.grid();
    FieldBlock b{static_cast<std::uint32_t>(g.n_x()), static_cast<std::uint32_t>(g.n_y()), 2, {}};
    b.data.assign(field.u_x.values().begin(), field.u_x.values().end());
    b.data.insert(b.data.end(), field.u_y.values().begin(), field.u_y.values().end());
    save_block(path, b);
}

ScalarField load_scalar_field(const std::filesystem::path& path) {
    const FieldBlock b = load_block(path, 1);
    return {PeriodicGrid(b.n_x, b.n_y), b.data};
}

VectorField load_vector_field(const std::filesystem::path& path) {
    const FieldBlock b = load_block(path, 2);
    const PeriodicGrid g(b.n_x, b.n_y);
    return {ScalarField(g, component(b, 0)), ScalarField(g, component(b, 1))};
}

}  // namespace oit
