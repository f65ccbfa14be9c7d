#pragma once

// OITF binary field files: magic "OITF1\n", u32 n_x, u32 n_y, u8 component
// count, then each component as row-major little-endian float64.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "oit/grid.hpp"

namespace oit {

inline constexpr std::string_view kFieldMagic = "OITF1\n";

// Raw OITF payload. Not tied to a PeriodicGrid so N x 2 sample arrays
// (n_x = N, n_y = 1) fit the same container.
struct FieldBlock {
    std::uint32_t n_x = 0;
    std::uint32_t n_y = 0;
    std::uint8_t components = 0;
    std::vector<double> data;  // components * n_x * n_y values
};

// Little-endian binary writer/reader shared by OITF and OITM.
class ByteWriter {
  public:
    explicit ByteWriter(std::ostream& os) : os_(os) {}
    void bytes(std::string_view s);
    void u8(std::uint8_t v);
    void u32(std::uint32_t v);
    void f64(double v);
    void f64s(std::span<const double> v);

  private:
    std::ostream& os_;
};

class ByteReader {
  public:
    ByteReader(std::istream& is, std::string what) : is_(is), what_(std::move(what)) {}
    void expect_magic(std::string_view magic);
    std::string bytes(std::size_t n);
    std::uint8_t u8();
    std::uint32_t u32();
    double f64();
    std::vector<double> f64s(std::size_t n);
    // Throws FormatError unless the stream is exhausted.
    void expect_end();

  private:
    void read(char* dst, std::size_t n);

    std::istream& is_;
    std::string what_;
};

void write_field_block(std::ostream& os, const FieldBlock& block);
[[nodiscard]] FieldBlock read_field_block(std::istream& is);

void save_scalar_field(const std::filesystem::path& path, const ScalarField& field);
void save_vector_field(const std::filesystem::path& path, const VectorField& field);
[[nodiscard]] ScalarField load_scalar_field(const std::filesystem::path& path);
[[nodiscard]] VectorField load_vector_field(const std::filesystem::path& path);

}  // namespace oit
