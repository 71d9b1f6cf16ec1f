#pragma once

// Binary field snapshots ("NEMF" v1) and CSV export.

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "nematic/grid.hpp"

namespace nematic {

static_assert(std::endian::native == std::endian::little, "snapshot I/O assumes a little-endian host");

namespace detail {

template <class T>
void write_raw(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T read_raw(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw std::runtime_error("snapshot: truncated file");
  return v;
}

}  // namespace detail

inline constexpr std::uint32_t kSnapshotVersion = 1;

/// Writes the components (all on one grid) to `path`.
inline void write_snapshot(const std::string& path, const std::vector<ComplexField>& components) {
  if (components.empty()) throw std::invalid_argument("write_snapshot: no components");
  const Grid2D& g = components.front().grid();
  for (const auto& c : components) components.front().check_compatible(c);
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("write_snapshot: cannot open " + path);
  os.write("NEMF", 4);
  detail::write_raw<std::uint32_t>(os, kSnapshotVersion);
  detail::write_raw<std::uint64_t>(os, g.nx());
  detail::write_raw<std::uint64_t>(os, g.ny());
  detail::write_raw<std::uint64_t>(os, components.size());
  for (const auto& c : components) {
    for (const auto& v : c.values()) {
      detail::write_raw<double>(os, v.real());
      detail::write_raw<double>(os, v.imag());
    }
  }
  if (!os) throw std::runtime_error("write_snapshot: write failed for " + path);
}

/// Reads a snapshot onto `grid`, whose node counts must match the file.
inline std::vector<ComplexField> read_snapshot(const std::string& path, const Grid2D& grid) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("read_snapshot: cannot open " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "NEMF", 4) != 0) throw std::runtime_error("read_snapshot: bad magic in " + path);
  if (detail::read_raw<std::uint32_t>(is) != kSnapshotVersion) throw std::runtime_error("read_snapshot: unsupported version");
  const auto nx = detail::read_raw<std::uint64_t>(is);
  const auto ny = detail::read_raw<std::uint64_t>(is);
  const auto nc = detail::read_raw<std::uint64_t>(is);
  if (nx != grid.nx() || ny != grid.ny()) throw std::runtime_error("read_snapshot: grid size mismatch");
  std::vector<ComplexField> out;
  for (std::uint64_t c = 0; c < nc; ++c) {
    ComplexField f(grid);
    for (auto& v : f.values()) {
      const double re = detail::read_raw<double>(is);
      const double im = detail::read_raw<double>(is);
      v = {re, im};
    }
    out.push_back(std::move(f));
  }
  return out;
}

/// CSV with columns x,y,re,im,abs,arg.
inline void write_field_csv(const std::string& path, const ComplexField& f) {
  std::FILE* fp = std::fopen(path.c_str(), "w");
  if (!fp) throw std::runtime_error("write_field_csv: cannot open " + path);
  std::fputs("x,y,re,im,abs,arg\n", fp);
  const Grid2D& g = f.grid();
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    const Complex z = g.point(idx);
    const Complex v = f[idx];
    std::fprintf(fp, "%.12e,%.12e,%.12e,%.12e,%.12e,%.12e\n", z.real(), z.imag(), v.real(), v.imag(), std::abs(v),
                 std::arg(v));
  }
  std::fclose(fp);
}

}  // namespace nematic
