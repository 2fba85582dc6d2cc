#include "qthalf/field_io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace qthalf {

namespace {

constexpr char kMagic[12] = {'Q', 'T', 'H', 'A', 'L', 'F', '-', 'F', 'I', 'E', 'L', 'D'};
constexpr uint32_t kVersion = 1;

void put_u32(std::ostream& os, uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                        static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
  os.write(reinterpret_cast<const char*>(b), 4);
}

uint32_t get_u32(std::istream& is) {
  unsigned char b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
         (static_cast<uint32_t>(b[2]) << 16) | (static_cast<uint32_t>(b[3]) << 24);
}

void put_f64(std::ostream& os, double v) {
  uint64_t u;
  std::memcpy(&u, &v, 8);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(u >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 8);
}

double get_f64(std::istream& is) {
  unsigned char b[8];
  is.read(reinterpret_cast<char*>(b), 8);
  uint64_t u = 0;
  for (int i = 0; i < 8; ++i) u |= static_cast<uint64_t>(b[i]) << (8 * i);
  double v;
  std::memcpy(&v, &u, 8);
  return v;
}

}  // namespace

void save_field(const std::string& path, const GridField& f) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os.write(kMagic, sizeof(kMagic));
  put_u32(os, kVersion);
  const Grid& g = f.grid();
  put_u32(os, static_cast<uint32_t>(g.dim));
  put_u32(os, static_cast<uint32_t>(g.n_tan));
  put_u32(os, static_cast<uint32_t>(g.n_wall));
  put_u32(os, static_cast<uint32_t>(f.components()));
  put_f64(os, g.tan_extent);
  put_f64(os, g.wall_extent);
  for (double v : f.data()) put_f64(os, v);
  if (!os) throw std::runtime_error("write failed: " + path);
}

GridField load_field(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open for reading: " + path);
  char magic[12];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw std::runtime_error("not a field snapshot (bad magic): " + path);
  const uint32_t version = get_u32(is);
  if (version != kVersion)
    throw std::runtime_error("unsupported snapshot version " + std::to_string(version));
  const uint32_t dim = get_u32(is);
  const uint32_t n_tan = get_u32(is);
  const uint32_t n_wall = get_u32(is);
  const uint32_t comps = get_u32(is);
  const double tan_extent = get_f64(is);
  const double wall_extent = get_f64(is);
  if (!is) throw std::runtime_error("truncated snapshot header: " + path);

  Grid g(static_cast<int>(dim), static_cast<int>(n_tan), static_cast<int>(n_wall), tan_extent,
         wall_extent);
  GridField f(g, static_cast<int>(comps));
  for (double& v : f.data()) v = get_f64(is);
  if (!is) throw std::runtime_error("truncated snapshot payload: " + path);
  char extra;
  if (is.read(&extra, 1))
    throw std::runtime_error("snapshot has trailing bytes beyond declared size: " + path);
  return f;
}

}  // namespace qthalf
