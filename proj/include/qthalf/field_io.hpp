#pragma once

#include <string>

#include "qthalf/fields.hpp"

namespace qthalf {

// Binary snapshot layout (little endian):
//   bytes  0..11   magic "QTHALF-FIELD"
//   bytes 12..15   u32 format version (1)
//   4 x u32        dim, n_tan, n_wall, components
//   2 x f64        tan_extent, wall_extent
//   f64 payload    values in storage order (component-major, wall index fastest)
void save_field(const std::string& path, const GridField& f);
GridField load_field(const std::string& path);

}  // namespace qthalf
