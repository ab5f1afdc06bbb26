#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "lbspec/types.hpp"

namespace lbspec {

// Axis-aligned occupancy grid with physical spacing. Cell (ix, iy, iz) is
// stored at index ix + nx*(iy + ny*iz), i.e. x-fastest order.
struct VoxelGrid {
  std::array<int, 3> dims{0, 0, 0};
  Vec3 spacing{1.0, 1.0, 1.0};
  std::vector<std::uint8_t> occupancy;

  std::size_t cell_index(int ix, int iy, int iz) const {
    return static_cast<std::size_t>(ix) +
           static_cast<std::size_t>(dims[0]) *
               (static_cast<std::size_t>(iy) + static_cast<std::size_t>(dims[1]) * iz);
  }
  bool in_grid(int ix, int iy, int iz) const {
    return ix >= 0 && iy >= 0 && iz >= 0 && ix < dims[0] && iy < dims[1] && iz < dims[2];
  }
  bool active(int ix, int iy, int iz) const {
    return in_grid(ix, iy, iz) && occupancy[cell_index(ix, iy, iz)] != 0;
  }
  long active_count() const {
    long n = 0;
    for (auto v : occupancy) n += (v != 0);
    return n;
  }
};

VoxelGrid make_voxel_grid(std::array<int, 3> dims, Vec3 spacing,
                          std::vector<std::uint8_t> occupancy);

// VOXGRID v1 (ASCII): "VOXGRID 1" / "dims nx ny nz" / "spacing s1 s2 s3" /
// payload of nx*ny*nz characters from {0,1} in x-fastest order, whitespace
// ignored.
VoxelGrid load_voxgrid(const std::filesystem::path& path);
void save_voxgrid(const VoxelGrid& grid, const std::filesystem::path& path);

}  // namespace lbspec
