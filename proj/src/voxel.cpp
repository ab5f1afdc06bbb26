#include "lbspec/voxel.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace lbspec {

VoxelGrid make_voxel_grid(std::array<int, 3> dims, Vec3 spacing,
                          std::vector<std::uint8_t> occupancy) {
  if (dims[0] <= 0 || dims[1] <= 0 || dims[2] <= 0)
    throw ValidationError("voxel grid dims must be positive");
  if (!(spacing[0] > 0.0 && spacing[1] > 0.0 && spacing[2] > 0.0))
    throw ValidationError("voxel spacing must be strictly positive");
  const std::size_t expected = static_cast<std::size_t>(dims[0]) * dims[1] * dims[2];
  if (occupancy.size() != expected)
    throw ValidationError("occupancy length " + std::to_string(occupancy.size()) +
                          " does not match dims product " + std::to_string(expected));
  return VoxelGrid{dims, spacing, std::move(occupancy)};
}

VoxelGrid load_voxgrid(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());

  std::string word;
  int version = 0;
  if (!(in >> word >> version) || word != "VOXGRID" || version != 1)
    throw ParseError(path.string() + ": missing 'VOXGRID 1' header");

  std::array<int, 3> dims{};
  if (!(in >> word) || word != "dims" || !(in >> dims[0] >> dims[1] >> dims[2]))
    throw ParseError(path.string() + ": malformed dims line");
  Vec3 spacing;
  if (!(in >> word) || word != "spacing" || !(in >> spacing[0] >> spacing[1] >> spacing[2]))
    throw ParseError(path.string() + ": malformed spacing line");
  if (dims[0] <= 0 || dims[1] <= 0 || dims[2] <= 0)
    throw ParseError(path.string() + ": dims must be positive");

  const std::size_t expected = static_cast<std::size_t>(dims[0]) * dims[1] * dims[2];
  std::vector<std::uint8_t> occupancy;
  occupancy.reserve(expected);
  char c;
  while (in.get(c)) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    if (c != '0' && c != '1')
      throw ParseError(path.string() + ": payload character '" + std::string(1, c) +
                       "' is not 0 or 1");
    if (occupancy.size() == expected)
      throw ParseError(path.string() + ": payload longer than nx*ny*nz = " +
                       std::to_string(expected));
    occupancy.push_back(c == '1' ? 1 : 0);
  }
  if (occupancy.size() != expected)
    throw ParseError(path.string() + ": payload has " + std::to_string(occupancy.size()) +
                     " cells, header declares " + std::to_string(expected));

  return make_voxel_grid(dims, spacing, std::move(occupancy));
}

void save_voxgrid(const VoxelGrid& grid, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path.string());
  char buf[96];
  std::snprintf(buf, sizeof buf, "spacing %.17g %.17g %.17g\n", grid.spacing[0],
                grid.spacing[1], grid.spacing[2]);
  out << "VOXGRID 1\n"
      << "dims " << grid.dims[0] << ' ' << grid.dims[1] << ' ' << grid.dims[2] << '\n'
      << buf;
  const std::size_t per_line = 64;
  for (std::size_t i = 0; i < grid.occupancy.size(); ++i) {
    out << (grid.occupancy[i] ? '1' : '0');
    if ((i + 1) % per_line == 0) out << '\n';
  }
  if (grid.occupancy.size() % per_line != 0) out << '\n';
  if (!out) throw ParseError("write failed for " + path.string());
}

}  // namespace lbspec
