#pragma once

#include <cstdint>

#include "lbspec/eigensolver.hpp"
#include "lbspec/fem_surface.hpp"
#include "lbspec/fem_voxel.hpp"
#include "lbspec/mesh.hpp"
#include "lbspec/voxel.hpp"

namespace lbspec {

struct SpectrumConfig {
  BasisOrder order = BasisOrder::linear;
  BoundaryCondition bc = BoundaryCondition::closed;
  int k = 15;
  double tol = 1e-8;
  std::uint64_t seed = 0x1b5bec;
};

// Assembles, applies the boundary condition, and solves for the k smallest
// eigenvalues. If k exceeds the reduced system size, all eigenvalues are
// returned. Eigenvectors come back in full node numbering with zeros at
// Dirichlet-deleted boundary nodes.
Spectrum compute_spectrum(const TriangleMesh& mesh, const SpectrumConfig& cfg);
Spectrum compute_spectrum(const VoxelGrid& grid, const SpectrumConfig& cfg);

// Shared tail of the two overloads; exposed for callers that already hold
// an assembled system. shift_scale hints the magnitude of the smallest
// eigenvalues (see SolveOptions).
Spectrum solve_system(const FemSystem& system, const SpectrumConfig& cfg);
Spectrum solve_system(const FemSystem& system, const SpectrumConfig& cfg, double shift_scale);

}  // namespace lbspec
