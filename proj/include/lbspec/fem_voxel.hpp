#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "lbspec/fem_system.hpp"
#include "lbspec/types.hpp"
#include "lbspec/voxel.hpp"

namespace lbspec {

// Nodal shape functions on the reference voxel [0,1]^3: the trilinear
// family (8 corner nodes) and the 32-term serendipity cubic family
// (8 corners plus 2 trisection nodes on each of the 12 edges).
struct VoxelBasis {
  BasisOrder order;             // linear or cubic
  Eigen::MatrixX3d nodes;       // reference coordinates
  Eigen::MatrixX3i powers;      // monomial exponents (a, b, c)
  MatX coeffs;                  // coeffs(l, j): coefficient of monomial j in h_l

  int node_count() const { return static_cast<int>(nodes.rows()); }
  double value(int l, double u, double v, double w) const;
  Vec3 gradient(int l, double u, double v, double w) const;
};

VoxelBasis voxel_basis(BasisOrder order);

// Per-element matrices shared by every voxel of the grid (the metric is
// constant):
//   mass(l, m)      = s1 s2 s3 * int h_l h_m
//   stiffness(l, m) = s1 s2 s3 * sum_i (1/s_i^2) int d_i h_l d_i h_m
// Integrals are exact (4-point Gauss-Legendre per axis, degree <= 7).
struct VoxelTemplates {
  MatX stiffness;
  MatX mass;
};

VoxelTemplates voxel_templates(const VoxelBasis& basis, const Vec3& spacing);

// Global node numbering over the active voxels: vertex nodes first (sorted
// by z, then y, then x), then edge nodes (sorted by axis, base lattice
// point, fraction); the fraction is measured from the lexicographically
// smaller edge endpoint so adjacent voxels share node ids.
struct VoxelNodeMap {
  int count = 0;
  int vertex_node_count = 0;
  Eigen::MatrixXi element_nodes;        // active voxel -> global node ids
  std::vector<std::array<int, 3>> active;  // lattice coords of active voxels, x-fastest order
  BasisOrder order = BasisOrder::linear;
};

VoxelNodeMap voxel_node_map(const VoxelGrid& grid, BasisOrder order);

// Nodes on a face of an active voxel not shared with another active voxel.
BoundarySet voxel_boundary_nodes(const VoxelGrid& grid, const VoxelNodeMap& node_map);

FemSystem assemble_voxel(const VoxelGrid& grid, BasisOrder order, BoundaryCondition bc);

}  // namespace lbspec
