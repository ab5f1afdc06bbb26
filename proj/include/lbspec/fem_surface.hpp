#pragma once

#include <array>

#include "lbspec/fem_system.hpp"
#include "lbspec/mesh.hpp"
#include "lbspec/types.hpp"

namespace lbspec {

// Nodal shape functions on the reference triangle 0 <= u, v, u+v <= 1.
// The parametrization follows p(u,v) with vertices P1 = p(0,0), P2 = p(0,1),
// P3 = p(1,0); basis l is the polynomial that is 1 at reference node l and 0
// at the others. Coefficients are stored against the monomial list
// 1, u, v [, u^2, uv, v^2 [, u^3, u^2 v, u v^2, v^3]].
struct ElementBasis {
  BasisOrder order;
  Eigen::MatrixX2d nodes;       // reference coordinates, one node per row
  Eigen::MatrixX2i powers;      // monomial exponents (a, b) per column of coeffs
  MatX coeffs;                  // coeffs(l, j): coefficient of monomial j in h_l

  int node_count() const { return static_cast<int>(nodes.rows()); }
  double value(int l, double u, double v) const;
  Eigen::Vector2d gradient(int l, double u, double v) const;
};

ElementBasis reference_basis(BasisOrder order);

// Exact reference-triangle integrals of basis products:
//   mass(l, m)       = int h_l h_m du dv
//   grad[i][j](l, m) = int d_i h_l d_j h_m du dv   (d_0 = d/du, d_1 = d/dv)
// computed with the closed form  int u^a v^b du dv = a! b! / (a+b+2)!.
struct ElementTemplates {
  MatX mass;
  std::array<std::array<MatX, 2>, 2> grad;
};

ElementTemplates reference_integrals(const ElementBasis& basis);

// First fundamental form of the flat triangle (P1, P2, P3) under the
// parametrization above: g11 = |P3-P1|^2, g22 = |P2-P1|^2,
// g12 = (P3-P1).(P2-P1).
struct MetricTensor2 {
  double g11, g12, g22;

  double det() const { return g11 * g22 - g12 * g12; }
  double sqrt_det() const;
  // Entries of the inverse metric.
  double inv11() const { return g22 / det(); }
  double inv12() const { return -g12 / det(); }
  double inv22() const { return g11 / det(); }
};

MetricTensor2 triangle_metric(const Vec3& p1, const Vec3& p2, const Vec3& p3);

// Global node numbering: vertex nodes first (mesh vertex ids), then edge
// nodes in lexicographic edge order (for cubic, fraction 1/3 from the
// smaller vertex id before 2/3), then one centroid node per triangle.
struct SurfaceNodeMap {
  int count = 0;
  int edge_count = 0;
  Eigen::MatrixXi element_nodes;  // triangle -> global node ids, local order
};

SurfaceNodeMap global_node_map(const TriangleMesh& mesh, BasisOrder order);

// Nodes lying on boundary edges (endpoints plus the edge's interior nodes).
BoundarySet surface_boundary_nodes(const TriangleMesh& mesh, BasisOrder order,
                                   const SurfaceNodeMap& node_map);

FemSystem assemble_surface(const TriangleMesh& mesh, BasisOrder order, BoundaryCondition bc);

}  // namespace lbspec
