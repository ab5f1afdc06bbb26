#include "lbspec/fem_voxel.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <tuple>

namespace lbspec {

namespace {

// Corner offsets in x-fastest order.
const int kCorner[8][3] = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0},
                           {0, 0, 1}, {1, 0, 1}, {0, 1, 1}, {1, 1, 1}};

// The 12 edges: axis the edge runs along plus the base corner offset (the
// lexicographically smaller endpoint). Ordered by axis, then x-fastest base.
struct EdgeDef {
  int axis;
  int base[3];
};
const EdgeDef kEdge[12] = {
    {0, {0, 0, 0}}, {0, {0, 1, 0}}, {0, {0, 0, 1}}, {0, {0, 1, 1}},
    {1, {0, 0, 0}}, {1, {1, 0, 0}}, {1, {0, 0, 1}}, {1, {1, 0, 1}},
    {2, {0, 0, 0}}, {2, {1, 0, 0}}, {2, {0, 1, 0}}, {2, {1, 1, 0}},
};

// Serendipity cubic monomials: every term is at most cubic in one variable
// and at most linear in the others.
const int kCubicPowers[32][3] = {
    {0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 0}, {1, 0, 1}, {0, 1, 1}, {1, 1, 1},
    {2, 0, 0}, {2, 1, 0}, {2, 0, 1}, {2, 1, 1},
    {0, 2, 0}, {1, 2, 0}, {0, 2, 1}, {1, 2, 1},
    {0, 0, 2}, {1, 0, 2}, {0, 1, 2}, {1, 1, 2},
    {3, 0, 0}, {3, 1, 0}, {3, 0, 1}, {3, 1, 1},
    {0, 3, 0}, {1, 3, 0}, {0, 3, 1}, {1, 3, 1},
    {0, 0, 3}, {1, 0, 3}, {0, 1, 3}, {1, 1, 3},
};

const int kLinearPowers[8][3] = {
    {0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 0}, {1, 0, 1}, {0, 1, 1}, {1, 1, 1},
};

// 4-point Gauss-Legendre rule on [0, 1], exact to degree 7.
const double kGaussX[4] = {
    0.5 - 0.5 * 0.8611363115940526, 0.5 - 0.5 * 0.3399810435848563,
    0.5 + 0.5 * 0.3399810435848563, 0.5 + 0.5 * 0.8611363115940526};
const double kGaussW[4] = {0.5 * 0.3478548451374538, 0.5 * 0.6521451548625461,
                           0.5 * 0.6521451548625461, 0.5 * 0.3478548451374538};

}  // namespace

double VoxelBasis::value(int l, double u, double v, double w) const {
  double s = 0.0;
  for (int j = 0; j < coeffs.cols(); ++j)
    s += coeffs(l, j) * std::pow(u, powers(j, 0)) * std::pow(v, powers(j, 1)) *
         std::pow(w, powers(j, 2));
  return s;
}

Vec3 VoxelBasis::gradient(int l, double u, double v, double w) const {
  Vec3 g(0.0, 0.0, 0.0);
  for (int j = 0; j < coeffs.cols(); ++j) {
    const int a = powers(j, 0), b = powers(j, 1), c = powers(j, 2);
    const double cl = coeffs(l, j);
    if (a > 0) g[0] += cl * a * std::pow(u, a - 1) * std::pow(v, b) * std::pow(w, c);
    if (b > 0) g[1] += cl * b * std::pow(u, a) * std::pow(v, b - 1) * std::pow(w, c);
    if (c > 0) g[2] += cl * c * std::pow(u, a) * std::pow(v, b) * std::pow(w, c - 1);
  }
  return g;
}

VoxelBasis voxel_basis(BasisOrder order) {
  if (order == BasisOrder::quadratic)
    throw ValidationError("voxel elements support linear and cubic orders only");
  const bool cubic = order == BasisOrder::cubic;
  const int n = cubic ? 32 : 8;

  VoxelBasis basis;
  basis.order = order;
  basis.powers.resize(n, 3);
  for (int j = 0; j < n; ++j) {
    const int* p = cubic ? kCubicPowers[j] : kLinearPowers[j];
    basis.powers.row(j) << p[0], p[1], p[2];
  }

  basis.nodes.resize(n, 3);
  for (int m = 0; m < 8; ++m)
    basis.nodes.row(m) << kCorner[m][0], kCorner[m][1], kCorner[m][2];
  if (cubic) {
    for (int e = 0; e < 12; ++e) {
      for (int sub = 0; sub < 2; ++sub) {
        Vec3 p(kEdge[e].base[0], kEdge[e].base[1], kEdge[e].base[2]);
        p[kEdge[e].axis] = (sub + 1) / 3.0;
        basis.nodes.row(8 + 2 * e + sub) = p;
      }
    }
  }

  MatX vandermonde(n, n);
  for (int m = 0; m < n; ++m)
    for (int j = 0; j < n; ++j)
      vandermonde(m, j) = std::pow(basis.nodes(m, 0), basis.powers(j, 0)) *
                          std::pow(basis.nodes(m, 1), basis.powers(j, 1)) *
                          std::pow(basis.nodes(m, 2), basis.powers(j, 2));
  Eigen::FullPivLU<MatX> lu(vandermonde);
  if (!lu.isInvertible()) throw SolverError("singular voxel interpolation system");
  basis.coeffs = lu.inverse().transpose();

  for (int l = 0; l < n; ++l)
    for (int m = 0; m < n; ++m) {
      const double got = basis.value(l, basis.nodes(m, 0), basis.nodes(m, 1), basis.nodes(m, 2));
      if (std::abs(got - (l == m ? 1.0 : 0.0)) > 1e-12)
        throw SolverError("voxel shape-function nodal condition violated");
    }
  return basis;
}

VoxelTemplates voxel_templates(const VoxelBasis& basis, const Vec3& spacing) {
  if (!(spacing[0] > 0.0 && spacing[1] > 0.0 && spacing[2] > 0.0))
    throw ValidationError("voxel spacing must be strictly positive");
  const int n = basis.node_count();
  const double volume = spacing[0] * spacing[1] * spacing[2];
  const Vec3 inv_sq(1.0 / (spacing[0] * spacing[0]), 1.0 / (spacing[1] * spacing[1]),
                    1.0 / (spacing[2] * spacing[2]));

  // Tabulate values and gradients at the 64 tensor quadrature points.
  MatX values(64, n);
  std::array<MatX, 3> grads{MatX(64, n), MatX(64, n), MatX(64, n)};
  VecX weights(64);
  int q = 0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c, ++q) {
        weights[q] = kGaussW[a] * kGaussW[b] * kGaussW[c];
        for (int l = 0; l < n; ++l) {
          values(q, l) = basis.value(l, kGaussX[a], kGaussX[b], kGaussX[c]);
          const Vec3 g = basis.gradient(l, kGaussX[a], kGaussX[b], kGaussX[c]);
          grads[0](q, l) = g[0];
          grads[1](q, l) = g[1];
          grads[2](q, l) = g[2];
        }
      }

  VoxelTemplates tpl;
  tpl.mass = MatX::Zero(n, n);
  tpl.stiffness = MatX::Zero(n, n);
  for (int l = 0; l < n; ++l)
    for (int m = l; m < n; ++m) {
      double bb = 0.0, kk = 0.0;
      for (int p = 0; p < 64; ++p) {
        bb += weights[p] * values(p, l) * values(p, m);
        kk += weights[p] *
              (inv_sq[0] * grads[0](p, l) * grads[0](p, m) +
               inv_sq[1] * grads[1](p, l) * grads[1](p, m) +
               inv_sq[2] * grads[2](p, l) * grads[2](p, m));
      }
      tpl.mass(l, m) = tpl.mass(m, l) = volume * bb;
      tpl.stiffness(l, m) = tpl.stiffness(m, l) = volume * kk;
    }
  return tpl;
}

namespace {

using VertexKey = std::array<int, 3>;                 // (ix, iy, iz)
using EdgeKey = std::array<int, 5>;                   // (axis, ix, iy, iz, sub)

// Sort lattice keys z-major so ids run x-fastest, matching the payload order.
inline std::tuple<int, int, int> vertex_sort_key(const VertexKey& k) {
  return {k[2], k[1], k[0]};
}
inline std::tuple<int, int, int, int, int> edge_sort_key(const EdgeKey& k) {
  return {k[0], k[3], k[2], k[1], k[4]};
}

}  // namespace

VoxelNodeMap voxel_node_map(const VoxelGrid& grid, BasisOrder order) {
  const bool cubic = order == BasisOrder::cubic;
  if (order == BasisOrder::quadratic)
    throw ValidationError("voxel elements support linear and cubic orders only");

  VoxelNodeMap map;
  map.order = order;
  for (int iz = 0; iz < grid.dims[2]; ++iz)
    for (int iy = 0; iy < grid.dims[1]; ++iy)
      for (int ix = 0; ix < grid.dims[0]; ++ix)
        if (grid.active(ix, iy, iz)) map.active.push_back({ix, iy, iz});
  if (map.active.empty()) throw ValidationError("voxel grid has no active voxels");

  std::vector<VertexKey> vertex_keys;
  vertex_keys.reserve(map.active.size() * 8);
  std::vector<EdgeKey> edge_keys;
  if (cubic) edge_keys.reserve(map.active.size() * 24);

  for (const auto& v : map.active) {
    for (const auto& c : kCorner)
      vertex_keys.push_back({v[0] + c[0], v[1] + c[1], v[2] + c[2]});
    if (cubic)
      for (const auto& e : kEdge)
        for (int sub = 0; sub < 2; ++sub)
          edge_keys.push_back({e.axis, v[0] + e.base[0], v[1] + e.base[1], v[2] + e.base[2], sub});
  }

  const auto by_vertex = [](const VertexKey& a, const VertexKey& b) {
    return vertex_sort_key(a) < vertex_sort_key(b);
  };
  std::sort(vertex_keys.begin(), vertex_keys.end(), by_vertex);
  vertex_keys.erase(std::unique(vertex_keys.begin(), vertex_keys.end()), vertex_keys.end());

  const auto by_edge = [](const EdgeKey& a, const EdgeKey& b) {
    return edge_sort_key(a) < edge_sort_key(b);
  };
  if (cubic) {
    std::sort(edge_keys.begin(), edge_keys.end(), by_edge);
    edge_keys.erase(std::unique(edge_keys.begin(), edge_keys.end()), edge_keys.end());
  }

  map.vertex_node_count = static_cast<int>(vertex_keys.size());
  map.count = map.vertex_node_count + static_cast<int>(edge_keys.size());

  const int npe = cubic ? 32 : 8;
  map.element_nodes.resize(static_cast<int>(map.active.size()), npe);
  const auto vertex_id = [&](const VertexKey& k) {
    return static_cast<int>(
        std::lower_bound(vertex_keys.begin(), vertex_keys.end(), k, by_vertex) -
        vertex_keys.begin());
  };
  const auto edge_id = [&](const EdgeKey& k) {
    return map.vertex_node_count +
           static_cast<int>(std::lower_bound(edge_keys.begin(), edge_keys.end(), k, by_edge) -
                            edge_keys.begin());
  };

  for (int e = 0; e < static_cast<int>(map.active.size()); ++e) {
    const auto& v = map.active[e];
    for (int c = 0; c < 8; ++c)
      map.element_nodes(e, c) =
          vertex_id({v[0] + kCorner[c][0], v[1] + kCorner[c][1], v[2] + kCorner[c][2]});
    if (cubic)
      for (int ed = 0; ed < 12; ++ed)
        for (int sub = 0; sub < 2; ++sub)
          map.element_nodes(e, 8 + 2 * ed + sub) =
              edge_id({kEdge[ed].axis, v[0] + kEdge[ed].base[0], v[1] + kEdge[ed].base[1],
                       v[2] + kEdge[ed].base[2], sub});
  }
  return map;
}

BoundarySet voxel_boundary_nodes(const VoxelGrid& grid, const VoxelNodeMap& node_map) {
  const bool cubic = node_map.order == BasisOrder::cubic;
  std::vector<char> on_boundary(node_map.count, 0);

  for (int e = 0; e < static_cast<int>(node_map.active.size()); ++e) {
    const auto& v = node_map.active[e];
    for (int axis = 0; axis < 3; ++axis) {
      for (int side = 0; side < 2; ++side) {
        int nb[3] = {v[0], v[1], v[2]};
        nb[axis] += side == 0 ? -1 : 1;
        if (grid.active(nb[0], nb[1], nb[2])) continue;
        // Face at offset `side` along `axis` touches no active neighbor:
        // every node on that face is a boundary node.
        for (int c = 0; c < 8; ++c)
          if (kCorner[c][axis] == side) on_boundary[node_map.element_nodes(e, c)] = 1;
        if (cubic)
          for (int ed = 0; ed < 12; ++ed) {
            if (kEdge[ed].axis == axis) continue;          // edge crosses the face plane
            if (kEdge[ed].base[axis] != side) continue;    // edge lies on the opposite face
            on_boundary[node_map.element_nodes(e, 8 + 2 * ed)] = 1;
            on_boundary[node_map.element_nodes(e, 8 + 2 * ed + 1)] = 1;
          }
      }
    }
  }

  BoundarySet set;
  for (int i = 0; i < node_map.count; ++i)
    if (on_boundary[i]) set.nodes.push_back(i);
  return set;
}

FemSystem assemble_voxel(const VoxelGrid& grid, BasisOrder order, BoundaryCondition bc) {
  if (bc == BoundaryCondition::closed)
    throw ValidationError("voxel solids always have a boundary; use dirichlet or neumann");

  const VoxelBasis basis = voxel_basis(order);
  const VoxelTemplates tpl = voxel_templates(basis, grid.spacing);
  const VoxelNodeMap node_map = voxel_node_map(grid, order);
  const BoundarySet boundary = voxel_boundary_nodes(grid, node_map);
  const int npe = basis.node_count();
  const int n = node_map.count;

  std::vector<Triplet> k_triplets, b_triplets;
  k_triplets.reserve(node_map.active.size() * npe * npe);
  b_triplets.reserve(k_triplets.capacity());
  for (int e = 0; e < static_cast<int>(node_map.active.size()); ++e) {
    for (int i = 0; i < npe; ++i) {
      const int gi = node_map.element_nodes(e, i);
      for (int j = 0; j < npe; ++j) {
        const int gj = node_map.element_nodes(e, j);
        k_triplets.emplace_back(gi, gj, tpl.stiffness(i, j));
        b_triplets.emplace_back(gi, gj, tpl.mass(i, j));
      }
    }
  }

  SpMat full_k(n, n), full_b(n, n);
  full_k.setFromTriplets(k_triplets.begin(), k_triplets.end());
  full_b.setFromTriplets(b_triplets.begin(), b_triplets.end());

  FemSystem sys;
  sys.full_dim = n;
  sys.boundary = boundary;
  sys.bc = bc;
  if (bc == BoundaryCondition::dirichlet) {
    reduce_dirichlet(full_k, full_b, boundary, sys.stiffness, sys.mass, sys.kept);
  } else {
    sys.stiffness = std::move(full_k);
    sys.mass = std::move(full_b);
    sys.kept.resize(n);
    for (int i = 0; i < n; ++i) sys.kept[i] = i;
  }
  return sys;
}

}  // namespace lbspec
