#include "lbspec/fem_surface.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <vector>

namespace lbspec {

namespace {

int nodes_per_element(BasisOrder order) {
  switch (order) {
    case BasisOrder::linear: return 3;
    case BasisOrder::quadratic: return 6;
    case BasisOrder::cubic: return 10;
  }
  return 0;
}

// Local reference vertices: v0 = (0,0), v1 = (0,1), v2 = (1,0).
const Eigen::Vector2d kRefVertex[3] = {{0.0, 0.0}, {0.0, 1.0}, {1.0, 0.0}};

// Local edges in fixed order; edge nodes are placed at parameter t measured
// from the first vertex of the pair.
const int kLocalEdge[3][2] = {{0, 1}, {1, 2}, {0, 2}};

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// Exact integral of u^a v^b over the reference triangle.
double monomial_integral(int a, int b) {
  return factorial(a) * factorial(b) / factorial(a + b + 2);
}

}  // namespace

double ElementBasis::value(int l, double u, double v) const {
  double s = 0.0;
  for (int j = 0; j < coeffs.cols(); ++j)
    s += coeffs(l, j) * std::pow(u, powers(j, 0)) * std::pow(v, powers(j, 1));
  return s;
}

Eigen::Vector2d ElementBasis::gradient(int l, double u, double v) const {
  Eigen::Vector2d g(0.0, 0.0);
  for (int j = 0; j < coeffs.cols(); ++j) {
    const int a = powers(j, 0), b = powers(j, 1);
    if (a > 0) g[0] += coeffs(l, j) * a * std::pow(u, a - 1) * std::pow(v, b);
    if (b > 0) g[1] += coeffs(l, j) * b * std::pow(u, a) * std::pow(v, b - 1);
  }
  return g;
}

ElementBasis reference_basis(BasisOrder order) {
  const int n = nodes_per_element(order);
  const int degree = order == BasisOrder::linear ? 1 : order == BasisOrder::quadratic ? 2 : 3;

  ElementBasis basis;
  basis.order = order;

  // Monomials in the order of the polynomial expansions: degree by degree.
  basis.powers.resize(n, 2);
  {
    int j = 0;
    for (int d = 0; d <= degree; ++d)
      for (int bv = 0; bv <= d; ++bv) basis.powers.row(j++) << d - bv, bv;
  }

  basis.nodes.resize(n, 2);
  basis.nodes.row(0) = kRefVertex[0];
  basis.nodes.row(1) = kRefVertex[1];
  basis.nodes.row(2) = kRefVertex[2];
  if (order == BasisOrder::quadratic) {
    for (int e = 0; e < 3; ++e) {
      const Eigen::Vector2d a = kRefVertex[kLocalEdge[e][0]];
      const Eigen::Vector2d b = kRefVertex[kLocalEdge[e][1]];
      basis.nodes.row(3 + e) = 0.5 * (a + b);
    }
  } else if (order == BasisOrder::cubic) {
    for (int e = 0; e < 3; ++e) {
      const Eigen::Vector2d a = kRefVertex[kLocalEdge[e][0]];
      const Eigen::Vector2d b = kRefVertex[kLocalEdge[e][1]];
      basis.nodes.row(3 + 2 * e) = a + (b - a) / 3.0;
      basis.nodes.row(3 + 2 * e + 1) = a + 2.0 * (b - a) / 3.0;
    }
    basis.nodes.row(9) << 1.0 / 3.0, 1.0 / 3.0;
  }

  // Solve the nodal interpolation system V c = I, V(m, j) = monomial_j(node_m).
  MatX vandermonde(n, n);
  for (int m = 0; m < n; ++m)
    for (int j = 0; j < n; ++j)
      vandermonde(m, j) = std::pow(basis.nodes(m, 0), basis.powers(j, 0)) *
                          std::pow(basis.nodes(m, 1), basis.powers(j, 1));
  Eigen::FullPivLU<MatX> lu(vandermonde);
  if (!lu.isInvertible())
    throw SolverError("singular nodal interpolation system for order " +
                      std::string(to_string(order)));
  basis.coeffs = lu.inverse().transpose();

  for (int l = 0; l < n; ++l)
    for (int m = 0; m < n; ++m) {
      const double got = basis.value(l, basis.nodes(m, 0), basis.nodes(m, 1));
      if (std::abs(got - (l == m ? 1.0 : 0.0)) > 1e-12)
        throw SolverError("shape-function nodal condition violated");
    }
  return basis;
}

ElementTemplates reference_integrals(const ElementBasis& basis) {
  const int n = basis.node_count();
  ElementTemplates t;
  t.mass = MatX::Zero(n, n);
  for (auto& row : t.grad)
    for (auto& m : row) m = MatX::Zero(n, n);

  const int nm = static_cast<int>(basis.powers.rows());
  for (int l = 0; l < n; ++l) {
    for (int m = l; m < n; ++m) {
      double mass = 0.0;
      double guu = 0.0, guv = 0.0, gvu = 0.0, gvv = 0.0;
      for (int j = 0; j < nm; ++j) {
        const double cl = basis.coeffs(l, j);
        if (cl == 0.0) continue;
        const int aj = basis.powers(j, 0), bj = basis.powers(j, 1);
        for (int k = 0; k < nm; ++k) {
          const double cm = basis.coeffs(m, k);
          if (cm == 0.0) continue;
          const int ak = basis.powers(k, 0), bk = basis.powers(k, 1);
          const double c = cl * cm;
          mass += c * monomial_integral(aj + ak, bj + bk);
          if (aj > 0 && ak > 0)
            guu += c * aj * ak * monomial_integral(aj + ak - 2, bj + bk);
          if (aj > 0 && bk > 0)
            guv += c * aj * bk * monomial_integral(aj - 1 + ak, bj + bk - 1);
          if (bj > 0 && ak > 0)
            gvu += c * bj * ak * monomial_integral(aj + ak - 1, bj - 1 + bk);
          if (bj > 0 && bk > 0)
            gvv += c * bj * bk * monomial_integral(aj + ak, bj + bk - 2);
        }
      }
      t.mass(l, m) = t.mass(m, l) = mass;
      t.grad[0][0](l, m) = t.grad[0][0](m, l) = guu;
      t.grad[1][1](l, m) = t.grad[1][1](m, l) = gvv;
      // grad[i][j](l, m) = grad[j][i](m, l)
      t.grad[0][1](l, m) = guv;
      t.grad[1][0](m, l) = guv;
      t.grad[1][0](l, m) = gvu;
      t.grad[0][1](m, l) = gvu;
    }
  }
  return t;
}

double MetricTensor2::sqrt_det() const {
  const double d = det();
  if (!(d > 0.0)) throw ValidationError("degenerate triangle: metric determinant <= 0");
  return std::sqrt(d);
}

MetricTensor2 triangle_metric(const Vec3& p1, const Vec3& p2, const Vec3& p3) {
  const Vec3 du = p3 - p1;  // d p / d u
  const Vec3 dv = p2 - p1;  // d p / d v
  MetricTensor2 g{du.squaredNorm(), du.dot(dv), dv.squaredNorm()};
  if (!(g.det() > 0.0)) throw ValidationError("degenerate triangle: metric determinant <= 0");
  return g;
}

SurfaceNodeMap global_node_map(const TriangleMesh& mesh, BasisOrder order) {
  const int nv = mesh.vertex_count();
  const int nf = mesh.triangle_count();
  const int npe = nodes_per_element(order);

  SurfaceNodeMap map;
  map.element_nodes.resize(nf, npe);

  for (int f = 0; f < nf; ++f)
    for (int c = 0; c < 3; ++c) map.element_nodes(f, c) = mesh.triangles(f, c);

  if (order == BasisOrder::linear) {
    map.count = nv;
    return map;
  }

  const auto edges = mesh_edges(mesh);
  map.edge_count = static_cast<int>(edges.size());
  const auto edge_index = [&edges](int a, int b) {
    const std::pair<int, int> key{std::min(a, b), std::max(a, b)};
    return static_cast<int>(std::lower_bound(edges.begin(), edges.end(), key) - edges.begin());
  };

  if (order == BasisOrder::quadratic) {
    for (int f = 0; f < nf; ++f) {
      const auto t = mesh.triangles.row(f);
      for (int e = 0; e < 3; ++e) {
        const int a = t[kLocalEdge[e][0]], b = t[kLocalEdge[e][1]];
        map.element_nodes(f, 3 + e) = nv + edge_index(a, b);
      }
    }
    map.count = nv + map.edge_count;
    return map;
  }

  // Cubic: two nodes per edge keyed by the fraction from the smaller vertex
  // id, so both incident triangles address the same physical points, plus a
  // centroid node per triangle.
  for (int f = 0; f < nf; ++f) {
    const auto t = mesh.triangles.row(f);
    for (int e = 0; e < 3; ++e) {
      const int a = t[kLocalEdge[e][0]], b = t[kLocalEdge[e][1]];
      const int ei = edge_index(a, b);
      // Local node 3+2e sits at fraction 1/3 from a; if a is the larger
      // vertex id that is fraction 2/3 from the smaller one.
      const int sub_near_a = a < b ? 0 : 1;
      map.element_nodes(f, 3 + 2 * e) = nv + 2 * ei + sub_near_a;
      map.element_nodes(f, 3 + 2 * e + 1) = nv + 2 * ei + (1 - sub_near_a);
    }
    map.element_nodes(f, 9) = nv + 2 * map.edge_count + f;
  }
  map.count = nv + 2 * map.edge_count + nf;
  return map;
}

BoundarySet surface_boundary_nodes(const TriangleMesh& mesh, BasisOrder order,
                                   const SurfaceNodeMap& node_map) {
  const auto boundary_edges = mesh_boundary_edges(mesh);
  const int nv = mesh.vertex_count();

  std::vector<int> nodes;
  if (order == BasisOrder::linear) {
    for (const auto& [a, b] : boundary_edges) {
      nodes.push_back(a);
      nodes.push_back(b);
    }
  } else {
    const auto edges = mesh_edges(mesh);
    for (const auto& e : boundary_edges) {
      nodes.push_back(e.first);
      nodes.push_back(e.second);
      const int ei =
          static_cast<int>(std::lower_bound(edges.begin(), edges.end(), e) - edges.begin());
      if (order == BasisOrder::quadratic) {
        nodes.push_back(nv + ei);
      } else {
        nodes.push_back(nv + 2 * ei);
        nodes.push_back(nv + 2 * ei + 1);
      }
    }
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  (void)node_map;
  return BoundarySet{std::move(nodes)};
}

FemSystem assemble_surface(const TriangleMesh& mesh, BasisOrder order, BoundaryCondition bc) {
  const auto node_map = global_node_map(mesh, order);
  const auto boundary = surface_boundary_nodes(mesh, order, node_map);

  if (bc == BoundaryCondition::closed && !boundary.empty())
    throw ValidationError("mesh has " +
                          std::to_string(mesh_boundary_edges(mesh).size()) +
                          " boundary edges");

  const ElementBasis basis = reference_basis(order);
  const ElementTemplates tpl = reference_integrals(basis);
  const int npe = basis.node_count();
  const int n = node_map.count;

  // (G01 + G01^T) is shared by the two off-diagonal metric terms.
  const MatX grad_uv_sym = tpl.grad[0][1] + tpl.grad[0][1].transpose();

  std::vector<Triplet> k_triplets, b_triplets;
  k_triplets.reserve(static_cast<std::size_t>(mesh.triangle_count()) * npe * npe);
  b_triplets.reserve(k_triplets.capacity());

  MatX local_k(npe, npe), local_b(npe, npe);
  for (int f = 0; f < mesh.triangle_count(); ++f) {
    const auto t = mesh.triangles.row(f);
    const MetricTensor2 g = triangle_metric(mesh.vertices.row(t[0]), mesh.vertices.row(t[1]),
                                            mesh.vertices.row(t[2]));
    const double sd = g.sqrt_det();
    local_k = sd * (g.inv11() * tpl.grad[0][0] + g.inv12() * grad_uv_sym +
                    g.inv22() * tpl.grad[1][1]);
    local_b = sd * tpl.mass;
    for (int i = 0; i < npe; ++i) {
      const int gi = node_map.element_nodes(f, i);
      for (int j = 0; j < npe; ++j) {
        const int gj = node_map.element_nodes(f, j);
        k_triplets.emplace_back(gi, gj, local_k(i, j));
        b_triplets.emplace_back(gi, gj, local_b(i, j));
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
  if (bc == BoundaryCondition::dirichlet && !boundary.empty()) {
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
