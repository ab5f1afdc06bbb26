#pragma once

#include <filesystem>
#include <utility>
#include <vector>

#include "lbspec/types.hpp"

namespace lbspec {

// Triangulated surface of a scanned part, possibly open. Immutable after
// construction; validated invariants:
//   - every triangle references three distinct, existing vertices
//   - no triangle area below 1e-12 times the squared bounding-box diagonal
//   - every undirected edge is shared by at most two triangles
struct TriangleMesh {
  Points vertices;
  Faces triangles;

  int vertex_count() const { return static_cast<int>(vertices.rows()); }
  int triangle_count() const { return static_cast<int>(triangles.rows()); }
};

// Relative area threshold below which a triangle counts as degenerate.
inline constexpr double kDegenerateAreaRatio = 1e-12;

// Validates and wraps raw vertex/face arrays.
TriangleMesh make_triangle_mesh(Points vertices, Faces triangles);

TriangleMesh load_off(const std::filesystem::path& path);
void save_off(const TriangleMesh& mesh, const std::filesystem::path& path);

// Undirected edges incident to exactly one triangle, as (min, max) vertex
// pairs in lexicographic order. Empty iff the mesh is closed.
std::vector<std::pair<int, int>> mesh_boundary_edges(const TriangleMesh& mesh);

inline bool is_closed(const TriangleMesh& mesh) { return mesh_boundary_edges(mesh).empty(); }

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c);
double mesh_surface_area(const TriangleMesh& mesh);

// All undirected edges as sorted (min, max) pairs, lexicographically ordered.
std::vector<std::pair<int, int>> mesh_edges(const TriangleMesh& mesh);

}  // namespace lbspec
