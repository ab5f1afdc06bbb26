#include "lbspec/mesh.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

namespace lbspec {

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
  return 0.5 * (b - a).cross(c - a).norm();
}

double mesh_surface_area(const TriangleMesh& mesh) {
  double area = 0.0;
  for (int f = 0; f < mesh.triangle_count(); ++f) {
    const auto t = mesh.triangles.row(f);
    area += triangle_area(mesh.vertices.row(t[0]), mesh.vertices.row(t[1]),
                          mesh.vertices.row(t[2]));
  }
  return area;
}

std::vector<std::pair<int, int>> mesh_edges(const TriangleMesh& mesh) {
  std::vector<std::pair<int, int>> edges;
  edges.reserve(3 * mesh.triangle_count());
  for (int f = 0; f < mesh.triangle_count(); ++f) {
    const auto t = mesh.triangles.row(f);
    for (int e = 0; e < 3; ++e) {
      const int a = t[e], b = t[(e + 1) % 3];
      edges.emplace_back(std::min(a, b), std::max(a, b));
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

TriangleMesh make_triangle_mesh(Points vertices, Faces triangles) {
  const int nv = static_cast<int>(vertices.rows());
  const int nf = static_cast<int>(triangles.rows());
  if (nv < 3) throw ValidationError("mesh has fewer than 3 vertices");

  Vec3 lo = vertices.colwise().minCoeff();
  Vec3 hi = vertices.colwise().maxCoeff();
  const double diag2 = (hi - lo).squaredNorm();
  const double min_area = kDegenerateAreaRatio * diag2;

  std::map<std::pair<int, int>, int> edge_use;
  for (int f = 0; f < nf; ++f) {
    const auto t = triangles.row(f);
    for (int e = 0; e < 3; ++e) {
      if (t[e] < 0 || t[e] >= nv)
        throw ValidationError("triangle " + std::to_string(f) + " references vertex " +
                              std::to_string(t[e]) + " out of range");
    }
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2])
      throw ValidationError("repeated vertex in triangle " + std::to_string(f));
    const double area =
        triangle_area(vertices.row(t[0]), vertices.row(t[1]), vertices.row(t[2]));
    if (!(area > min_area))
      throw ValidationError("degenerate triangle " + std::to_string(f) +
                            " (area " + std::to_string(area) + ")");
    for (int e = 0; e < 3; ++e) {
      const int a = t[e], b = t[(e + 1) % 3];
      const int uses = ++edge_use[{std::min(a, b), std::max(a, b)}];
      if (uses > 2)
        throw ValidationError("non-manifold edge (" + std::to_string(std::min(a, b)) + "," +
                              std::to_string(std::max(a, b)) + ") shared by more than 2 triangles");
    }
  }
  return TriangleMesh{std::move(vertices), std::move(triangles)};
}

std::vector<std::pair<int, int>> mesh_boundary_edges(const TriangleMesh& mesh) {
  std::map<std::pair<int, int>, int> edge_use;
  for (int f = 0; f < mesh.triangle_count(); ++f) {
    const auto t = mesh.triangles.row(f);
    for (int e = 0; e < 3; ++e) {
      const int a = t[e], b = t[(e + 1) % 3];
      ++edge_use[{std::min(a, b), std::max(a, b)}];
    }
  }
  std::vector<std::pair<int, int>> boundary;
  for (const auto& [edge, uses] : edge_use)
    if (uses == 1) boundary.push_back(edge);
  return boundary;
}

namespace {

// Pulls the next non-comment token stream line.
bool next_data_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    const auto pos = line.find_first_not_of(" \t\r\n");
    if (pos == std::string::npos) continue;
    if (line[pos] == '#') continue;
    return true;
  }
  return false;
}

}  // namespace

TriangleMesh load_off(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());

  std::string line;
  if (!next_data_line(in, line)) throw ParseError(path.string() + ": empty file");
  {
    std::istringstream ls(line);
    std::string magic;
    ls >> magic;
    if (magic != "OFF") throw ParseError(path.string() + ": missing OFF header");
  }
  if (!next_data_line(in, line)) throw ParseError(path.string() + ": missing count line");
  long nv = 0, nf = 0, ne = 0;
  {
    std::istringstream ls(line);
    if (!(ls >> nv >> nf >> ne) || nv < 0 || nf < 0)
      throw ParseError(path.string() + ": malformed count line '" + line + "'");
  }

  Points vertices(nv, 3);
  for (long i = 0; i < nv; ++i) {
    if (!next_data_line(in, line))
      throw ParseError(path.string() + ": expected " + std::to_string(nv) +
                       " vertices, file ends at " + std::to_string(i));
    std::istringstream ls(line);
    double x, y, z;
    if (!(ls >> x >> y >> z))
      throw ParseError(path.string() + ": malformed vertex line '" + line + "'");
    vertices.row(i) << x, y, z;
  }

  Faces triangles(nf, 3);
  for (long f = 0; f < nf; ++f) {
    if (!next_data_line(in, line))
      throw ParseError(path.string() + ": expected " + std::to_string(nf) +
                       " faces, file ends at " + std::to_string(f));
    std::istringstream ls(line);
    long k, a, b, c;
    if (!(ls >> k >> a >> b >> c) || k != 3)
      throw ParseError(path.string() + ": face " + std::to_string(f) +
                       " is not a triangle: '" + line + "'");
    triangles.row(f) << static_cast<int>(a), static_cast<int>(b), static_cast<int>(c);
  }

  return make_triangle_mesh(std::move(vertices), std::move(triangles));
}

void save_off(const TriangleMesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path.string());
  out << "OFF\n" << mesh.vertex_count() << ' ' << mesh.triangle_count() << " 0\n";
  char buf[96];
  for (int i = 0; i < mesh.vertex_count(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", mesh.vertices(i, 0),
                  mesh.vertices(i, 1), mesh.vertices(i, 2));
    out << buf;
  }
  for (int f = 0; f < mesh.triangle_count(); ++f)
    out << "3 " << mesh.triangles(f, 0) << ' ' << mesh.triangles(f, 1) << ' '
        << mesh.triangles(f, 2) << '\n';
  if (!out) throw ParseError("write failed for " + path.string());
}

}  // namespace lbspec
