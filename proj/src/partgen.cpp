#include "lbspec/partgen.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "lbspec/rng.hpp"

namespace lbspec {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

void add_isotropic_noise(Points& v, double sigma, Rng& rng) {
  for (int i = 0; i < v.rows(); ++i)
    for (int c = 0; c < 3; ++c) v(i, c) += sigma * rng.normal();
}

void apply_noise(Points& v, const NoiseModel& noise, std::uint64_t seed) {
  Rng rng(mix_seed(seed, 0x401e));
  switch (noise.kind) {
    case NoiseModel::Kind::none:
      break;
    case NoiseModel::Kind::isotropic:
      add_isotropic_noise(v, noise.sigma, rng);
      break;
    case NoiseModel::Kind::correlated:
      v = apply_correlated_noise(v, noise.sigma1, noise.sigma2, noise.corr_range,
                                 mix_seed(seed, 0xc0bb));
      break;
    case NoiseModel::Kind::voxel_flip:
      throw ValidationError("voxel-flip noise applies to voxel grids, not meshes");
  }
}

}  // namespace

TriangleMesh gen_sphere_mesh(int n_target, const NoiseModel& noise, std::uint64_t seed) {
  if (n_target < 12) throw ValidationError("sphere mesh needs at least 12 vertices");

  // Subdivision level with vertex count closest to the target.
  int level = 0;
  long best_diff = std::labs(12L - n_target);
  for (int l = 1; l <= 8; ++l) {
    const long count = 10L * (1L << (2 * l)) + 2;
    const long diff = std::labs(count - n_target);
    if (diff < best_diff) {
      best_diff = diff;
      level = l;
    }
  }

  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  Points v(12, 3);
  v << -1, phi, 0, 1, phi, 0, -1, -phi, 0, 1, -phi, 0,
       0, -1, phi, 0, 1, phi, 0, -1, -phi, 0, 1, -phi,
       phi, 0, -1, phi, 0, 1, -phi, 0, -1, -phi, 0, 1;
  Faces f(20, 3);
  f << 0, 11, 5, 0, 5, 1, 0, 1, 7, 0, 7, 10, 0, 10, 11,
       1, 5, 9, 5, 11, 4, 11, 10, 2, 10, 7, 6, 7, 1, 8,
       3, 9, 4, 3, 4, 2, 3, 2, 6, 3, 6, 8, 3, 8, 9,
       4, 9, 5, 2, 4, 11, 6, 2, 10, 8, 6, 7, 9, 8, 1;
  for (int i = 0; i < v.rows(); ++i) v.row(i).normalize();

  for (int l = 0; l < level; ++l) {
    std::map<std::pair<int, int>, int> midpoint;
    std::vector<Vec3> verts(v.rows());
    for (int i = 0; i < v.rows(); ++i) verts[i] = v.row(i);
    const auto mid = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      Vec3 m = (verts[a] + verts[b]).normalized();
      verts.push_back(m);
      const int id = static_cast<int>(verts.size()) - 1;
      midpoint.emplace(key, id);
      return id;
    };
    Faces nf(f.rows() * 4, 3);
    for (int t = 0; t < f.rows(); ++t) {
      const int a = f(t, 0), b = f(t, 1), c = f(t, 2);
      const int ab = mid(a, b), bc = mid(b, c), ca = mid(c, a);
      nf.row(4 * t + 0) << a, ab, ca;
      nf.row(4 * t + 1) << b, bc, ab;
      nf.row(4 * t + 2) << c, ca, bc;
      nf.row(4 * t + 3) << ab, bc, ca;
    }
    v.resize(static_cast<int>(verts.size()), 3);
    for (int i = 0; i < v.rows(); ++i) v.row(i) = verts[i];
    f = std::move(nf);
  }

  apply_noise(v, noise, seed);
  return make_triangle_mesh(std::move(v), std::move(f));
}

Points apply_correlated_noise(const Points& points, double sigma1, double sigma2,
                              const Vec3& corr_range, std::uint64_t seed) {
  const int n = static_cast<int>(points.rows());
  if (n > 5000) throw ValidationError("correlated noise guarded to 5000 points");
  if (sigma1 < 0.0 || sigma2 < 0.0) throw ValidationError("noise magnitudes must be >= 0");

  Rng rng(mix_seed(seed, 0xc022));
  Points out = points;
  const double diag = sigma1 * sigma1 + sigma2 * sigma2;
  MatX cov(n, n);
  for (int axis = 0; axis < 3; ++axis) {
    const double range = corr_range[axis];
    for (int i = 0; i < n; ++i) {
      cov(i, i) = diag;
      for (int j = i + 1; j < n; ++j) {
        const double c =
            sigma1 * sigma1 * std::exp(-std::abs(points(i, axis) - points(j, axis)) / range);
        cov(i, j) = cov(j, i) = c;
      }
    }
    Eigen::LLT<MatX> llt;
    double jitter = 0.0;
    for (int attempt = 0;; ++attempt) {
      llt.compute(jitter == 0.0 ? cov : MatX(cov + jitter * MatX::Identity(n, n)));
      if (llt.info() == Eigen::Success) break;
      if (attempt >= 4) throw SolverError("noise covariance not factorizable after jitter");
      jitter = jitter == 0.0 ? 1e-14 * diag : jitter * 100.0;
      if (jitter > 1e-10 * diag)
        throw SolverError("noise covariance not factorizable after jitter");
    }
    VecX z(n);
    for (int i = 0; i < n; ++i) z[i] = rng.normal();
    out.col(axis) += llt.matrixL() * z;
  }
  return out;
}

namespace {

// Ordered one-ring of vertex v, following triangle winding. Returns an
// empty list when the ring is not a simple closed cycle.
std::vector<int> ordered_one_ring(const std::vector<std::array<int, 3>>& tris,
                                  const std::vector<int>& incident, int v) {
  std::map<int, int> next;
  for (int t : incident) {
    const auto& tri = tris[t];
    int a = -1, b = -1;
    for (int e = 0; e < 3; ++e)
      if (tri[e] == v) {
        a = tri[(e + 1) % 3];
        b = tri[(e + 2) % 3];
        break;
      }
    if (a < 0 || next.count(a)) return {};
    next[a] = b;
  }
  std::vector<int> ring;
  ring.reserve(next.size());
  int start = next.begin()->first;
  int cur = start;
  for (std::size_t i = 0; i < next.size(); ++i) {
    ring.push_back(cur);
    auto it = next.find(cur);
    if (it == next.end()) return {};
    cur = it->second;
  }
  if (cur != start) return {};
  return ring;
}

}  // namespace

TriangleMesh gen_barrel_cylinder(double delta, const NoiseModel& noise, std::uint64_t seed) {
  if (delta < 0.0) throw ValidationError("barrel defect amplitude must be >= 0");
  const double radius = 10.0, height = 50.0;
  const int segments = 61;  // around
  const int rings = 33;     // along the axis, ring 16 exactly at mid-height

  Points v(rings * segments + 2, 3);
  for (int j = 0; j < rings; ++j) {
    const double h = height * j / (rings - 1);
    const double r = radius + 0.05 * delta * std::sin(h * kPi / height);
    for (int s = 0; s < segments; ++s) {
      const double a = 2.0 * kPi * s / segments;
      v.row(j * segments + s) << r * std::cos(a), r * std::sin(a), h;
    }
  }
  const int bottom_center = rings * segments;
  const int top_center = bottom_center + 1;
  v.row(bottom_center) << 0.0, 0.0, 0.0;
  v.row(top_center) << 0.0, 0.0, height;

  std::vector<std::array<int, 3>> tris;
  tris.reserve(2 * (rings - 1) * segments + 2 * segments);
  const auto ring_vertex = [segments](int j, int s) { return j * segments + (s % segments); };
  for (int j = 0; j + 1 < rings; ++j)
    for (int s = 0; s < segments; ++s) {
      tris.push_back({ring_vertex(j, s), ring_vertex(j, s + 1), ring_vertex(j + 1, s + 1)});
      tris.push_back({ring_vertex(j, s), ring_vertex(j + 1, s + 1), ring_vertex(j + 1, s)});
    }
  for (int s = 0; s < segments; ++s) {
    tris.push_back({bottom_center, ring_vertex(0, s + 1), ring_vertex(0, s)});
    tris.push_back({top_center, ring_vertex(rings - 1, s), ring_vertex(rings - 1, s + 1)});
  }

  apply_noise(v, noise, mix_seed(seed, 1));

  // Random deletions with one-ring fan retriangulation model meshes with
  // non-corresponding point counts. Candidates stay away from the caps and
  // from already touched neighborhoods.
  Rng rng(mix_seed(seed, 2));
  const int target = static_cast<int>(rng.uniform_int(1995, 2005));
  int to_delete = static_cast<int>(v.rows()) - target;

  std::vector<char> deleted(v.rows(), 0), blocked(v.rows(), 0);
  std::vector<int> candidates;
  for (int j = 2; j <= rings - 3; ++j)
    for (int s = 0; s < segments; ++s) candidates.push_back(ring_vertex(j, s));

  int guard = 0;
  while (to_delete > 0 && guard++ < 10000) {
    const int pick = candidates[rng.uniform_below(candidates.size())];
    if (deleted[pick] || blocked[pick]) continue;

    std::vector<int> incident;
    for (int t = 0; t < static_cast<int>(tris.size()); ++t)
      for (int e = 0; e < 3; ++e)
        if (tris[t][e] == pick) {
          incident.push_back(t);
          break;
        }
    const std::vector<int> ring = ordered_one_ring(tris, incident, pick);
    if (ring.size() < 3) {
      blocked[pick] = 1;
      continue;
    }

    std::vector<std::array<int, 3>> kept;
    kept.reserve(tris.size());
    std::set<int> drop(incident.begin(), incident.end());
    for (int t = 0; t < static_cast<int>(tris.size()); ++t)
      if (!drop.count(t)) kept.push_back(tris[t]);
    for (std::size_t i = 1; i + 1 < ring.size(); ++i)
      kept.push_back({ring[0], ring[i], ring[i + 1]});
    tris = std::move(kept);

    deleted[pick] = 1;
    for (int r : ring) blocked[r] = 1;
    --to_delete;
  }
  if (to_delete > 0) throw SolverError("vertex deletion could not reach the target mesh size");

  // Compact vertex numbering.
  std::vector<int> remap(v.rows(), -1);
  int live = 0;
  for (int i = 0; i < v.rows(); ++i)
    if (!deleted[i]) remap[i] = live++;
  Points nv(live, 3);
  for (int i = 0; i < v.rows(); ++i)
    if (remap[i] >= 0) nv.row(remap[i]) = v.row(i);
  Faces nf(static_cast<int>(tris.size()), 3);
  for (int t = 0; t < nf.rows(); ++t)
    nf.row(t) << remap[tris[t][0]], remap[tris[t][1]], remap[tris[t][2]];

  return make_triangle_mesh(std::move(nv), std::move(nf));
}

TriangleMesh gen_open_variant(const TriangleMesh& mesh,
                              const std::function<bool(const Vec3&)>& hole_predicate) {
  std::vector<int> kept_tris;
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const auto tr = mesh.triangles.row(t);
    const Vec3 centroid = (Vec3(mesh.vertices.row(tr[0])) + Vec3(mesh.vertices.row(tr[1])) +
                           Vec3(mesh.vertices.row(tr[2]))) /
                          3.0;
    if (!hole_predicate(centroid)) kept_tris.push_back(t);
  }
  if (static_cast<int>(kept_tris.size()) == mesh.triangle_count())
    throw ValidationError("hole spec removed no triangles");
  if (kept_tris.empty()) throw ValidationError("hole spec removed every triangle");

  // Connectivity over edge-sharing triangles (union-find).
  std::vector<int> parent(kept_tris.size());
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
  const std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::map<std::pair<int, int>, int> edge_owner;
  for (std::size_t i = 0; i < kept_tris.size(); ++i) {
    const auto tr = mesh.triangles.row(kept_tris[i]);
    for (int e = 0; e < 3; ++e) {
      const auto key = std::minmax(tr[e], tr[(e + 1) % 3]);
      auto [it, inserted] = edge_owner.emplace(key, static_cast<int>(i));
      if (!inserted) parent[find(static_cast<int>(i))] = find(it->second);
    }
  }
  const int root = find(0);
  for (std::size_t i = 1; i < kept_tris.size(); ++i)
    if (find(static_cast<int>(i)) != root)
      throw ValidationError("hole spec disconnects the mesh");

  // Drop now-unreferenced vertices.
  std::vector<int> remap(mesh.vertex_count(), -1);
  int live = 0;
  for (int t : kept_tris)
    for (int e = 0; e < 3; ++e)
      if (remap[mesh.triangles(t, e)] < 0) remap[mesh.triangles(t, e)] = live++;
  Points nv(live, 3);
  for (int i = 0; i < mesh.vertex_count(); ++i)
    if (remap[i] >= 0) nv.row(remap[i]) = mesh.vertices.row(i);
  Faces nf(static_cast<int>(kept_tris.size()), 3);
  for (std::size_t i = 0; i < kept_tris.size(); ++i)
    nf.row(static_cast<int>(i)) << remap[mesh.triangles(kept_tris[i], 0)],
        remap[mesh.triangles(kept_tris[i], 1)], remap[mesh.triangles(kept_tris[i], 2)];

  TriangleMesh out = make_triangle_mesh(std::move(nv), std::move(nf));
  if (is_closed(out)) throw ValidationError("hole spec left the mesh closed");
  return out;
}

TriangleMesh remove_polar_cap(const TriangleMesh& mesh, double polar_angle_deg) {
  const double cos_cut = std::cos(polar_angle_deg * kPi / 180.0);
  return gen_open_variant(mesh, [cos_cut](const Vec3& c) {
    const double r = c.norm();
    return r > 0.0 && c[2] / r > cos_cut;
  });
}

TriangleMesh remove_bottom(const TriangleMesh& mesh, double z_cut) {
  return gen_open_variant(mesh, [z_cut](const Vec3& c) { return c[2] < z_cut; });
}

double ellipse_eccentricity(double rx, double ry) {
  const double a = std::max(rx, ry), b = std::min(rx, ry);
  return std::sqrt(1.0 - (b * b) / (a * a));
}

VoxelGrid gen_voxel_part(double rx, int max_noise, std::uint64_t seed) {
  if (!(rx > 0.0) || rx >= 10.0)
    throw ValidationError("hole semi-axis must lie in (0, 10) voxels; the hole may not exceed the block");
  const int nx = 20, ny = 20, nz = 10;
  const double ry = 8.0;
  const double cx = nx / 2.0, cy = ny / 2.0;

  std::vector<std::uint8_t> occ(static_cast<std::size_t>(nx) * ny * nz, 0);
  VoxelGrid grid = make_voxel_grid({nx, ny, nz}, Vec3(1.0, 1.0, 1.0), std::move(occ));
  for (int iz = 0; iz < nz; ++iz)
    for (int iy = 0; iy < ny; ++iy)
      for (int ix = 0; ix < nx; ++ix) {
        const double dx = (ix + 0.5 - cx) / rx;
        const double dy = (iy + 0.5 - cy) / ry;
        grid.occupancy[grid.cell_index(ix, iy, iz)] = (dx * dx + dy * dy < 1.0) ? 0 : 1;
      }

  if (max_noise > 0) {
    std::vector<std::size_t> active_boundary, inactive_boundary;
    const int face[6][3] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
    for (int iz = 0; iz < nz; ++iz)
      for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nx; ++ix) {
          bool touches_active = false, touches_nonactive = false;
          for (const auto& d : face) {
            if (grid.active(ix + d[0], iy + d[1], iz + d[2]))
              touches_active = true;
            else
              touches_nonactive = true;
          }
          const std::size_t idx = grid.cell_index(ix, iy, iz);
          if (grid.occupancy[idx] && touches_nonactive) active_boundary.push_back(idx);
          if (!grid.occupancy[idx] && touches_active) inactive_boundary.push_back(idx);
        }

    Rng rng(mix_seed(seed, 0xf11b));
    const auto flip_some = [&](std::vector<std::size_t>& pool, std::uint8_t new_state) {
      const long long m = rng.uniform_int(1, max_noise);
      for (long long i = 0; i < m && !pool.empty(); ++i) {
        const std::size_t pick = rng.uniform_below(pool.size());
        grid.occupancy[pool[pick]] = new_state;
        pool[pick] = pool.back();
        pool.pop_back();
      }
    };
    flip_some(active_boundary, 0);
    flip_some(inactive_boundary, 1);
  }
  return grid;
}

}  // namespace lbspec
