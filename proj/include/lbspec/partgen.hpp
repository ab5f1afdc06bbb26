#pragma once

#include <cstdint>
#include <functional>

#include "lbspec/mesh.hpp"
#include "lbspec/types.hpp"
#include "lbspec/voxel.hpp"

namespace lbspec {

// Measurement/manufacturing noise attached to a synthetic part.
struct NoiseModel {
  enum class Kind { none, isotropic, correlated, voxel_flip };
  Kind kind = Kind::none;
  double sigma = 0.05;               // isotropic std dev per coordinate
  double sigma1 = 0.0;               // correlated component
  double sigma2 = 0.05;              // independent component
  Vec3 corr_range{2.6, 2.6, 16.7};   // correlation ranges r_x, r_y, r_z
  int max_noise = 25;                // voxel status flips, upper bound

  static NoiseModel off() { return {}; }
  static NoiseModel isotropic(double sigma) {
    NoiseModel n;
    n.kind = Kind::isotropic;
    n.sigma = sigma;
    return n;
  }
  static NoiseModel correlated(double sigma1, double sigma2, const Vec3& range) {
    NoiseModel n;
    n.kind = Kind::correlated;
    n.sigma1 = sigma1;
    n.sigma2 = sigma2;
    n.corr_range = range;
    return n;
  }
  static NoiseModel voxel_flip(int max_noise) {
    NoiseModel n;
    n.kind = Kind::voxel_flip;
    n.max_noise = max_noise;
    return n;
  }
};

// Icosphere with the subdivision level whose vertex count (10*4^level + 2)
// is closest to n_target, vertices projected to the unit sphere, then noise.
TriangleMesh gen_sphere_mesh(int n_target, const NoiseModel& noise, std::uint64_t seed);

// Closed cylinder (side plus caps), nominal radius 10 and height 50, with
// the radius at height h deformed to 10 + 0.05*delta*sin(h*pi/50), then
// coordinate noise, then random vertex deletions with one-ring
// retriangulation down to a count drawn uniformly from {1995..2005}.
TriangleMesh gen_barrel_cylinder(double delta, const NoiseModel& noise, std::uint64_t seed);

// Per-axis displacement with covariance sigma1^2 exp(-|p_ik - p_jk| / r_k)
// off-diagonal and sigma1^2 + sigma2^2 on the diagonal; axes independent.
// Dense factorization, guarded to 5000 points.
Points apply_correlated_noise(const Points& points, double sigma1, double sigma2,
                              const Vec3& corr_range, std::uint64_t seed);

// Deletes the triangles whose centroid satisfies the predicate; the result
// must be open and stay connected.
TriangleMesh gen_open_variant(const TriangleMesh& mesh,
                              const std::function<bool(const Vec3&)>& hole_predicate);

// Convenience predicates for the open variants used in the experiments.
TriangleMesh remove_polar_cap(const TriangleMesh& mesh, double polar_angle_deg);
TriangleMesh remove_bottom(const TriangleMesh& mesh, double z_cut);

// 20x20x10 voxel block with a through-hole of elliptical cross-section
// (semi-axes rx and 8 voxels); noise deactivates m1 ~ U{1..max_noise}
// random active boundary voxels and activates m2 ~ U{1..max_noise} random
// inactive boundary voxels (max_noise = 0 disables noise).
VoxelGrid gen_voxel_part(double rx, int max_noise, std::uint64_t seed);

// Eccentricity of the ellipse with semi-axes rx and ry.
double ellipse_eccentricity(double rx, double ry);

}  // namespace lbspec
