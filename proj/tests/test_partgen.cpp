#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "lbspec/partgen.hpp"
#include "lbspec/rng.hpp"

using namespace lbspec;

TEST_CASE("icosphere: counts, radius, noise statistics") {
  const TriangleMesh ico = gen_sphere_mesh(12, NoiseModel::off(), 1);
  CHECK(ico.vertex_count() == 12);
  for (int i = 0; i < 12; ++i)
    CHECK(ico.vertices.row(i).norm() == doctest::Approx(1.0).epsilon(1e-12));

  for (int level = 1; level <= 3; ++level) {
    const int expect = 10 * (1 << (2 * level)) + 2;
    const TriangleMesh m = gen_sphere_mesh(expect, NoiseModel::off(), 1);
    CHECK(m.vertex_count() == expect);
    CHECK(is_closed(m));
  }

  // nearest level wins
  CHECK(gen_sphere_mesh(150, NoiseModel::off(), 1).vertex_count() == 162);
  CHECK(gen_sphere_mesh(500, NoiseModel::off(), 1).vertex_count() == 642);

  const double sigma = 0.05;
  const TriangleMesh noisy = gen_sphere_mesh(642, NoiseModel::isotropic(sigma), 9);
  double mean_radius = 0.0;
  for (int i = 0; i < noisy.vertex_count(); ++i) mean_radius += noisy.vertices.row(i).norm();
  mean_radius /= noisy.vertex_count();
  CHECK(std::abs(mean_radius - 1.0) < 3 * sigma / std::sqrt(noisy.vertex_count()));
}

TEST_CASE("barrel: radii, closedness, vertex-count randomization") {
  const TriangleMesh flat = gen_barrel_cylinder(0.0, NoiseModel::off(), 3);
  CHECK(is_closed(flat));
  CHECK(flat.vertex_count() >= 1995);
  CHECK(flat.vertex_count() <= 2005);
  for (int i = 0; i < flat.vertex_count(); ++i) {
    const double z = flat.vertices(i, 2);
    const double r = flat.vertices.row(i).head<2>().norm();
    if (r > 1e-9)  // skip cap centers
      CHECK(r == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(z >= -1e-12);
    CHECK(z <= 50.0 + 1e-12);
  }

  // delta = 10: mid-height radius is 10 + 0.05*10*sin(pi/2) = 10.5
  const TriangleMesh barrel = gen_barrel_cylinder(10.0, NoiseModel::off(), 3);
  double max_r = 0.0;
  for (int i = 0; i < barrel.vertex_count(); ++i) {
    if (std::abs(barrel.vertices(i, 2) - 25.0) < 1e-9)
      max_r = std::max(max_r, barrel.vertices.row(i).head<2>().norm());
  }
  CHECK(max_r == doctest::Approx(10.5).epsilon(1e-12));

  // different draws land in the advertised range and vary
  std::set<int> counts;
  for (std::uint64_t s = 0; s < 8; ++s) {
    const TriangleMesh m = gen_barrel_cylinder(1.0, NoiseModel::isotropic(0.05), s);
    CHECK(is_closed(m));
    CHECK(m.vertex_count() >= 1995);
    CHECK(m.vertex_count() <= 2005);
    counts.insert(m.vertex_count());
  }
  CHECK(counts.size() > 1);
}

TEST_CASE("generators are pure functions of the seed") {
  const TriangleMesh a = gen_barrel_cylinder(1.0, NoiseModel::isotropic(0.05), 42);
  const TriangleMesh b = gen_barrel_cylinder(1.0, NoiseModel::isotropic(0.05), 42);
  CHECK(a.vertices == b.vertices);
  CHECK(a.triangles == b.triangles);

  const VoxelGrid ga = gen_voxel_part(6.0, 25, 7);
  const VoxelGrid gb = gen_voxel_part(6.0, 25, 7);
  CHECK(ga.occupancy == gb.occupancy);

  const TriangleMesh sa = gen_sphere_mesh(162, NoiseModel::isotropic(0.02), 5);
  const TriangleMesh sb = gen_sphere_mesh(162, NoiseModel::isotropic(0.02), 5);
  CHECK(sa.vertices == sb.vertices);
}

TEST_CASE("correlated noise: isotropic limit, coincident points, cross-axis") {
  Points two(2, 3);
  two << 0, 0, 0, 0, 0, 0;  // coincident
  const int draws = 10000;
  double sxx = 0, sx = 0, sy = 0, sxy = 0, cross = 0;
  double syy = 0;
  for (int d = 0; d < draws; ++d) {
    const Points out = apply_correlated_noise(two, 0.05, 0.0, {2.6, 2.6, 16.7}, 1000 + d);
    const double ex0 = out(0, 0), ex1 = out(1, 0);
    sx += ex0;
    sy += ex1;
    sxx += ex0 * ex0;
    syy += ex1 * ex1;
    sxy += ex0 * ex1;
    cross += (out(0, 0)) * (out(0, 1));  // x vs y of the same point
  }
  const double vx = sxx / draws - (sx / draws) * (sx / draws);
  const double vy = syy / draws - (sy / draws) * (sy / draws);
  const double cxy = sxy / draws - (sx / draws) * (sy / draws);
  const double corr = cxy / std::sqrt(vx * vy);
  CHECK(corr > 0.99);  // coincident points share their per-axis noise
  CHECK(std::abs(cross / draws) < 4 * 0.05 * 0.05 / std::sqrt(draws));  // axes independent

  // sigma1 = 0 reduces to independent noise with variance sigma2^2
  Points grid(20, 3);
  Rng rng(2);
  for (int i = 0; i < 20; ++i)
    for (int c = 0; c < 3; ++c) grid(i, c) = 10.0 * rng.uniform();
  const double s2 = 0.05;
  double acc = 0.0, acc2 = 0.0;
  for (int d = 0; d < 4000; ++d) {
    const Points out = apply_correlated_noise(grid, 0.0, s2, {2.6, 2.6, 16.7}, 55 + d);
    const double e = out(3, 1) - grid(3, 1);
    acc += e;
    acc2 += e * e;
  }
  const double var = acc2 / 4000 - (acc / 4000) * (acc / 4000);
  CHECK(std::abs(var - s2 * s2) < 4 * s2 * s2 * std::sqrt(2.0 / 4000));
}

TEST_CASE("correlated noise sample covariance matches the target") {
  Points pts(20, 3);
  Rng rng(77);
  for (int i = 0; i < 20; ++i)
    for (int c = 0; c < 3; ++c) pts(i, c) = 8.0 * rng.uniform();
  const double s1 = 0.04, s2 = 0.03;
  const Vec3 range(2.6, 2.6, 16.7);

  const int draws = 10000;
  MatX sum = MatX::Zero(20, 3), sumsq = MatX::Zero(20, 3);
  MatX cov01 = MatX::Zero(20, 20);  // axis-0 covariance accumulator
  std::vector<Points> noise(draws, Points(20, 3));
  for (int d = 0; d < draws; ++d)
    noise[d] = apply_correlated_noise(pts, s1, s2, range, 9000 + d) - pts;
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 20; ++j) {
      double acc = 0;
      for (int d = 0; d < draws; ++d) acc += noise[d](i, 0) * noise[d](j, 0);
      cov01(i, j) = acc / draws;
    }
  const double diag = s1 * s1 + s2 * s2;
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 20; ++j) {
      const double target =
          i == j ? diag : s1 * s1 * std::exp(-std::abs(pts(i, 0) - pts(j, 0)) / range[0]);
      // se of a covariance estimate ~ sqrt((cii*cjj + cij^2)/draws)
      const double se = std::sqrt((diag * diag + target * target) / draws);
      CHECK(std::abs(cov01(i, j) - target) < 4 * se);
    }
}

TEST_CASE("open variants: caps, bottoms, and failure modes") {
  const TriangleMesh sphere = gen_sphere_mesh(642, NoiseModel::off(), 3);
  const TriangleMesh capped = remove_polar_cap(sphere, 10.0);
  const auto boundary = mesh_boundary_edges(capped);
  CHECK(!boundary.empty());

  // one boundary loop: every boundary vertex has exactly two boundary edges
  std::map<int, int> degree;
  for (const auto& [a, b] : boundary) {
    degree[a]++;
    degree[b]++;
  }
  for (const auto& [v, d] : degree) CHECK(d == 2);
  // connected loop: walk it
  std::multimap<int, int> adj;
  for (const auto& [a, b] : boundary) {
    adj.emplace(a, b);
    adj.emplace(b, a);
  }
  std::set<int> visited;
  std::vector<int> stack{boundary.front().first};
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    if (!visited.insert(v).second) continue;
    auto [lo, hi] = adj.equal_range(v);
    for (auto it = lo; it != hi; ++it) stack.push_back(it->second);
  }
  CHECK(visited.size() == degree.size());

  CHECK_THROWS_WITH_AS(remove_polar_cap(sphere, 0.0), "hole spec removed no triangles",
                       ValidationError);

  // bottom removal of a barrel: boundary edge count equals the rim segments
  const TriangleMesh barrel = gen_barrel_cylinder(0.0, NoiseModel::off(), 5);
  const TriangleMesh open_barrel = remove_bottom(barrel, 0.3);
  CHECK(mesh_boundary_edges(open_barrel).size() == 61);
}

TEST_CASE("voxel part: hole geometry, eccentricity, noise flips") {
  const VoxelGrid nominal = gen_voxel_part(8.0, 0, 1);
  CHECK(nominal.dims == std::array<int, 3>{20, 20, 10});

  // circular hole: x/y symmetric occupancy
  for (int iz = 0; iz < 10; ++iz)
    for (int iy = 0; iy < 20; ++iy)
      for (int ix = 0; ix < 20; ++ix)
        CHECK(nominal.active(ix, iy, iz) == nominal.active(iy, ix, iz));
  CHECK(ellipse_eccentricity(8.0, 8.0) == 0.0);

  // every z-layer identical (through-hole)
  for (int iz = 1; iz < 10; ++iz)
    for (int iy = 0; iy < 20; ++iy)
      for (int ix = 0; ix < 20; ++ix)
        CHECK(nominal.active(ix, iy, iz) == nominal.active(ix, iy, 0));

  CHECK(ellipse_eccentricity(6.0, 8.0) == doctest::Approx(0.6614).epsilon(1e-3));

  // flips stay within [2, 2*max_noise] and touch only boundary cells
  const VoxelGrid nominal6 = gen_voxel_part(6.0, 0, 1);
  for (std::uint64_t seed : {11u, 12u, 13u}) {
    const VoxelGrid noisy = gen_voxel_part(6.0, 25, seed);
    int flips = 0;
    for (std::size_t i = 0; i < noisy.occupancy.size(); ++i)
      flips += noisy.occupancy[i] != nominal6.occupancy[i];
    CHECK(flips >= 2);
    CHECK(flips <= 50);
  }

  CHECK_THROWS_AS(gen_voxel_part(10.5, 0, 1), ValidationError);
  CHECK_THROWS_AS(gen_voxel_part(0.0, 0, 1), ValidationError);
}
