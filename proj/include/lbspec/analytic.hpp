#pragma once

#include <vector>

#include "lbspec/types.hpp"

namespace lbspec {

// Shapes with known closed-form Laplace-Beltrami spectra, used as accuracy
// references for the FEM estimates.
struct AnalyticShape {
  enum class Kind { unit_sphere_surface, solid_ball, cube, cuboid, solid_cylinder };
  Kind kind = Kind::unit_sphere_surface;
  // solid_ball: dims[0] = R; cube: dims[0] = L; cuboid: dims = (a, b, c);
  // solid_cylinder: dims[0] = R, dims[1] = H.
  Vec3 dims{1.0, 1.0, 1.0};
  BoundaryCondition bc = BoundaryCondition::closed;

  static AnalyticShape unit_sphere();
  static AnalyticShape ball(double radius);
  static AnalyticShape cube(double edge);
  static AnalyticShape cuboid(double a, double b, double c);
  static AnalyticShape cylinder(double radius, double height);
};

// First k eigenvalues, multiplicities expanded, ascending:
//   sphere surface:       l (l + 1), multiplicity 2l + 1
//   cube/cuboid Dirichlet: pi^2 (i^2/a^2 + j^2/b^2 + k^2/c^2), i,j,k >= 1
//   ball Dirichlet:       (j_{l,n} / R)^2, multiplicity 2l + 1
//   cylinder Dirichlet:   (a_{m,n} / R)^2 + (p pi / H)^2, m>=1 doubled
VecX analytic_spectrum(const AnalyticShape& shape, int k);

// First `count` positive zeros of the Bessel function J_m (bracketing scan
// plus bisection to 1e-12 relative).
std::vector<double> bessel_j_zeros(int m, int count);

// First `count` positive zeros of the spherical Bessel function j_l.
std::vector<double> spherical_bessel_zeros(int l, int count);

}  // namespace lbspec
