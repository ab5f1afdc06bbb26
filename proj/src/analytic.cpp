#include "lbspec/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace lbspec {

AnalyticShape AnalyticShape::unit_sphere() {
  return {Kind::unit_sphere_surface, {1.0, 1.0, 1.0}, BoundaryCondition::closed};
}
AnalyticShape AnalyticShape::ball(double radius) {
  return {Kind::solid_ball, {radius, 0.0, 0.0}, BoundaryCondition::dirichlet};
}
AnalyticShape AnalyticShape::cube(double edge) {
  return {Kind::cube, {edge, 0.0, 0.0}, BoundaryCondition::dirichlet};
}
AnalyticShape AnalyticShape::cuboid(double a, double b, double c) {
  return {Kind::cuboid, {a, b, c}, BoundaryCondition::dirichlet};
}
AnalyticShape AnalyticShape::cylinder(double radius, double height) {
  return {Kind::solid_cylinder, {radius, height, 0.0}, BoundaryCondition::dirichlet};
}

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

// Zeros of f on (0, inf) by sign-change scanning and bisection.
std::vector<double> scan_zeros(const std::function<double(double)>& f, double x_start,
                               int count, double step) {
  std::vector<double> zeros;
  double x0 = x_start;
  double f0 = f(x0);
  while (static_cast<int>(zeros.size()) < count) {
    const double x1 = x0 + step;
    const double f1 = f(x1);
    if (f0 == 0.0) {
      zeros.push_back(x0);
    } else if (f0 * f1 < 0.0) {
      double lo = x0, hi = x1, flo = f0;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) {
          lo = hi = mid;
          break;
        }
        if (flo * fm < 0.0) {
          hi = mid;
        } else {
          lo = mid;
          flo = fm;
        }
        if (hi - lo < 1e-12 * hi) break;
      }
      zeros.push_back(0.5 * (lo + hi));
    }
    x0 = x1;
    f0 = f1;
  }
  return zeros;
}

// Collects shape eigenvalues below a growing cutoff until k are available.
VecX take_smallest(const std::function<void(double, std::vector<double>&)>& collect, int k) {
  double cutoff = 10.0;
  std::vector<double> values;
  for (int rounds = 0; rounds < 64; ++rounds) {
    values.clear();
    collect(cutoff, values);
    if (static_cast<int>(values.size()) >= k) break;
    cutoff *= 2.0;
  }
  if (static_cast<int>(values.size()) < k)
    throw SolverError("analytic spectrum enumeration did not reach k values");
  std::sort(values.begin(), values.end());
  values.resize(k);
  return Eigen::Map<VecX>(values.data(), k);
}

}  // namespace

std::vector<double> bessel_j_zeros(int m, int count) {
  const auto f = [m](double x) { return std::cyl_bessel_j(static_cast<double>(m), x); };
  // First zero of J_m lies above m; start the scan safely below it.
  const double start = std::max(0.5, m + 0.5);
  return scan_zeros(f, start, count, 0.05 * kPi);
}

std::vector<double> spherical_bessel_zeros(int l, int count) {
  if (l == 0) {
    std::vector<double> zeros(count);
    for (int n = 1; n <= count; ++n) zeros[n - 1] = n * kPi;
    return zeros;
  }
  const auto f = [l](double x) { return std::sph_bessel(static_cast<unsigned>(l), x); };
  const double start = std::max(0.5, l + 0.5);
  return scan_zeros(f, start, count, 0.05 * kPi);
}

VecX analytic_spectrum(const AnalyticShape& shape, int k) {
  if (k < 1) throw ValidationError("eigenvalue count must be >= 1");

  switch (shape.kind) {
    case AnalyticShape::Kind::unit_sphere_surface: {
      if (shape.bc == BoundaryCondition::dirichlet)
        throw ValidationError("unsupported shape/bc: sphere surface is closed");
      VecX out(k);
      int i = 0;
      for (int l = 0; i < k; ++l)
        for (int mult = 0; mult < 2 * l + 1 && i < k; ++mult)
          out[i++] = static_cast<double>(l) * (l + 1);
      return out;
    }
    case AnalyticShape::Kind::cube:
    case AnalyticShape::Kind::cuboid: {
      if (shape.bc != BoundaryCondition::dirichlet)
        throw ValidationError("unsupported shape/bc: analytic box spectra are Dirichlet");
      const double a = shape.dims[0];
      const double b = shape.kind == AnalyticShape::Kind::cube ? a : shape.dims[1];
      const double c = shape.kind == AnalyticShape::Kind::cube ? a : shape.dims[2];
      if (!(a > 0.0 && b > 0.0 && c > 0.0)) throw ValidationError("box dimensions must be positive");
      return take_smallest(
          [&](double cutoff, std::vector<double>& values) {
            const int imax = static_cast<int>(std::ceil(a * std::sqrt(cutoff) / kPi)) + 1;
            const int jmax = static_cast<int>(std::ceil(b * std::sqrt(cutoff) / kPi)) + 1;
            const int kmax = static_cast<int>(std::ceil(c * std::sqrt(cutoff) / kPi)) + 1;
            for (int i = 1; i <= imax; ++i)
              for (int j = 1; j <= jmax; ++j)
                for (int l = 1; l <= kmax; ++l) {
                  const double lam =
                      kPi * kPi * (i * i / (a * a) + j * j / (b * b) + l * l / (c * c));
                  if (lam <= cutoff) values.push_back(lam);
                }
          },
          k);
    }
    case AnalyticShape::Kind::solid_ball: {
      if (shape.bc != BoundaryCondition::dirichlet)
        throw ValidationError("unsupported shape/bc: analytic ball spectrum is Dirichlet");
      const double r = shape.dims[0];
      if (!(r > 0.0)) throw ValidationError("ball radius must be positive");
      return take_smallest(
          [&](double cutoff, std::vector<double>& values) {
            const double zmax = r * std::sqrt(cutoff);
            // j_{l,1} > l, so degrees above zmax contribute nothing.
            for (int l = 0; l <= static_cast<int>(zmax) + 1; ++l) {
              const int per_degree = std::max(1, static_cast<int>(zmax / kPi) + 1);
              for (double z : spherical_bessel_zeros(l, per_degree)) {
                if (z > zmax) break;
                const double lam = (z / r) * (z / r);
                for (int mult = 0; mult < 2 * l + 1; ++mult) values.push_back(lam);
              }
            }
          },
          k);
    }
    case AnalyticShape::Kind::solid_cylinder: {
      if (shape.bc != BoundaryCondition::dirichlet)
        throw ValidationError("unsupported shape/bc: analytic cylinder spectrum is Dirichlet");
      const double r = shape.dims[0], h = shape.dims[1];
      if (!(r > 0.0 && h > 0.0)) throw ValidationError("cylinder dimensions must be positive");
      return take_smallest(
          [&](double cutoff, std::vector<double>& values) {
            const double amax = r * std::sqrt(cutoff);
            for (int m = 0; m <= static_cast<int>(amax) + 1; ++m) {
              const int per_order = std::max(1, static_cast<int>(amax / kPi) + 1);
              for (double alpha : bessel_j_zeros(m, per_order)) {
                if (alpha > amax) break;
                const double radial = (alpha / r) * (alpha / r);
                for (int p = 1;; ++p) {
                  const double lam = radial + (p * kPi / h) * (p * kPi / h);
                  if (lam > cutoff) break;
                  values.push_back(lam);
                  if (m >= 1) values.push_back(lam);  // +-m degeneracy
                }
              }
            }
          },
          k);
    }
  }
  throw ValidationError("unsupported analytic shape");
}

}  // namespace lbspec
