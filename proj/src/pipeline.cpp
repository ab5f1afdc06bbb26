#include "lbspec/pipeline.hpp"

#include <algorithm>

namespace lbspec {

Spectrum solve_system(const FemSystem& system, const SpectrumConfig& cfg) {
  return solve_system(system, cfg, 0.0);
}

Spectrum solve_system(const FemSystem& system, const SpectrumConfig& cfg, double shift_scale) {
  if (cfg.k < 1) throw ValidationError("eigenvalue count must be >= 1");
  SolveOptions opts;
  opts.tol = cfg.tol;
  opts.seed = cfg.seed;
  opts.shift_scale = shift_scale;
  const int k = std::min(cfg.k, system.dim());
  Spectrum spec = smallest_eigenpairs(system.stiffness, system.mass, k, opts);
  if (spec.eigenvectors.size() && system.dim() != system.full_dim) {
    MatX full(system.full_dim, spec.count());
    for (int i = 0; i < spec.count(); ++i)
      full.col(i) = scatter_to_full(spec.eigenvectors.col(i), system.kept, system.full_dim);
    spec.eigenvectors = std::move(full);
  }
  return spec;
}

Spectrum compute_spectrum(const TriangleMesh& mesh, const SpectrumConfig& cfg) {
  if (cfg.bc == BoundaryCondition::dirichlet && is_closed(mesh))
    throw ValidationError("dirichlet condition requires a mesh with a boundary");
  // assemble_surface rejects bc=closed on an open mesh.
  const FemSystem system = assemble_surface(mesh, cfg.order, cfg.bc);
  const Vec3 extent = mesh.vertices.colwise().maxCoeff() - mesh.vertices.colwise().minCoeff();
  return solve_system(system, cfg, 1.0 / std::max(extent.squaredNorm(), 1e-300));
}

Spectrum compute_spectrum(const VoxelGrid& grid, const SpectrumConfig& cfg) {
  const FemSystem system = assemble_voxel(grid, cfg.order, cfg.bc);
  const Vec3 extent(grid.dims[0] * grid.spacing[0], grid.dims[1] * grid.spacing[1],
                    grid.dims[2] * grid.spacing[2]);
  return solve_system(system, cfg, 1.0 / std::max(extent.squaredNorm(), 1e-300));
}

}  // namespace lbspec
