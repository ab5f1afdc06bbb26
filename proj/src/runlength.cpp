#include "lbspec/runlength.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "lbspec/parallel.hpp"
#include "lbspec/rng.hpp"

namespace lbspec {

std::string Scenario::name() const {
  std::ostringstream s;
  switch (family) {
    case Family::sphere: s << "sphere-n" << sphere_vertices; break;
    case Family::barrel: s << "barrel-delta" << delta; break;
    case Family::open_barrel: s << "open-barrel-delta" << delta; break;
    case Family::voxel_hole: s << "voxel-hole-rx" << rx << "-noise" << max_noise; break;
  }
  s << '-' << to_string(order);
  return s.str();
}

VecX scenario_spectrum(const Scenario& scenario, bool defective, std::uint64_t part_seed) {
  SpectrumConfig cfg;
  cfg.order = scenario.order;
  cfg.bc = scenario.boundary_condition();
  cfg.k = scenario.p;
  cfg.tol = scenario.tol;

  Spectrum spec;
  switch (scenario.family) {
    case Scenario::Family::sphere: {
      const TriangleMesh mesh =
          gen_sphere_mesh(scenario.sphere_vertices, scenario.noise, part_seed);
      spec = compute_spectrum(mesh, cfg);
      break;
    }
    case Scenario::Family::barrel: {
      const TriangleMesh mesh =
          gen_barrel_cylinder(defective ? scenario.delta : 0.0, scenario.noise, part_seed);
      spec = compute_spectrum(mesh, cfg);
      break;
    }
    case Scenario::Family::open_barrel: {
      const TriangleMesh closed_mesh =
          gen_barrel_cylinder(defective ? scenario.delta : 0.0, scenario.noise, part_seed);
      // Bottom cap removed: the fan triangles sit below the first ring.
      const TriangleMesh open_mesh = remove_bottom(closed_mesh, 0.3);
      spec = compute_spectrum(open_mesh, cfg);
      break;
    }
    case Scenario::Family::voxel_hole: {
      const VoxelGrid grid =
          gen_voxel_part(defective ? scenario.rx : 8.0, scenario.max_noise, part_seed);
      spec = compute_spectrum(grid, cfg);
      break;
    }
  }
  if (spec.count() < scenario.p)
    throw SolverError("scenario system too small for " + std::to_string(scenario.p) +
                      " eigenvalues");
  return spec.eigenvalues.head(scenario.p);
}

RunLengthResult run_length_simulation(const Scenario& scenario, const ChartParams& params,
                                      int m0, int reps, std::uint64_t seed, int step_cap) {
  if (reps < 1) throw ValidationError("replication count must be >= 1");
  if (m0 < 1) throw ValidationError("baseline size must be >= 1");

  std::vector<int> run_length(reps, 0);
  std::vector<char> censored(reps, 0);

  // Warm the threshold calibration on this thread so workers share the
  // cached value instead of racing to compute it.
  if (params.calibrate_arl) calibrated_threshold(params, m0, scenario.p);

  parallel_for(static_cast<std::size_t>(reps), [&](std::size_t rep) {
    const std::uint64_t rep_seed = mix_seed(seed, 0xa71, rep);

    MatX baseline(m0, scenario.p);
    for (int t = 0; t < m0; ++t)
      baseline.row(t) = scenario_spectrum(scenario, false, mix_seed(rep_seed, 0x9a5e, t));

    ChartState state = make_chart_state(std::move(baseline));
    ChartParams rep_params = params;
    rep_params.seed = mix_seed(rep_seed, 0xc4a2);

    int rl = step_cap;
    bool c = true;
    for (int s = 1; s <= step_cap; ++s) {
      const bool defective = s >= scenario.defect_onset;
      const VecX x = scenario_spectrum(scenario, defective, mix_seed(rep_seed, 0x2a27, s));
      const ChartStep step = chart_step(state, x, rep_params);
      if (step.signal) {
        rl = s;
        c = false;
        break;
      }
    }
    run_length[rep] = rl;
    censored[rep] = c;
  });

  RunLengthResult result;
  result.reps = reps;
  double sum = 0.0;
  for (int r = 0; r < reps; ++r) {
    sum += run_length[r];
    result.censored += censored[r];
  }
  result.arl = sum / reps;
  double ss = 0.0;
  for (int r = 0; r < reps; ++r) {
    const double d = run_length[r] - result.arl;
    ss += d * d;
  }
  result.sdrl = reps > 1 ? std::sqrt(ss / (reps - 1)) : 0.0;
  return result;
}

}  // namespace lbspec
