#pragma once

#include <cstdint>
#include <string>

#include "lbspec/chart.hpp"
#include "lbspec/partgen.hpp"
#include "lbspec/pipeline.hpp"

namespace lbspec {

// A simulated production stream: part family, its defect parametrization,
// noise, and the spectrum settings used to monitor it.
struct Scenario {
  enum class Family { sphere, barrel, open_barrel, voxel_hole };
  Family family = Family::barrel;
  BasisOrder order = BasisOrder::linear;
  int p = 15;                 // monitored eigenvalue count
  double tol = 1e-8;

  double delta = 0.0;         // barrel defect amplitude
  NoiseModel noise = NoiseModel::isotropic(0.05);

  double rx = 8.0;            // voxel hole semi-axis (8 = in-control circle)
  int max_noise = 25;

  int sphere_vertices = 642;
  double hole_cap_deg = 20.0;

  int defect_onset = 1;       // first defective Phase-II part index

  BoundaryCondition boundary_condition() const {
    return (family == Family::open_barrel || family == Family::voxel_hole)
               ? BoundaryCondition::dirichlet
               : BoundaryCondition::closed;
  }
  std::string name() const;
};

// Generates one part of the scenario and returns its first p eigenvalues.
VecX scenario_spectrum(const Scenario& scenario, bool defective, std::uint64_t part_seed);

struct RunLengthResult {
  double arl = 0.0;
  double sdrl = 0.0;
  int reps = 0;
  int censored = 0;
};

// Monte Carlo run-length estimate: each replication draws a fresh Phase-I
// baseline of m0 in-control parts, then streams scenario parts through the
// chart until it signals. Deterministic in `seed`; replications run in
// parallel on independent substreams.
RunLengthResult run_length_simulation(const Scenario& scenario, const ChartParams& params,
                                      int m0, int reps, std::uint64_t seed,
                                      int step_cap = 10000);

}  // namespace lbspec
