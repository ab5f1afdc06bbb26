#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "lbspec/csv.hpp"
#include "lbspec/mds.hpp"
#include "lbspec/partgen.hpp"
#include "lbspec/pipeline.hpp"
#include "lbspec/rng.hpp"
#include "lbspec/runlength.hpp"

namespace fs = std::filesystem;
using namespace lbspec;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitSolver = 3;

BasisOrder parse_order(const std::string& s) {
  if (s == "linear") return BasisOrder::linear;
  if (s == "quadratic") return BasisOrder::quadratic;
  if (s == "cubic") return BasisOrder::cubic;
  throw ValidationError("unknown basis order '" + s + "'");
}

BoundaryCondition parse_bc(const std::string& s) {
  if (s == "dirichlet") return BoundaryCondition::dirichlet;
  if (s == "neumann") return BoundaryCondition::neumann;
  if (s == "closed") return BoundaryCondition::closed;
  throw ValidationError("unknown boundary condition '" + s + "'");
}

bool is_voxel_path(const fs::path& p) { return p.extension() == ".vox"; }

Spectrum spectrum_of_file(const fs::path& path, const SpectrumConfig& cfg) {
  if (is_voxel_path(path)) return compute_spectrum(load_voxgrid(path), cfg);
  return compute_spectrum(load_off(path), cfg);
}

// Shared scenario flags for generate and simulate-rl.
struct ScenarioFlags {
  std::string family = "barrel";
  double delta = 0.0;
  int vertices = 2562;
  double hole_cap_deg = 0.0;
  double rx = 8.0;
  int max_noise = 25;
  std::string noise = "isotropic";
  double sigma = 0.05;
  double sigma1 = 0.02;
  double sigma2 = 0.0458257569495584;  // sqrt(0.05^2 - 0.02^2)
  std::vector<double> corr_range{2.6, 2.6, 16.7};

  void add_to(CLI::App* cmd) {
    cmd->add_option("--family", family, "sphere | barrel | open-barrel | voxel-hole")
        ->required();
    cmd->add_option("--delta", delta, "barrel defect amplitude");
    cmd->add_option("--vertices", vertices, "sphere target vertex count");
    cmd->add_option("--hole-cap", hole_cap_deg, "polar cap angle (deg) removed from spheres");
    cmd->add_option("--rx", rx, "voxel hole semi-axis in voxels (8 = circular)");
    cmd->add_option("--max-noise", max_noise, "voxel status-flip bound (0 disables)");
    cmd->add_option("--noise", noise, "none | isotropic | correlated");
    cmd->add_option("--sigma", sigma, "isotropic noise std dev");
    cmd->add_option("--sigma1", sigma1, "correlated noise component");
    cmd->add_option("--sigma2", sigma2, "independent noise component");
    cmd->add_option("--corr-range", corr_range, "correlation ranges r_x r_y r_z")
        ->expected(3);
  }

  NoiseModel noise_model() const {
    if (noise == "none") return NoiseModel::off();
    if (noise == "isotropic") return NoiseModel::isotropic(sigma);
    if (noise == "correlated")
      return NoiseModel::correlated(sigma1, sigma2,
                                    Vec3(corr_range[0], corr_range[1], corr_range[2]));
    throw ValidationError("unknown noise model '" + noise + "'");
  }

  Scenario scenario(BasisOrder order, int p) const {
    Scenario sc;
    if (family == "sphere")
      sc.family = Scenario::Family::sphere;
    else if (family == "barrel")
      sc.family = Scenario::Family::barrel;
    else if (family == "open-barrel")
      sc.family = Scenario::Family::open_barrel;
    else if (family == "voxel-hole")
      sc.family = Scenario::Family::voxel_hole;
    else
      throw ValidationError("unknown family '" + family + "'");
    sc.order = order;
    sc.p = p;
    sc.delta = delta;
    sc.rx = rx;
    sc.max_noise = max_noise;
    sc.noise = noise_model();
    sc.sphere_vertices = vertices;
    sc.hole_cap_deg = hole_cap_deg;
    return sc;
  }
};

void write_part(const ScenarioFlags& flags, std::uint64_t seed, const fs::path& out) {
  if (flags.family == "voxel-hole") {
    save_voxgrid(gen_voxel_part(flags.rx, flags.max_noise, seed), out);
    return;
  }
  TriangleMesh mesh;
  if (flags.family == "sphere") {
    mesh = gen_sphere_mesh(flags.vertices, flags.noise_model(), seed);
    if (flags.hole_cap_deg > 0.0) mesh = remove_polar_cap(mesh, flags.hole_cap_deg);
  } else if (flags.family == "barrel" || flags.family == "open-barrel") {
    mesh = gen_barrel_cylinder(flags.delta, flags.noise_model(), seed);
    if (flags.family == "open-barrel") mesh = remove_bottom(mesh, 0.3);
  } else {
    throw ValidationError("unknown family '" + flags.family + "'");
  }
  save_off(mesh, out);
}

fs::path numbered_path(const fs::path& base, int index) {
  char suffix[16];
  std::snprintf(suffix, sizeof suffix, "_%03d", index);
  fs::path p = base;
  p.replace_filename(base.stem().string() + suffix + base.extension().string());
  return p;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Laplace-Beltrami spectra of scanned parts and spectral control charts"};
  app.require_subcommand(1);

  // ---- spectrum ----
  auto* spectrum_cmd =
      app.add_subcommand("spectrum", "Compute the leading LB spectrum of a part file");
  std::string sp_input, sp_order = "linear", sp_bc = "closed", sp_out;
  int sp_k = 15;
  double sp_tol = 1e-8;
  spectrum_cmd->add_option("--input", sp_input, "part file (.off mesh or .vox voxel grid)")
      ->required();
  spectrum_cmd->add_option("--order", sp_order, "linear | quadratic | cubic");
  spectrum_cmd->add_option("--bc", sp_bc, "closed | neumann | dirichlet");
  spectrum_cmd->add_option("--k", sp_k, "number of eigenvalues");
  spectrum_cmd->add_option("--tol", sp_tol, "relative residual tolerance");
  spectrum_cmd->add_option("--out", sp_out, "spectrum CSV path");

  // ---- generate ----
  auto* generate_cmd = app.add_subcommand("generate", "Generate synthetic part files");
  ScenarioFlags gen_flags;
  gen_flags.add_to(generate_cmd);
  std::string gen_out;
  std::uint64_t gen_seed = 1;
  int gen_count = 1;
  generate_cmd->add_option("--out", gen_out, "output file (.off or .vox)")->required();
  generate_cmd->add_option("--seed", gen_seed, "generator seed");
  generate_cmd->add_option("--count", gen_count, "emit this many seeded variants");

  // ---- chart ----
  auto* chart_cmd =
      app.add_subcommand("chart", "Run the rank-EWMA chart over streamed spectra");
  std::string ch_baseline, ch_order = "linear", ch_bc = "closed", ch_out;
  std::vector<std::string> ch_stream;
  double ch_alpha = 0.005, ch_lambda = 0.01;
  int ch_wmin = 1, ch_wmax = 10, ch_perms = 2000;
  std::uint64_t ch_seed = 1;
  bool ch_continue = false;
  chart_cmd->add_option("--baseline", ch_baseline, "CSV with one row of eigenvalues per part")
      ->required();
  chart_cmd->add_option("--stream", ch_stream, "spectrum CSVs or part files, in stream order")
      ->required();
  chart_cmd->add_option("--alpha", ch_alpha, "per-step false-alarm rate");
  chart_cmd->add_option("--lambda", ch_lambda, "EWMA weight");
  chart_cmd->add_option("--wmin", ch_wmin, "minimum window");
  chart_cmd->add_option("--wmax", ch_wmax, "maximum window");
  chart_cmd->add_option("--permutations", ch_perms, "label reassignments per p-value");
  chart_cmd->add_option("--seed", ch_seed, "permutation seed");
  chart_cmd->add_option("--order", ch_order, "basis order for part-file inputs");
  chart_cmd->add_option("--bc", ch_bc, "boundary condition for part-file inputs");
  chart_cmd->add_flag("--continue", ch_continue, "keep monitoring after a signal");
  chart_cmd->add_option("--out", ch_out, "per-part decisions CSV");

  // ---- simulate-rl ----
  auto* rl_cmd = app.add_subcommand("simulate-rl", "Monte Carlo run-length estimation");
  ScenarioFlags rl_flags;
  rl_flags.add_to(rl_cmd);
  std::string rl_order = "linear", rl_out;
  double rl_alpha = 0.005, rl_lambda = 0.01;
  int rl_reps = 100, rl_m0 = 100, rl_p = 15, rl_wmin = 1, rl_wmax = 10, rl_perms = 2000;
  int rl_cap = 10000;
  std::uint64_t rl_seed = 1;
  rl_cmd->add_option("--order", rl_order, "linear | cubic");
  rl_cmd->add_option("--alpha", rl_alpha, "per-step false-alarm rate");
  rl_cmd->add_option("--lambda", rl_lambda, "EWMA weight");
  rl_cmd->add_option("--reps", rl_reps, "replications")->required();
  rl_cmd->add_option("--m0", rl_m0, "Phase-I baseline part count");
  rl_cmd->add_option("--p", rl_p, "monitored eigenvalue count");
  rl_cmd->add_option("--wmin", rl_wmin, "minimum window");
  rl_cmd->add_option("--wmax", rl_wmax, "maximum window");
  rl_cmd->add_option("--permutations", rl_perms, "label reassignments per p-value");
  rl_cmd->add_option("--cap", rl_cap, "censoring cap on the run length");
  rl_cmd->add_option("--seed", rl_seed, "simulation seed");
  rl_cmd->add_option("--out", rl_out, "report CSV path");

  // ---- mds ----
  auto* mds_cmd =
      app.add_subcommand("mds", "Classical MDS embedding of a spectrum collection");
  std::vector<std::string> mds_inputs;
  std::string mds_matrix, mds_out;
  int mds_dim = 3;
  mds_cmd->add_option("--inputs", mds_inputs, "spectrum CSV files");
  mds_cmd->add_option("--matrix", mds_matrix, "CSV with one spectrum row per part");
  mds_cmd->add_option("--dim", mds_dim, "embedding dimension (2 or 3)");
  mds_cmd->add_option("--out", mds_out, "coordinates CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (spectrum_cmd->parsed()) {
      SpectrumConfig cfg;
      cfg.order = parse_order(sp_order);
      cfg.bc = parse_bc(sp_bc);
      cfg.k = sp_k;
      cfg.tol = sp_tol;
      const Spectrum spec = spectrum_of_file(sp_input, cfg);
      for (int i = 0; i < spec.count(); ++i)
        std::printf("%d,%s\n", i + 1, format_full(spec.eigenvalues[i]).c_str());
      std::fprintf(stderr, "n=%d k=%d max_residual=%.3g%s\n", spec.matrix_dim, spec.count(),
                   spec.count() ? spec.residuals.maxCoeff() : 0.0,
                   spec.clamped_negative ? " (tiny negatives clamped to 0)" : "");
      if (!sp_out.empty()) write_spectrum_csv(spec, sp_out);
      return kExitOk;
    }

    if (generate_cmd->parsed()) {
      if (gen_count < 1) throw ValidationError("--count must be >= 1");
      if (gen_count == 1) {
        write_part(gen_flags, gen_seed, gen_out);
      } else {
        for (int i = 0; i < gen_count; ++i)
          write_part(gen_flags, mix_seed(gen_seed, i), numbered_path(gen_out, i));
      }
      return kExitOk;
    }

    if (chart_cmd->parsed()) {
      const MatX baseline = read_matrix_csv(ch_baseline);
      ChartParams params;
      params.alpha = ch_alpha;
      params.lambda = ch_lambda;
      params.w_min = ch_wmin;
      params.w_max = ch_wmax;
      params.permutations = ch_perms;
      params.seed = ch_seed;
      ChartState state = make_chart_state(baseline);
      const int p = state.p();

      SpectrumConfig cfg;
      cfg.order = parse_order(ch_order);
      cfg.bc = parse_bc(ch_bc);
      cfg.k = p;

      std::ofstream out;
      if (!ch_out.empty()) {
        out.open(ch_out);
        if (!out) throw ParseError("cannot write " + ch_out);
      }
      std::ostream& os = ch_out.empty() ? std::cout : out;
      os << "part,T_n,p_value,signal\n";
      for (const auto& item : ch_stream) {
        const fs::path path(item);
        VecX x;
        if (path.extension() == ".csv") {
          x = read_spectrum_csv(path);
          if (x.size() < p)
            throw ValidationError(item + ": spectrum has " + std::to_string(x.size()) +
                                  " values, baseline has " + std::to_string(p) + " columns");
          x = x.head(p).eval();
        } else {
          const Spectrum spec = spectrum_of_file(path, cfg);
          if (spec.count() < p) throw ValidationError(item + ": spectrum too short");
          x = spec.eigenvalues.head(p);
        }
        const ChartStep step = chart_step(state, x, params);
        os << path.filename().string() << ',' << format_full(step.statistic) << ','
           << format_full(step.p_value) << ',' << (step.signal ? 1 : 0) << '\n';
        if (step.signal && !ch_continue) break;
      }
      return kExitOk;
    }

    if (rl_cmd->parsed()) {
      ChartParams params;
      params.alpha = rl_alpha;
      params.lambda = rl_lambda;
      params.w_min = rl_wmin;
      params.w_max = rl_wmax;
      params.permutations = rl_perms;
      const Scenario scenario = rl_flags.scenario(parse_order(rl_order), rl_p);
      const RunLengthResult result =
          run_length_simulation(scenario, params, rl_m0, rl_reps, rl_seed, rl_cap);
      const std::string row = scenario.name() + "," + format_full(result.arl) + "," +
                              format_full(result.sdrl) + "," + std::to_string(result.reps) +
                              "," + std::to_string(result.censored);
      std::printf("scenario,ARL,SDRL,reps,censored\n%s\n", row.c_str());
      if (!rl_out.empty()) {
        std::ofstream out(rl_out);
        if (!out) throw ParseError("cannot write " + rl_out);
        out << "scenario,ARL,SDRL,reps,censored\n" << row << '\n';
      }
      if (result.censored > 0)
        std::fprintf(stderr, "warning: %d replications hit the %d-step cap\n", result.censored,
                     rl_cap);
      return kExitOk;
    }

    if (mds_cmd->parsed()) {
      MatX rows;
      std::vector<std::string> ids;
      if (!mds_matrix.empty()) {
        rows = read_matrix_csv(mds_matrix);
        for (int i = 0; i < rows.rows(); ++i) ids.push_back(std::to_string(i));
      } else {
        if (mds_inputs.size() < static_cast<std::size_t>(mds_dim) + 1)
          throw ValidationError("mds needs at least dim+1 spectrum files");
        std::vector<VecX> spectra;
        for (const auto& f : mds_inputs) {
          spectra.push_back(read_spectrum_csv(f));
          ids.push_back(fs::path(f).stem().string());
          if (spectra.back().size() != spectra.front().size())
            throw ValidationError(f + ": spectrum length differs from the first input");
        }
        rows.resize(static_cast<int>(spectra.size()), spectra.front().size());
        for (std::size_t i = 0; i < spectra.size(); ++i)
          rows.row(static_cast<int>(i)) = spectra[i];
      }
      const MdsResult mds = classical_mds(rows, mds_dim);
      if (mds.achieved_rank < mds_dim)
        std::fprintf(stderr, "warning: embedding rank %d below requested dimension %d\n",
                     mds.achieved_rank, mds_dim);
      std::ofstream out(mds_out);
      if (!out) throw ParseError("cannot write " + mds_out);
      out << (mds_dim == 2 ? "part_id,x,y" : "part_id,x,y,z") << '\n';
      for (int i = 0; i < mds.coordinates.rows(); ++i) {
        out << ids[i];
        for (int c = 0; c < mds_dim; ++c) out << ',' << format_full(mds.coordinates(i, c));
        out << '\n';
      }
      return kExitOk;
    }
  } catch (const SolverError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitSolver;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }
  return kExitUsage;
}
