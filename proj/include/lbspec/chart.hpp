#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "lbspec/types.hpp"

namespace lbspec {

// Distribution-free multivariate EWMA chart over pooled coordinate ranks.
struct ChartParams {
  int w_min = 1;
  int w_max = 10;
  double lambda = 0.01;      // EWMA weight, 0 < lambda <= 1
  double alpha = 0.005;      // nominal rate; in-control ARL targets 1/alpha
  int permutations = 2000;   // label reassignments per p-value
  std::uint64_t seed = 0xc4a27;
  // The p-value threshold that hits an in-control ARL of 1/alpha is found
  // by simulation on exchangeable rank streams (overlapping windows make
  // raw per-step thresholding conservative). Disabled, alpha itself is the
  // literal per-step threshold.
  bool calibrate_arl = true;
};

// Signal threshold for steps n >= 2: calibrated so that the in-control run
// length averages 1/alpha for these chart parameters (cached, deterministic,
// independent of the monitored data). Step 1 always uses the nominal alpha
// with its exactly enumerated p-value, which keeps the minimum attainable
// run length at 2 for alpha < 1/(m0+1).
double calibrated_threshold(const ChartParams& params, int m0, int p);

// Phase-I baseline plus the Phase-II observations seen so far.
struct ChartState {
  MatX baseline;               // m0 x p
  std::vector<VecX> stream;    // Phase-II spectra, oldest first
  double last_statistic = 0.0;
  double last_p_value = 1.0;
  bool signaled = false;

  int m0() const { return static_cast<int>(baseline.rows()); }
  int p() const { return static_cast<int>(baseline.cols()); }
  int n() const { return static_cast<int>(stream.size()); }
};

ChartState make_chart_state(MatX baseline);

// Mid-ranks of every entry of `values` among all of them (ties averaged).
VecX mid_ranks(const VecX& values);

// Pooled mid-ranks of coordinate j over baseline rows followed by stream
// rows; entry i is R_{j,.,i} for the i-th pooled observation.
VecX pooled_ranks(const ChartState& state, int coordinate);

// Mean and variance of sum_i c_i R_i when the ranks R_i are drawn without
// replacement from {1..N}:
//   mean = (N+1)/2 * sum(c),  var = (N+1)/12 * (N * sum(c^2) - sum(c)^2).
std::pair<double, double> weighted_rank_moments(int pooled_count, const VecX& weights);

// Effective window size at Phase-II step n.
int chart_window(int n, const ChartParams& params);

struct ChartStep {
  double statistic = 0.0;    // T_n
  double p_value = 1.0;
  bool signal = false;
  int window = 0;
  bool tied_coordinate = false;  // some coordinate was entirely tied (contributed 0)
};

// T_n for the current state (stream must be nonempty).
double chart_statistic(const ChartState& state, const ChartParams& params,
                       bool* tied_coordinate = nullptr);

// Appends the new spectrum, computes T_n and its permutation p-value,
// updates the state, and reports whether the chart signals.
ChartStep chart_step(ChartState& state, const VecX& spectrum, const ChartParams& params);

}  // namespace lbspec
