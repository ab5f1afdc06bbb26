#include "lbspec/chart.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <tuple>

#include "lbspec/parallel.hpp"
#include "lbspec/rng.hpp"

namespace lbspec {

ChartState make_chart_state(MatX baseline) {
  if (baseline.rows() < 1 || baseline.cols() < 1)
    throw ValidationError("baseline must have at least one row and one column");
  ChartState state;
  state.baseline = std::move(baseline);
  return state;
}

VecX mid_ranks(const VecX& values) {
  const int n = static_cast<int>(values.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return values[a] < values[b]; });
  VecX ranks(n);
  int i = 0;
  while (i < n) {
    int j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double mid = 0.5 * (i + j) + 1.0;  // average of 1-based positions i+1..j+1
    for (int t = i; t <= j; ++t) ranks[order[t]] = mid;
    i = j + 1;
  }
  return ranks;
}

VecX pooled_ranks(const ChartState& state, int coordinate) {
  const int total = state.m0() + state.n();
  VecX column(total);
  for (int i = 0; i < state.m0(); ++i) column[i] = state.baseline(i, coordinate);
  for (int i = 0; i < state.n(); ++i) column[state.m0() + i] = state.stream[i][coordinate];
  return mid_ranks(column);
}

std::pair<double, double> weighted_rank_moments(int pooled_count, const VecX& weights) {
  const double n = pooled_count;
  const double sum = weights.sum();
  const double sum_sq = weights.squaredNorm();
  const double mean = 0.5 * (n + 1.0) * sum;
  const double var = (n + 1.0) / 12.0 * (n * sum_sq - sum * sum);
  return {mean, var};
}

int chart_window(int n, const ChartParams& params) {
  return std::min(std::max(n, params.w_min), params.w_max);
}

namespace {

using CalibrationKey = std::tuple<long, int, int, int, int, long, int>;

CalibrationKey make_key(const ChartParams& params, int m0, int p) {
  return {std::lround(params.alpha * 1e9), m0, p, params.w_min, params.w_max,
          std::lround(params.lambda * 1e9), params.permutations};
}

}  // namespace

double calibrated_threshold(const ChartParams& params, int m0, int p) {
  static std::mutex cache_mutex;
  static std::map<CalibrationKey, double> cache;
  const CalibrationKey key = make_key(params, m0, p);
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }

  // Simulate the chart on exchangeable synthetic streams (iid uniforms;
  // only ranks matter) and record the raw p-value path of each stream.
  const double target = 1.0 / params.alpha;
  const int cap = std::min(1500, std::max(120, static_cast<int>(12.0 * target)));
  const int reps = params.alpha >= 0.02 ? 800 : 160;

  std::vector<std::vector<double>> pv_paths(reps);
  parallel_for(static_cast<std::size_t>(reps), [&](std::size_t rep) {
    Rng rng(mix_seed(0xCA11B2A7E, rep));
    MatX baseline(m0, p);
    for (int i = 0; i < m0; ++i)
      for (int j = 0; j < p; ++j) baseline(i, j) = rng.uniform();
    ChartState state = make_chart_state(std::move(baseline));
    ChartParams raw = params;
    raw.calibrate_arl = false;
    raw.alpha = 2.0;  // never signal; collect p-values only
    raw.seed = mix_seed(0xCA11B2A7E, rep, 1);
    auto& path = pv_paths[rep];
    path.reserve(cap);
    VecX x(p);
    for (int n = 0; n < cap; ++n) {
      for (int j = 0; j < p; ++j) x[j] = rng.uniform();
      path.push_back(chart_step(state, x, raw).p_value);
    }
  });

  // Mean first-passage time under a candidate threshold; step 1 keeps the
  // nominal alpha.
  const auto mean_run_length = [&](double threshold) {
    double sum = 0.0;
    for (const auto& path : pv_paths) {
      int rl = cap;
      for (int n = 0; n < static_cast<int>(path.size()); ++n) {
        if (path[n] < (n == 0 ? params.alpha : threshold)) {
          rl = n + 1;
          break;
        }
      }
      sum += rl;
    }
    return sum / pv_paths.size();
  };

  double lo = params.alpha * 0.5, hi = std::min(0.8, params.alpha * 16.0);
  for (int it = 0; it < 40; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mean_run_length(mid) > target)
      lo = mid;  // too conservative: raise the threshold
    else
      hi = mid;
  }
  const double threshold = 0.5 * (lo + hi);

  std::lock_guard<std::mutex> lock(cache_mutex);
  cache.emplace(key, threshold);
  return threshold;
}

namespace {

// Window weights c_i = (1-lambda)^(n-i), oldest first.
VecX window_weights(int w, double lambda) {
  VecX c(w);
  for (int i = 0; i < w; ++i) c[i] = std::pow(1.0 - lambda, w - 1 - i);
  return c;
}

struct Standardizer {
  double mean;
  double inv_sd;  // 0 for an entirely tied coordinate
};

double statistic_from_rows(const MatX& ranks, const int* rows, const VecX& weights,
                           const std::vector<Standardizer>& std_by_coord) {
  const int w = static_cast<int>(weights.size());
  const int p = static_cast<int>(ranks.cols());
  double total = 0.0;
  for (int j = 0; j < p; ++j) {
    if (std_by_coord[j].inv_sd == 0.0) continue;
    double s = 0.0;
    for (int i = 0; i < w; ++i) s += weights[i] * ranks(rows[i], j);
    const double t = (s - std_by_coord[j].mean) * std_by_coord[j].inv_sd;
    total += t * t;
  }
  return total;
}

}  // namespace

double chart_statistic(const ChartState& state, const ChartParams& params,
                       bool* tied_coordinate) {
  if (state.n() < 1) throw ValidationError("chart statistic needs at least one observation");
  const int n = state.n();
  const int w = chart_window(n, params);
  const int total = state.m0() + n;
  if (w > total) throw ValidationError("window larger than pooled observation count");

  const VecX weights = window_weights(w, params.lambda);
  const auto [mean, var] = weighted_rank_moments(total, weights);

  bool tied = false;
  double t_n = 0.0;
  for (int j = 0; j < state.p(); ++j) {
    const VecX ranks = pooled_ranks(state, j);
    // All pooled values identical: the rank sum is deterministic, the
    // coordinate carries no information.
    bool all_equal = true;
    for (int i = 1; i < total; ++i)
      if (ranks[i] != ranks[0]) {
        all_equal = false;
        break;
      }
    if (all_equal) {
      tied = true;
      continue;
    }
    double s = 0.0;
    for (int i = 0; i < w; ++i) s += weights[i] * ranks[total - w + i];
    const double t = (s - mean) / std::sqrt(var);
    t_n += t * t;
  }
  if (tied_coordinate) *tied_coordinate = tied;
  return t_n;
}

ChartStep chart_step(ChartState& state, const VecX& spectrum, const ChartParams& params) {
  if (spectrum.size() != state.p())
    throw ValidationError("spectrum length " + std::to_string(spectrum.size()) +
                          " does not match baseline column count " + std::to_string(state.p()));
  state.stream.push_back(spectrum);

  const int n = state.n();
  const int w = chart_window(n, params);
  const int total = state.m0() + n;
  const VecX weights = window_weights(w, params.lambda);
  const auto [mean, var] = weighted_rank_moments(total, weights);
  const double inv_sd = var > 0.0 ? 1.0 / std::sqrt(var) : 0.0;

  // Rank matrix over the pooled observations, one column per coordinate.
  MatX ranks(total, state.p());
  std::vector<Standardizer> std_by_coord(state.p());
  bool tied = false;
  for (int j = 0; j < state.p(); ++j) {
    const VecX r = pooled_ranks(state, j);
    bool all_equal = true;
    for (int i = 1; i < total; ++i)
      if (r[i] != r[0]) {
        all_equal = false;
        break;
      }
    ranks.col(j) = r;
    std_by_coord[j] = all_equal ? Standardizer{0.0, 0.0} : Standardizer{mean, inv_sd};
    tied |= all_equal;
  }

  std::vector<int> observed_rows(w);
  for (int i = 0; i < w; ++i) observed_rows[i] = total - w + i;
  const double t_obs = statistic_from_rows(ranks, observed_rows.data(), weights, std_by_coord);

  // Permutation p-value: reassign the pooled observations' time labels and
  // recompute; only the rows landing in the window matter. For w = 1 all
  // `total` assignments are enumerated exactly, which keeps the minimum
  // p-value at 1/total.
  double p_value;
  if (w == 1) {
    int count = 0;
    int row[1];
    for (int r = 0; r < total; ++r) {
      row[0] = r;
      if (statistic_from_rows(ranks, row, weights, std_by_coord) >= t_obs) ++count;
    }
    p_value = static_cast<double>(count) / total;
  } else {
    Rng rng(mix_seed(params.seed, static_cast<std::uint64_t>(n), 0xdfe33a));
    std::vector<int> pool(total);
    std::iota(pool.begin(), pool.end(), 0);
    std::vector<int> picked(w);
    int count = 0;
    for (int b = 0; b < params.permutations; ++b) {
      // Partial Fisher-Yates: draw an ordered w-subset of the pooled rows.
      for (int i = 0; i < w; ++i) {
        const int j = i + static_cast<int>(rng.uniform_below(total - i));
        std::swap(pool[i], pool[j]);
        picked[i] = pool[i];
      }
      if (statistic_from_rows(ranks, picked.data(), weights, std_by_coord) >= t_obs) ++count;
    }
    p_value = (1.0 + count) / (1.0 + params.permutations);
  }

  ChartStep step;
  step.statistic = t_obs;
  step.p_value = p_value;
  const double threshold = (n == 1 || !params.calibrate_arl)
                               ? params.alpha
                               : calibrated_threshold(params, state.m0(), state.p());
  step.signal = p_value < threshold;
  step.window = w;
  step.tied_coordinate = tied;

  state.last_statistic = t_obs;
  state.last_p_value = p_value;
  state.signaled = state.signaled || step.signal;
  return step;
}

}  // namespace lbspec
