#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lbspec/chart.hpp"
#include "lbspec/rng.hpp"

using namespace lbspec;

namespace {

MatX random_baseline(int rows, int cols, std::uint64_t seed) {
  Rng rng(seed);
  MatX m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = rng.normal();
  return m;
}

}  // namespace

TEST_CASE("mid ranks: plain order and tie averaging") {
  VecX v(3);
  v << 1, 2, 3;
  const VecX r = mid_ranks(v);
  CHECK(r[0] == 1.0);
  CHECK(r[2] == 3.0);

  VecX t(3);
  t << 5, 5, 1;
  const VecX rt = mid_ranks(t);
  CHECK(rt[0] == 2.5);
  CHECK(rt[1] == 2.5);
  CHECK(rt[2] == 1.0);
}

TEST_CASE("ranks of a tie-free column are a permutation of 1..N") {
  Rng rng(3);
  VecX v(57);
  for (int i = 0; i < v.size(); ++i) v[i] = rng.normal();
  VecX r = mid_ranks(v);

  // sort oracle
  std::vector<int> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return v[a] < v[b]; });
  for (int pos = 0; pos < static_cast<int>(order.size()); ++pos)
    CHECK(r[order[pos]] == pos + 1.0);

  std::sort(r.begin(), r.end());
  for (int i = 0; i < r.size(); ++i) CHECK(r[i] == i + 1.0);
}

TEST_CASE("weighted rank moments: closed forms and degenerate weights") {
  {
    VecX c(1);
    c << 1.0;
    const auto [mean, var] = weighted_rank_moments(3, c);
    CHECK(mean == doctest::Approx(2.0));
    CHECK(var == doctest::Approx(2.0 / 3.0));
  }
  {
    const auto [mean, var] = weighted_rank_moments(10, VecX::Zero(4));
    CHECK(mean == 0.0);
    CHECK(var == 0.0);
  }
}

TEST_CASE("weighted rank moments match a permutation monte carlo") {
  // N = 10, weights (1, 0.99): draw 2 ranks without replacement.
  const int n = 10;
  VecX c(2);
  c << 1.0, 0.99;
  const auto [mean, var] = weighted_rank_moments(n, c);

  Rng rng(99);
  std::vector<int> pool(n);
  const int draws = 200000;
  double s1 = 0.0, s2 = 0.0;
  for (int d = 0; d < draws; ++d) {
    std::iota(pool.begin(), pool.end(), 1);
    for (int i = 0; i < 2; ++i) {
      const int j = i + static_cast<int>(rng.uniform_below(n - i));
      std::swap(pool[i], pool[j]);
    }
    const double s = c[0] * pool[0] + c[1] * pool[1];
    s1 += s;
    s2 += s * s;
  }
  const double mc_mean = s1 / draws;
  const double mc_var = s2 / draws - mc_mean * mc_mean;
  const double se_mean = std::sqrt(var / draws);
  CHECK(std::abs(mc_mean - mean) < 3 * se_mean);
  // SE of the sample variance ~ var * sqrt(2/draws) for near-normal sums
  CHECK(std::abs(mc_var - var) < 4 * var * std::sqrt(2.0 / draws));
}

TEST_CASE("single-rank specialization of the chart statistic") {
  // p = 1, n = 1, w = 1, no ties: T = (R - (N+1)/2)^2 / ((N^2-1)/12).
  const int m0 = 12;
  MatX baseline = random_baseline(m0, 1, 5);
  ChartState state = make_chart_state(baseline);
  ChartParams params;
  params.w_min = 1;
  params.w_max = 10;
  params.lambda = 0.01;

  VecX x(1);
  x << 100.0;  // exceeds every baseline value -> rank N
  chart_step(state, x, params);
  const int n_pool = m0 + 1;
  const double expect = std::pow(n_pool - 0.5 * (n_pool + 1), 2) /
                        ((static_cast<double>(n_pool) * n_pool - 1) / 12.0);
  CHECK(state.last_statistic == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("a shifted coordinate produces the maximal window ranks") {
  const int m0 = 40, p = 3;
  MatX baseline = random_baseline(m0, p, 8);
  ChartState state = make_chart_state(baseline);
  ChartParams params;
  params.calibrate_arl = false;

  Rng rng(9);
  for (int step = 0; step < 4; ++step) {
    VecX x(p);
    for (int j = 0; j < p; ++j) x[j] = rng.normal();
    x[1] += 1000.0;  // dominates every pooled value in coordinate 1
    chart_step(state, x, params);
  }
  const VecX ranks = pooled_ranks(state, 1);
  const int total = m0 + state.n();
  std::vector<double> streamed(state.n());
  for (int i = 0; i < state.n(); ++i) streamed[i] = ranks[m0 + i];
  std::sort(streamed.begin(), streamed.end());
  for (int i = 0; i < state.n(); ++i) CHECK(streamed[i] == total - state.n() + 1 + i);
}

TEST_CASE("expected statistic under exchangeability is about p") {
  const int m0 = 50, p = 4;
  Rng rng(123);
  double sum = 0.0;
  const int trials = 400;
  for (int t = 0; t < trials; ++t) {
    ChartState state = make_chart_state(random_baseline(m0, p, 1000 + t));
    ChartParams params;
    params.permutations = 1;  // statistic only
    VecX x(p);
    for (int s = 0; s < 3; ++s) {
      for (int j = 0; j < p; ++j) x[j] = rng.normal();
      chart_step(state, x, params);
    }
    sum += state.last_statistic;
  }
  const double mean = sum / trials;
  // Var(T) ~ 2p-ish; 400 trials give se ~ 0.15
  CHECK(std::abs(mean - p) < 0.6);
}

TEST_CASE("monotone transforms leave statistics and p-values unchanged") {
  const int m0 = 30, p = 5;
  const MatX baseline = random_baseline(m0, p, 44);
  ChartParams params;
  params.alpha = 0.05;
  params.seed = 7;
  params.calibrate_arl = false;

  ChartState raw = make_chart_state(baseline);
  MatX cubed = baseline.array().pow(3.0).matrix();
  ChartState transformed = make_chart_state(cubed);

  Rng rng(17);
  for (int s = 0; s < 6; ++s) {
    VecX x(p);
    for (int j = 0; j < p; ++j) x[j] = rng.normal();
    VecX xc = x.array().pow(3.0).matrix();
    const ChartStep a = chart_step(raw, x, params);
    const ChartStep b = chart_step(transformed, xc, params);
    CHECK(a.statistic == b.statistic);  // ranks identical, bitwise
    CHECK(a.p_value == b.p_value);
    CHECK(a.signal == b.signal);
  }
}

TEST_CASE("window never reaches below two parts at tight alpha") {
  // With m0 = 100 and w = 1 the exact permutation p-value is at least
  // 1/101 > 0.005, so the first Phase-II part cannot signal.
  const int m0 = 100, p = 15;
  ChartParams params;
  params.alpha = 0.005;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    ChartState state = make_chart_state(random_baseline(m0, p, seed));
    VecX x = VecX::Constant(p, 1e6);  // as extreme as it gets
    const ChartStep step = chart_step(state, x, params);
    CHECK(step.window == 1);
    CHECK(step.p_value >= 1.0 / (m0 + 1));
    CHECK(!step.signal);
  }
}

TEST_CASE("tied coordinate contributes zero with a warning flag") {
  const int m0 = 20, p = 2;
  MatX baseline = random_baseline(m0, p, 4);
  baseline.col(1).setConstant(3.5);
  ChartState state = make_chart_state(baseline);
  ChartParams params;
  params.calibrate_arl = false;
  VecX x(2);
  x << 0.2, 3.5;
  const ChartStep step = chart_step(state, x, params);
  CHECK(step.tied_coordinate);
  // identical to running the chart on coordinate 0 alone
  ChartState single = make_chart_state(MatX(baseline.col(0)));
  VecX x0(1);
  x0 << 0.2;
  const ChartStep alone = chart_step(single, x0, params);
  CHECK(step.statistic == doctest::Approx(alone.statistic).epsilon(1e-14));
}

TEST_CASE("per-step signal rate under exchangeability tracks alpha") {
  const int m0 = 100, p = 5;
  const MatX baseline = random_baseline(m0, p, 31);
  for (double alpha : {0.05, 0.01}) {
    ChartParams params;
    params.alpha = alpha;
    params.seed = 1234;
    params.calibrate_arl = false;  // raw permutation p-value calibration
    int signals = 0, steps_total = 0;
    for (std::uint64_t stream_seed : {55u, 56u, 57u}) {
      ChartState state = make_chart_state(baseline);
      Rng rng(stream_seed);
      const int steps = 2000;
      for (int s = 0; s < steps; ++s) {
        // stream by resampling baseline rows (exchangeable with the pool)
        const int row = static_cast<int>(rng.uniform_below(m0));
        const ChartStep step = chart_step(state, baseline.row(row), params);
        signals += step.signal;
        ++steps_total;
      }
    }
    const double rate = static_cast<double>(signals) / steps_total;
    CHECK(rate > 0.7 * alpha);
    CHECK(rate < 1.3 * alpha);
  }
}

TEST_CASE("chart state validates dimensions") {
  ChartState state = make_chart_state(random_baseline(10, 3, 1));
  ChartParams params;
  VecX bad(4);
  bad.setZero();
  CHECK_THROWS_AS(chart_step(state, bad, params), ValidationError);
  CHECK_THROWS_AS(make_chart_state(MatX(0, 3)), ValidationError);
}

TEST_CASE("arl-targeted threshold exceeds the nominal rate and is cached") {
  ChartParams params;
  params.alpha = 0.05;
  const double a1 = calibrated_threshold(params, 25, 3);
  const double a2 = calibrated_threshold(params, 25, 3);
  CHECK(a1 == a2);
  CHECK(a1 > params.alpha);       // overlapping windows make raw alpha conservative
  CHECK(a1 < 10 * params.alpha);
}
