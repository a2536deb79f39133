#include <doctest.h>

#include <cmath>

#include "error.hpp"
#include "estimation.hpp"

using namespace glp;

TEST_CASE("degenerate laws") {
  const auto c = DistributionSpec::parse("constant:2");
  const auto row = estimate_mn(c, 2, 6, TruncationLevel::none(), 10, 1);
  CHECK(row.mean == 2.0);
  CHECK(row.stderr_ == 0.0);
  CHECK(row.exact_fraction == 1.0);

  const auto ones = DistributionSpec::parse("two_point:1,0,0");
  CHECK(estimate_mn(ones, 2, 5, TruncationLevel::none(), 5, 2).mean == 1.0);

  const std::vector<int> ns{4, 5, 6};
  const std::vector<double> ms{0, 2};
  const auto lim = estimate_limit(c, 2, ms, ns, 4, 3);
  CHECK(lim.estimate == 2.0);
  CHECK(lim.bias_bound == 0.0);
  CHECK(lim.mean_x0 == 2.0);

  const auto dec = error_decomposition(c, 2, 6, 2, 10, 1);
  CHECK(dec.mean_lhs == 0.0);
  CHECK(dec.mean_fluctuation == 0.0);
  CHECK(dec.truncation_gap == 0.0);
  CHECK(dec.mean_defect == 0.0);
}

TEST_CASE("argument checks") {
  const auto g = DistributionSpec::parse("gaussian:0,1");
  CHECK_THROWS_AS(estimate_mn(g, 2, 4, TruncationLevel::none(), 1, 1), Error);
  const std::vector<int> two{4, 5};
  CHECK_THROWS_AS(estimate_truncated_constant(g, 2, TruncationLevel(1), two, 4, 1), Error);
  const std::vector<int> ns{4, 5, 6};
  const std::vector<double> bad_m{2, 1};
  CHECK_THROWS_AS(estimate_limit(g, 2, bad_m, ns, 4, 1), Error);
}

TEST_CASE("truncation bias check") {
  const auto t = DistributionSpec::parse("two_point:1,10,0.3");
  const std::vector<int> ns{3, 4, 5};
  const std::vector<double> ms{0, 2};
  try {
    estimate_limit(t, 2, ms, ns, 20, 1, {}, 0.01);
    FAIL("bias check skipped");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::truncation_bias_too_large);
  }
  const auto lim = estimate_limit(t, 2, ms, ns, 20, 1);
  CHECK(lim.bias_bound >= 4 * overshoot_mean(t, 2));
  CHECK(lim.mean_x0 == doctest::Approx(-2.3));
}

TEST_CASE("per-sample coupling") {
  const auto spec = DistributionSpec::parse("two_point:1,10,0.3");
  const int n = 8;
  const std::uint64_t reps = 60;
  const auto base = solve_replicas(spec, 2, n, TruncationLevel::none(), 0, reps, 5);
  std::vector<double> prev(reps, INFINITY);
  for (double m : {0.0, 2.0, 4.0, 8.0, 16.0}) {
    const auto out = solve_replicas(spec, 2, n, TruncationLevel(m), 0, reps, 5);
    for (std::size_t r = 0; r < reps; ++r) {
      CHECK(out[r].value >= base[r].value);
      CHECK(out[r].value <= prev[r]);
      prev[r] = out[r].value;
    }
  }
  for (std::size_t r = 0; r < reps; ++r) CHECK(prev[r] == base[r].value);
}

TEST_CASE("nonnegative laws ignore truncation") {
  const auto b = DistributionSpec::parse("bernoulli:0.5");
  const auto a = solve_replicas(b, 2, 7, TruncationLevel(0.5), 0, 30, 8);
  const auto c = solve_replicas(b, 2, 7, TruncationLevel(3), 0, 30, 8);
  const auto u = solve_replicas(b, 2, 7, TruncationLevel::none(), 0, 30, 8);
  for (std::size_t r = 0; r < a.size(); ++r) {
    CHECK(a[r].value == c[r].value);
    CHECK(a[r].value == u[r].value);
    CHECK(a[r].n_below == 0);
  }
}

TEST_CASE("replica ranges and threads") {
  const auto g = DistributionSpec::parse("gaussian:0,1");
  RunOptions many;
  many.threads = 4;
  const auto all = solve_replicas(g, 2, 7, TruncationLevel(1), 0, 40, 12);
  const auto par = solve_replicas(g, 2, 7, TruncationLevel(1), 0, 40, 12, many);
  const auto tail = solve_replicas(g, 2, 7, TruncationLevel(1), 25, 15, 12);
  for (std::size_t r = 0; r < all.size(); ++r) CHECK(all[r].value == par[r].value);
  for (std::size_t r = 0; r < tail.size(); ++r) CHECK(tail[r].value == all[r + 25].value);

  const auto e1 = estimate_mn(g, 2, 7, TruncationLevel(1), 40, 12);
  const auto e4 = estimate_mn(g, 2, 7, TruncationLevel(1), 40, 12, many);
  CHECK(std::bit_cast<std::uint64_t>(e1.mean) == std::bit_cast<std::uint64_t>(e4.mean));
  CHECK(std::bit_cast<std::uint64_t>(e1.stderr_) == std::bit_cast<std::uint64_t>(e4.stderr_));
}

TEST_CASE("summary statistics") {
  std::vector<ReplicaOutcome> out(4);
  const double values[] = {2, 4, 6, 8};
  for (int i = 0; i < 4; ++i) out[static_cast<std::size_t>(i)].value = values[i];
  const auto row = summarize(2, TruncationLevel::none(), out);
  CHECK(row.mean == 2.5);
  const double sd = std::sqrt((2.25 + 0.25 + 0.25 + 2.25) / 3.0);
  CHECK(row.stderr_ == doctest::Approx(sd / 2.0));
  CHECK(row.ci_high - row.mean == doctest::Approx(kZ95 * sd / 2.0));
  CHECK_THROWS_AS(summarize(2, TruncationLevel::none(), std::span(out).first(1)), Error);
}

TEST_CASE("m = 0 gives nonnegative constants") {
  const auto g = DistributionSpec::parse("gaussian:-1,1");
  const std::vector<int> ns{3, 4, 5};
  const auto tc = estimate_truncated_constant(g, 2, TruncationLevel(0), ns, 20, 4);
  CHECK(tc.estimate >= 0.0);
  CHECK(tc.rows.size() == 3);
  CHECK(tc.drift == doctest::Approx(std::abs(tc.rows[2].mean - tc.rows[1].mean)));
}

TEST_CASE("error decomposition on a nonnegative law") {
  const auto b = DistributionSpec::parse("bernoulli:0.5");
  const auto dec = error_decomposition(b, 2, 6, 2, 50, 3);
  CHECK(dec.mean_defect == 0.0);
  CHECK(dec.inequality_violations == 0);
  CHECK(dec.sandwich_violations == 0);
  CHECK(dec.pass);
}

TEST_CASE("defect stays below the overshoot bound") {
  const auto t = DistributionSpec::parse("two_point:1,10,0.3");
  const auto dec = error_decomposition(t, 2, 10, 4, 300, 9);
  CHECK(dec.defect_bound == doctest::Approx(1.8));
  CHECK(dec.mean_defect <= dec.defect_bound + 3 * dec.stderr_defect);
  CHECK(dec.inequality_violations == 0);
}
