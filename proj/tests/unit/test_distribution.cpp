#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "distribution.hpp"
#include "error.hpp"
#include "philox.hpp"
#include "weight_field.hpp"

using namespace glp;

namespace {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }
double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); }

// Composite Simpson rule on [a, b].
template <class F>
double simpson(F f, double a, double b, int intervals = 20000) {
  const double h = (b - a) / intervals;
  double s = f(a) + f(b);
  for (int i = 1; i < intervals; ++i) s += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  return s * h / 3.0;
}

double ks_statistic(std::vector<double> xs, const DistributionSpec& spec) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = spec.cdf(xs[i]);
    d = std::max({d, (static_cast<double>(i) + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

}  // namespace

TEST_CASE("philox known answers") {
  using C = Philox4x32::Counter;
  CHECK(Philox4x32::generate({0, 0, 0, 0}, {0, 0}) == C{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  CHECK(Philox4x32::generate({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu}) ==
        C{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  CHECK(Philox4x32::generate({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}) ==
        C{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("uniform stream is position-addressed") {
  UniformStream a(7, 3);
  UniformStream b(7, 3);
  const double first = a.next();
  a.next();
  CHECK(b.at(0) == first);
  CHECK(a.position() == 2);
  CHECK(to_open_unit(0, 0) > 0.0);
  CHECK(to_open_unit(0xffffffffu, 0xffffffffu) < 1.0);
  CHECK(derive_seed(1, 0, 0) != derive_seed(1, 0, 1));
  CHECK(derive_seed(1, 0, 5) != derive_seed(1, 1, 5));
}

TEST_CASE("parsing and canonical form") {
  const auto g = DistributionSpec::parse("gaussian:0,1");
  CHECK(g.family_name() == "gaussian");
  CHECK(DistributionSpec::parse(g.canonical()).canonical() == g.canonical());
  const auto t = DistributionSpec::parse("two_point:a_plus=1,a_minus=10,q=0.3");
  CHECK(t.canonical() == DistributionSpec::parse("two_point:1,10,0.3").canonical());
  CHECK(t.integer_valued());
  CHECK(DistributionSpec::parse("bernoulli:0.5").nonnegative());
  CHECK(DistributionSpec::parse("pareto_tail:2,negative,1").support_max() == doctest::Approx(-1.0));

  for (const char* bad : {"gaussian:0,-1", "two_point:1,10,1.5", "nosuch:1", "gaussian", "bernoulli:x",
                          "uniform_int:3,1", "pareto_tail:0,negative,1"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(DistributionSpec::parse(bad), Error);
  }
  CHECK(parse_double("inf") == INFINITY);
  CHECK(format_double(-INFINITY) == "-inf");
  CHECK_THROWS_AS(parse_double("abc"), Error);
}

TEST_CASE("truncation") {
  CHECK(truncate(-5, TruncationLevel(2)) == -2);
  CHECK(truncate(3, TruncationLevel(2)) == 3);
  CHECK(truncate(-2, TruncationLevel(2)) == -2);
  CHECK(truncate(-1e300, TruncationLevel::none()) == -1e300);
  CHECK_FALSE(TruncationLevel::none().active());
  CHECK(TruncationLevel::none().to_string() == "inf");
  CHECK_THROWS_AS(TruncationLevel(-1), Error);
}

TEST_CASE("tail probability and overshoot") {
  const auto t = DistributionSpec::parse("two_point:1,10,0.3");
  CHECK(tail_prob(t, 4) == doctest::Approx(0.3));
  CHECK(tail_prob(t, 11) == 0.0);
  CHECK(tail_prob(DistributionSpec::parse("constant:2"), 0) == 0.0);
  CHECK(overshoot_mean(t, 4) == doctest::Approx(1.8));
  CHECK(overshoot_mean(t, 11) == 0.0);
  CHECK(conditional_overshoot_mean(t, 4) == doctest::Approx(6.0));
  CHECK_THROWS_AS(conditional_overshoot_mean(t, 11), Error);

  const auto g = DistributionSpec::parse("gaussian:0,1");
  CHECK(tail_prob(g, 1) == doctest::Approx(normal_cdf(-1)).epsilon(1e-12));
  const double oracle = simpson([](double x) { return (-1.0 - x) * normal_pdf(x); }, -40.0, -1.0);
  CHECK(overshoot_mean(g, 1) == doctest::Approx(oracle).epsilon(1e-9));
  CHECK(conditional_overshoot_mean(g, 1) == doctest::Approx(normal_pdf(1) / normal_cdf(-1) - 1).epsilon(1e-9));
  const double m4 = simpson([](double x) { return std::pow(-1.0 - x, 4) * normal_pdf(x); }, -40.0, -1.0);
  CHECK(overshoot_moment(g, 1, 4) == doctest::Approx(m4 / normal_cdf(-1)).epsilon(1e-8));

  const auto pareto = DistributionSpec::parse("pareto_tail:2,negative,1");
  CHECK(std::isinf(overshoot_moment(pareto, 1, 4)));
  CHECK(std::isfinite(overshoot_moment(pareto, 1, 1)));
  CHECK_THROWS_AS(overshoot_mean(DistributionSpec::parse("pareto_tail:1,negative,1"), 1), Error);
}

TEST_CASE("tail and overshoot are nonincreasing in m") {
  for (const char* s : {"gaussian:0,1", "two_point:1,10,0.3", "uniform_int:-5,5", "shifted_exponential:1,0,negative",
                        "pareto_tail:3,negative,1"}) {
    CAPTURE(s);
    const auto spec = DistributionSpec::parse(s);
    double prev_tail = 2.0;
    double prev_over = INFINITY;
    for (double m = 0.125; m <= 64; m *= 2) {
      const double tp = tail_prob(spec, m);
      const double ov = overshoot_mean(spec, m);
      CHECK(tp <= prev_tail);
      CHECK(ov <= prev_over + 1e-15);
      prev_tail = tp;
      prev_over = ov;
    }
    CHECK(prev_over < 1e-3);
  }
}

TEST_CASE("overshoot sampler") {
  OvershootSampler point(DistributionSpec::parse("two_point:1,10,0.3"), 4, 1);
  for (int i = 0; i < 100; ++i) CHECK(point() == 6.0);

  OvershootSampler u(DistributionSpec::parse("uniform_int:-5,5"), 3, 2);
  int counts[3] = {0, 0, 0};
  const int draws = 30000;
  for (int i = 0; i < draws; ++i) {
    const double x = u();
    REQUIRE((x == 0.0 || x == 1.0 || x == 2.0));
    ++counts[static_cast<int>(x)];
  }
  for (int c : counts) CHECK(std::abs(c - draws / 3.0) < 4.0 * std::sqrt(draws * 2.0 / 9.0));

  const auto g = DistributionSpec::parse("gaussian:0,1");
  OvershootSampler s(g, 1, 3);
  const int n = 100000;
  double sum = 0.0;
  double sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = s();
    CHECK(x >= 0.0);
    sum += x;
    sq += x * x;
  }
  const double mean = sum / n;
  const double se = std::sqrt((sq / n - mean * mean) / n);
  const double oracle = normal_pdf(1) / normal_cdf(-1) - 1;
  CHECK(std::abs(mean - oracle) <= 3 * se);
  CHECK_THROWS_AS(OvershootSampler(DistributionSpec::parse("constant:2"), 0, 1), Error);
}

TEST_CASE("field sampling") {
  WeightField c(DistributionSpec::parse("constant:2"), 2, 9);
  CHECK(c.sample(Vertex{3, -4}) == 2.0);

  const auto g = DistributionSpec::parse("gaussian:0,1");
  WeightField f(g, 2, 42);
  WeightField h(g, 2, 42);
  const Vertex v{5, -7};
  const double x = f.sample(v);
  h.sample(Vertex{1, 1});
  CHECK(std::bit_cast<std::uint64_t>(h.sample(v)) == std::bit_cast<std::uint64_t>(x));
  CHECK(f.sample(v) == x);
  CHECK(f.value(v, TruncationLevel(0.5)) == std::max(x, -0.5));
  CHECK(WeightField(g, 2, 43).sample(v) != x);
}

TEST_CASE("fields with different laws are monotonically coupled") {
  WeightField lo(DistributionSpec::parse("gaussian:0,1"), 2, 5);
  WeightField hi(DistributionSpec::parse("gaussian:1,1"), 2, 5);
  for (const auto& v : l1_ball(2, 6)) CHECK(lo.sample(v) <= hi.sample(v));
}

TEST_CASE("field values pass a KS test and are uncorrelated") {
  for (const char* s : {"gaussian:0,1", "shifted_exponential:2,1,negative", "pareto_tail:3,positive,1"}) {
    CAPTURE(s);
    const auto spec = DistributionSpec::parse(s);
    WeightField f(spec, 2, 2024);
    std::vector<double> xs;
    std::vector<double> right;
    for (int i = -70; i < 70; ++i) {
      for (int j = -70; j < 70; ++j) {
        xs.push_back(f.sample(Vertex{i, j}));
        right.push_back(f.sample(Vertex{i + 1, j}));
      }
    }
    const double n = static_cast<double>(xs.size());
    CHECK(ks_statistic(xs, spec) < 1.63 / std::sqrt(n));

    // Rank correlation, so heavy tails do not matter.
    auto ranks = [](const std::vector<double>& v) {
      std::vector<std::size_t> idx(v.size());
      for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
      std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] < v[b]; });
      std::vector<double> r(v.size());
      for (std::size_t k = 0; k < idx.size(); ++k) r[idx[k]] = static_cast<double>(k);
      return r;
    };
    const auto a = ranks(xs);
    const auto b = ranks(right);
    const double mean = (n - 1) / 2;
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      num += (a[i] - mean) * (b[i] - mean);
      den += (a[i] - mean) * (a[i] - mean);
    }
    CHECK(std::abs(num / den) < 4.0 / std::sqrt(n));
  }
}

TEST_CASE("discrete laws have the right frequencies") {
  WeightField f(DistributionSpec::parse("two_point:1,10,0.3"), 2, 77);
  int low = 0;
  int total = 0;
  for (int i = -60; i < 60; ++i) {
    for (int j = -60; j < 60; ++j) {
      const double x = f.sample(Vertex{i, j});
      REQUIRE((x == 1.0 || x == -10.0));
      low += x == -10.0;
      ++total;
    }
  }
  CHECK(std::abs(low - 0.3 * total) < 4 * std::sqrt(total * 0.21));
}

TEST_CASE("overrides") {
  auto f = WeightField::with_overrides(DistributionSpec::parse("constant:-1"), 2, 0, {{Vertex{1, 0}, 5.0}});
  CHECK(f.sample(Vertex{1, 0}) == 5.0);
  CHECK(f.sample(Vertex{0, 1}) == -1.0);
}

TEST_CASE("path weight") {
  WeightField c(DistributionSpec::parse("constant:2"), 2, 0);
  const auto p5 = SelfAvoidingPath::from_vertices({{0, 0}, {1, 0}, {2, 0}, {2, 1}, {2, 2}});
  CHECK(path_weight(p5, c) == 10.0);

  WeightField g(DistributionSpec::parse("gaussian:0,1"), 2, 3);
  CHECK(path_weight(SelfAvoidingPath(Vertex{0, 0}), g) == g.sample(Vertex{0, 0}));

  auto f = WeightField::with_overrides(DistributionSpec::parse("constant:0"), 2, 0,
                                       {{Vertex{0, 0}, 1.0}, {Vertex{1, 0}, -5.0}});
  CHECK(path_weight(SelfAvoidingPath::from_vertices({{0, 0}, {1, 0}}), f, TruncationLevel(2)) == -1.0);
}
