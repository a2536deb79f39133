#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <unordered_map>

#include "solver.hpp"

using namespace glp;

namespace {

struct Best {
  double value = -INFINITY;
  std::vector<Vertex> path;
};

// Exhaustive search written independently of the library enumerator: every
// extension is tried, and ties go to the lexicographically smaller sequence.
void exhaust(const WeightField& f, TruncationLevel t, std::vector<Vertex>& path, double weight, int remaining,
             Best& best) {
  if (remaining == 0) {
    if (weight > best.value || (weight == best.value && path < best.path)) best = {weight, path};
    return;
  }
  const Vertex last = path.back();
  for (int axis = 0; axis < last.dimension(); ++axis) {
    for (int step : {-1, 1}) {
      Vertex next = last;
      next[axis] += step;
      if (std::find(path.begin(), path.end(), next) != path.end()) continue;
      path.push_back(next);
      exhaust(f, t, path, weight + f.value(next, t), remaining - 1, best);
      path.pop_back();
    }
  }
}

Best oracle(const WeightField& f, int n, TruncationLevel t, std::vector<Vertex> prefix = {}) {
  if (prefix.empty()) prefix.push_back(Vertex::origin(f.dimension()));
  double w = 0.0;
  for (const auto& v : prefix) w += f.value(v, t);
  Best best;
  exhaust(f, t, prefix, w, n - static_cast<int>(prefix.size()), best);
  return best;
}

WeightField example_field() {
  return WeightField::with_overrides(DistributionSpec::parse("constant:-3"), 2, 0,
                                     {{Vertex{0, 0}, 1.0},
                                      {Vertex{1, 0}, 5.0},
                                      {Vertex{2, 0}, 3.0},
                                      {Vertex{1, 1}, -4.0},
                                      {Vertex{1, -1}, 2.0},
                                      {Vertex{-1, 0}, -2.0},
                                      {Vertex{0, 1}, 0.0},
                                      {Vertex{0, -1}, -1.0}});
}

}  // namespace

TEST_CASE("constant field") {
  WeightField c(DistributionSpec::parse("constant:2"), 2, 0);
  const auto r = max_weight_path(c, 7, TruncationLevel::none());
  CHECK(r.value == 14.0);
  CHECK(r.exact);
  CHECK(r.path.length() == 7);
  for (int d = 1; d <= 3; ++d) {
    WeightField cd(DistributionSpec::parse("constant:2"), d, 0);
    for (int n = 1; n <= 12; ++n) CHECK(max_weight_path(cd, n, TruncationLevel::none()).value == 2.0 * n);
  }
}

TEST_CASE("explicit n=3 field") {
  const auto f = example_field();
  const auto r = max_weight_path(f, 3, TruncationLevel::none());
  CHECK(r.value == 9.0);
  CHECK(r.path.vertices() == std::vector<Vertex>{{0, 0}, {1, 0}, {2, 0}});

  double best = -INFINITY;
  enumerate_saws(3, 2, [&](const SelfAvoidingPath& p) {
    best = std::max(best, path_weight(p, f));
    return true;
  });
  CHECK(best == 9.0);

  const auto b = beam_search(f, 3, 1, TruncationLevel::none());
  CHECK(b.value == 9.0);
  CHECK_FALSE(b.exact);
}

TEST_CASE("n=1 is the origin weight") {
  WeightField g(DistributionSpec::parse("gaussian:0,1"), 2, 11);
  const auto r = max_weight_path(g, 1, TruncationLevel::none());
  CHECK(r.value == g.sample(Vertex{0, 0}));
  CHECK(r.path.length() == 1);
}

TEST_CASE("branch and bound agrees with exhaustive search") {
  for (const char* s : {"bernoulli:0.5", "gaussian:0,1", "two_point:1,10,0.3", "uniform_int:-3,3"}) {
    const auto spec = DistributionSpec::parse(s);
    for (int d : {1, 2, 3}) {
      for (int n = 2; n <= (d == 3 ? 5 : 7); ++n) {
        for (std::uint64_t seed = 0; seed < 8; ++seed) {
          for (double m : {double(INFINITY), 0.0, 2.0}) {
            WeightField f(spec, d, seed);
            const TruncationLevel t = std::isinf(m) ? TruncationLevel::none() : TruncationLevel(m);
            const auto r = max_weight_path(f, n, t);
            const auto o = oracle(f, n, t);
            CAPTURE(s);
            CAPTURE(d);
            CAPTURE(n);
            CAPTURE(seed);
            CAPTURE(m);
            CHECK(r.exact);
            CHECK(r.value == doctest::Approx(o.value).epsilon(1e-12));
            CHECK(r.path.vertices() == o.path);
            CHECK(path_weight(r.path, f, t) == doctest::Approx(r.value).epsilon(1e-12));
          }
        }
      }
    }
  }
}

TEST_CASE("without warm start the answer is the same") {
  const auto spec = DistributionSpec::parse("gaussian:0,1");
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    WeightField f(spec, 2, seed);
    const auto a = max_weight_path(f, 8, TruncationLevel::none(), {100'000'000, 0});
    const auto b = max_weight_path(f, 8, TruncationLevel::none(), {100'000'000, 16});
    CHECK(a.value == b.value);
    CHECK(a.path == b.path);
  }
}

TEST_CASE("node budget") {
  WeightField f(DistributionSpec::parse("gaussian:0,1"), 2, 1);
  const auto full = max_weight_path(f, 10, TruncationLevel::none());
  const auto cut = max_weight_path(f, 10, TruncationLevel::none(), {5, 4});
  CHECK_FALSE(cut.exact);
  CHECK(cut.value <= full.value);
  CHECK(cut.path.length() == 10);
  CHECK(is_self_avoiding_path(cut.path.vertices()));
}

TEST_CASE("upper bound is admissible") {
  for (const char* s : {"gaussian:0,1", "two_point:1,10,0.3", "bernoulli:0.3"}) {
    const auto spec = DistributionSpec::parse(s);
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      WeightField f(spec, 2, seed);
      const int n = 7;
      for (double m : {double(INFINITY), 1.0}) {
        const TruncationLevel t = std::isinf(m) ? TruncationLevel::none() : TruncationLevel(m);
        for (int k = 1; k <= 4; ++k) {
          enumerate_saws(k, 2, [&](const SelfAvoidingPath& prefix) {
            const int remaining = n - k;
            const double bound = admissible_upper_bound(f, prefix, remaining, t);
            const auto best = oracle(f, n, t, prefix.vertices());
            if (std::isfinite(best.value)) CHECK(bound >= best.value - 1e-12);
            return true;
          });
        }
      }
    }
  }
}

TEST_CASE("upper bound special cases") {
  WeightField g(DistributionSpec::parse("gaussian:0,1"), 2, 8);
  const auto p = SelfAvoidingPath::from_vertices({{0, 0}, {0, 1}, {1, 1}});
  CHECK(admissible_upper_bound(g, p, 0, TruncationLevel::none()) == path_weight(p, g));
  WeightField c(DistributionSpec::parse("constant:3"), 2, 0);
  CHECK(admissible_upper_bound(c, p, 4, TruncationLevel::none()) == path_weight(p, c) + 12.0);
}

TEST_CASE("beam search") {
  const auto spec = DistributionSpec::parse("gaussian:0,1");
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    WeightField f(spec, 2, seed);
    const double exact = max_weight_path(f, 9, TruncationLevel::none()).value;
    double prev = -INFINITY;
    for (std::size_t w = 1; w <= 40; ++w) {
      const auto b = beam_search(f, 9, w, TruncationLevel::none());
      CHECK(b.value >= prev);
      CHECK(b.value <= exact);
      CHECK(is_self_avoiding_path(b.path.vertices()));
      prev = b.value;
    }
    WeightField small(spec, 2, seed);
    CHECK(beam_search(small, 5, 100, TruncationLevel::none()).value ==
          max_weight_path(small, 5, TruncationLevel::none()).value);
  }
  WeightField c(DistributionSpec::parse("constant:2"), 2, 0);
  for (std::size_t w : {1, 3, 50}) CHECK(beam_search(c, 6, w, TruncationLevel::none()).value == 12.0);
}

TEST_CASE("greedy stats") {
  WeightField b(DistributionSpec::parse("bernoulli:0.5"), 2, 1);
  const auto r = max_weight_path(b, 6, TruncationLevel(1));
  const auto st = greedy_stats(r, b, TruncationLevel(1));
  CHECK(st.n_below == 0);
  CHECK(st.defect == 0.0);

  WeightField t(DistributionSpec::parse("two_point:1,10,0.5"), 2, 3);
  for (int n = 2; n <= 8; ++n) {
    const auto res = max_weight_path(t, n, TruncationLevel(4));
    const auto s = greedy_stats(res, t, TruncationLevel(4));
    std::size_t low = 0;
    for (const auto& v : res.path.vertices()) low += t.sample(v) <= -4;
    CHECK(s.n_below == low);
    CHECK(s.defect == doctest::Approx(6.0 * static_cast<double>(low)));
    CHECK(res.value - s.defect == doctest::Approx(path_weight(res.path, t)));
  }
}

TEST_CASE("ball view") {
  WeightField g(DistributionSpec::parse("gaussian:0,1"), 2, 4);
  BallView view(g, 4, TruncationLevel(0.5));
  CHECK(view.radius() == 3);
  CHECK(view.size() == 25);
  CHECK(view.vertex(view.origin()) == Vertex{0, 0});
  for (int i = 0; i < view.size(); ++i) {
    CHECK(view.weight(i) == std::max(view.raw_weight(i), -0.5));
    CHECK(view.raw_weight(i) == g.sample(view.vertex(i)));
  }
  const auto top = view.top_within(view.origin(), 2);
  for (std::size_t k = 1; k < top.size(); ++k) CHECK(view.weight(top[k - 1]) >= view.weight(top[k]));
}
