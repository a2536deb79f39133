#include <doctest.h>

#include <algorithm>
#include <set>

#include "error.hpp"
#include "lattice.hpp"

using namespace glp;

namespace {

// Counts self-avoiding walks by a plain recursive search over coordinate vectors.
std::uint64_t count_walks(std::vector<std::vector<int>>& path, int remaining, int d) {
  if (remaining == 0) return 1;
  std::uint64_t total = 0;
  for (int axis = 0; axis < d; ++axis) {
    for (int step : {-1, 1}) {
      auto next = path.back();
      next[static_cast<std::size_t>(axis)] += step;
      if (std::find(path.begin(), path.end(), next) != path.end()) continue;
      path.push_back(next);
      total += count_walks(path, remaining - 1, d);
      path.pop_back();
    }
  }
  return total;
}

std::uint64_t oracle_count(int n, int d) {
  std::vector<std::vector<int>> path{std::vector<int>(static_cast<std::size_t>(d), 0)};
  return count_walks(path, n - 1, d);
}

}  // namespace

TEST_CASE("neighbors in fixed order") {
  CHECK(neighbors(Vertex{0, 0}) == std::vector<Vertex>{{-1, 0}, {0, -1}, {0, 1}, {1, 0}});
  CHECK(neighbors(Vertex{0}) == std::vector<Vertex>{{-1}, {1}});

  const auto nb = neighbors(Vertex{1, 2, 3});
  REQUIRE(nb.size() == 6);
  CHECK(std::is_sorted(nb.begin(), nb.end()));
  for (const auto& w : nb) CHECK(l1_distance(w, Vertex{1, 2, 3}) == 1);
}

TEST_CASE("path_extend") {
  const SelfAvoidingPath p(Vertex{0, 0});
  const auto q = path_extend(p, Vertex{1, 0});
  CHECK(q.vertices() == std::vector<Vertex>{{0, 0}, {1, 0}});
  CHECK(q.length() == 2);

  try {
    path_extend(q, Vertex{0, 0});
    FAIL("revisit accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::not_self_avoiding);
  }
  try {
    path_extend(p, Vertex{2, 0});
    FAIL("long step accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::not_adjacent);
  }
  CHECK_THROWS_AS(SelfAvoidingPath::from_vertices({{0, 0}, {1, 1}}), Error);
  CHECK(is_self_avoiding_path(std::vector<Vertex>{{0, 0}, {0, 1}, {1, 1}}));
  CHECK_FALSE(is_self_avoiding_path(std::vector<Vertex>{{0, 0}, {0, 1}, {0, 0}}));
}

TEST_CASE("vertex order is lexicographic") {
  CHECK(Vertex{-1, 5} < Vertex{0, -3});
  CHECK(Vertex{0, -1} < Vertex{0, 0});
  CHECK(Vertex{2, 0}.norm1() == 2);
  CHECK(Vertex{-2, 3}.to_string() == "(-2,3)");
}

TEST_CASE("self-avoiding path counts") {
  CHECK(enumerate_saws(1, 2, [](const SelfAvoidingPath& p) {
          CHECK(p.vertices() == std::vector<Vertex>{{0, 0}});
          return true;
        }) == 1);
  CHECK(collect_saws(3, 2).size() == 12);
  CHECK(collect_saws(5, 2).size() == 100);
  for (int d = 1; d <= 3; ++d) {
    for (int n = 1; n <= (d == 3 ? 5 : 7); ++n) {
      CAPTURE(d);
      CAPTURE(n);
      CHECK(collect_saws(n, d).size() == oracle_count(n, d));
    }
  }
}

TEST_CASE("enumeration is lexicographic and distinct") {
  const auto paths = collect_saws(5, 2);
  CHECK(std::is_sorted(paths.begin(), paths.end()));
  std::set<std::vector<Vertex>> seen;
  for (const auto& p : paths) {
    CHECK(is_self_avoiding_path(p.vertices()));
    CHECK(p.front() == Vertex{0, 0});
    seen.insert(p.vertices());
  }
  CHECK(seen.size() == paths.size());
}

TEST_CASE("enumeration budget") {
  try {
    collect_saws(8, 2, 100);
    FAIL("budget ignored");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::resource_bound);
  }
  std::uint64_t calls = 0;
  enumerate_saws(6, 2, [&](const SelfAvoidingPath&) { return ++calls < 5; });
  CHECK(calls == 5);
}

TEST_CASE("l1 ball") {
  const auto ball = l1_ball(2, 2);
  CHECK(ball.size() == 13);
  CHECK(std::is_sorted(ball.begin(), ball.end()));
  CHECK(l1_ball(3, 1).size() == 7);
  CHECK(l1_ball(1, 4).size() == 9);
}
