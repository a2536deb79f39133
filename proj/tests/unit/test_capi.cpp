#include <doctest.h>

#include <greedylattice/greedylattice.h>

#include <cmath>
#include <cstring>
#include <json.hpp>
#include <string>
#include <vector>

namespace {

std::string take(char* s) {
  std::string out = s != nullptr ? s : "";
  glp_string_free(s);
  return out;
}

}  // namespace

TEST_CASE("status names and errors") {
  CHECK(std::string(glp_status_name(GLP_OK)) == "OK");
  CHECK(std::string(glp_status_name(GLP_INFINITE_MOMENT)) == "InfiniteMoment");
  CHECK(std::strlen(glp_version()) > 0);

  glp_field* f = nullptr;
  CHECK(glp_field_create("gaussian:0,-1", 2, 1, &f) == GLP_INVALID_ARGUMENT);
  CHECK(f == nullptr);
  CHECK(std::strlen(glp_last_error()) > 0);
  CHECK(glp_field_create(nullptr, 2, 1, &f) == GLP_INVALID_ARGUMENT);
  CHECK(glp_field_create("gaussian:0,1", 0, 1, &f) == GLP_INVALID_ARGUMENT);
  double x = 0;
  CHECK(glp_tail_prob("bogus:1", 1, &x) == GLP_PARSE_ERROR);
}

TEST_CASE("distribution helpers") {
  char* s = nullptr;
  REQUIRE(glp_distribution_canonical("two_point:a_plus=1,a_minus=10,q=0.5", &s) == GLP_OK);
  CHECK(take(s) == "two_point:1,10,0.5");
  double x = 0;
  REQUIRE(glp_tail_prob("two_point:1,10,0.3", 4, &x) == GLP_OK);
  CHECK(x == doctest::Approx(0.3));
  REQUIRE(glp_overshoot_mean("two_point:1,10,0.3", 4, &x) == GLP_OK);
  CHECK(x == doctest::Approx(1.8));
  REQUIRE(glp_distribution_mean("two_point:1,10,0.3", &x) == GLP_OK);
  CHECK(x == doctest::Approx(-2.3));
  CHECK(glp_overshoot_mean("pareto_tail:1,negative,1", 1, &x) == GLP_INFINITE_MOMENT);
  REQUIRE(glp_hypothesis_report("gaussian:0,1", 2, 1, &s) == GLP_OK);
  const auto j = nlohmann::json::parse(take(s));
  CHECK(j.contains("mode"));
}

TEST_CASE("field and solve") {
  glp_field* f = nullptr;
  REQUIRE(glp_field_create("constant:2", 2, 1, &f) == GLP_OK);
  glp_solution* sol = nullptr;
  REQUIRE(glp_solve(f, 7, INFINITY, 1000000, 8, &sol) == GLP_OK);
  CHECK(glp_solution_value(sol) == 14.0);
  CHECK(glp_solution_length(sol) == 7);
  CHECK(glp_solution_dimension(sol) == 2);
  CHECK(glp_solution_exact(sol) == 1);
  std::vector<int32_t> coords(14);
  CHECK(glp_solution_path(sol, coords.data(), 13) == GLP_INVALID_ARGUMENT);
  REQUIRE(glp_solution_path(sol, coords.data(), coords.size()) == GLP_OK);
  CHECK(coords[0] == 0);
  CHECK(coords[1] == 0);
  CHECK(glp_solution_n_below(sol) == 0);
  glp_solution_destroy(sol);

  const int32_t v[2] = {3, 4};
  double x = 0;
  REQUIRE(glp_field_sample(f, v, &x) == GLP_OK);
  CHECK(x == 2.0);
  CHECK(glp_solve(f, 0, INFINITY, 10, 0, &sol) == GLP_INVALID_ARGUMENT);
  glp_field_destroy(f);
  glp_field_destroy(nullptr);
  glp_solution_destroy(nullptr);
}

TEST_CASE("budget exhaustion still returns a path") {
  glp_field* f = nullptr;
  REQUIRE(glp_field_create("gaussian:0,1", 2, 1, &f) == GLP_OK);
  glp_solution* sol = nullptr;
  CHECK(glp_solve(f, 10, INFINITY, 5, 4, &sol) == GLP_BUDGET_EXCEEDED);
  REQUIRE(sol != nullptr);
  CHECK(glp_solution_exact(sol) == 0);
  CHECK(glp_solution_length(sol) == 10);
  glp_solution_destroy(sol);

  CHECK(glp_beam_search(f, 10, -1, static_cast<size_t>(-1), &sol) == GLP_RESOURCE_BOUND);
  REQUIRE(glp_beam_search(f, 10, -1, 4, &sol) == GLP_OK);
  CHECK(glp_solution_exact(sol) == 0);
  glp_solution_destroy(sol);
  glp_field_destroy(f);
}

TEST_CASE("replicas, summaries and limits") {
  glp_run_options opt;
  glp_run_options_default(&opt);
  CHECK(opt.threads == 1);
  std::vector<glp_replica> reps(20);
  REQUIRE(glp_solve_replicas("constant:2", 2, 5, INFINITY, 0, 20, 7, &opt, reps.data()) == GLP_OK);
  for (const auto& r : reps) CHECK(r.value == 10.0);
  std::vector<glp_estimate_row> rows(3);
  for (int i = 0; i < 3; ++i) {
    REQUIRE(glp_summarize(4 + i, 0, reps.data(), reps.size(), &rows[static_cast<std::size_t>(i)]) == GLP_OK);
  }
  CHECK(rows[0].replicas == 20);
  char* s = nullptr;
  REQUIRE(glp_limit_estimate("constant:2", rows.data(), rows.size(), 0, &s) == GLP_OK);
  const auto j = nlohmann::json::parse(take(s));
  CHECK(j.contains("estimate"));
  CHECK(j["per_m"].size() == 1);
  CHECK(glp_summarize(4, 0, reps.data(), 1, &rows[0]) == GLP_INVALID_ARGUMENT);
}

TEST_CASE("verify") {
  char* s = nullptr;
  int passed = 0;
  REQUIRE(glp_verify("stirling", "{\"nmax\": 8}", &s, &passed) == GLP_OK);
  CHECK(passed == 1);
  const auto j = nlohmann::json::parse(take(s));
  REQUIRE(j.is_array());
  CHECK(j[0]["check"] == "stirling");
  CHECK(glp_verify("nope", nullptr, &s, &passed) == GLP_UNKNOWN_CHECK);
  CHECK(glp_verify("stirling", "{bad json", &s, &passed) == GLP_PARSE_ERROR);
}
