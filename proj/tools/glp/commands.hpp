#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace glpcli {

struct Common {
  std::string out = "glp_out";
  unsigned threads = 1;
};

struct SolveConfig {
  std::string dist;
  int d = 2;
  int n = 0;
  std::uint64_t seed = 0;
  std::optional<double> m;  // absent or +inf: untruncated
  std::uint64_t node_budget = 100'000'000;
  std::size_t warm_start = 8;
  std::size_t beam = 0;  // > 0: beam search of this width instead of the exact solver
};

struct EstimateConfig {
  std::string dist;
  int d = 2;
  std::vector<int> n_grid;
  std::vector<double> m_grid;  // +inf for untruncated
  std::uint64_t replicas = 0;
  std::uint64_t seed = 0;
  std::uint64_t node_budget = 100'000'000;
  std::size_t warm_start = 8;
  std::optional<double> target_precision;
};

struct VerifyConfig {
  std::string check;
  nlohmann::json params = nlohmann::json::object();  // without threads
};

int run_solve(const Common& common, const SolveConfig& cfg, std::ostream& out);
int run_estimate(const Common& common, const EstimateConfig& cfg, std::ostream& out);
int run_verify(const Common& common, const VerifyConfig& cfg, std::ostream& out);
int run_plot(const Common& common, std::ostream& out);

}  // namespace glpcli
