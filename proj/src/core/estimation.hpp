#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "distribution.hpp"
#include "solver.hpp"

namespace glp {

struct RunOptions {
  unsigned threads = 1;
  SolverOptions solver;
  // Seed stream shared by every cell of an experiment; replica r of any
  // (n, m) cell sees the field keyed by derive_seed(seed, stream, r), which is
  // what couples truncation levels and path lengths sample by sample.
  std::uint64_t stream = 0;
};

std::uint64_t replica_field_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t replica);

struct ReplicaOutcome {
  double value = 0.0;  // M_n or M_n^{>=-m} (not divided by n)
  bool exact = true;
  std::size_t n_below = 0;  // N_n(m) along the returned path
  double defect = 0.0;
};

// Solves replicas [first, first + count) of one (n, m) cell.
std::vector<ReplicaOutcome> solve_replicas(const DistributionSpec& spec, int d, int n, TruncationLevel m,
                                           std::uint64_t first, std::uint64_t count, std::uint64_t seed,
                                           const RunOptions& options = {});

struct EstimateRow {
  int n = 0;
  TruncationLevel m = TruncationLevel::none();
  std::uint64_t replicas = 0;
  double mean = 0.0;  // of value / n
  double stderr_ = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double exact_fraction = 0.0;
};

inline constexpr double kZ95 = 1.959963984540054;

// Fold in replica order; requires at least 2 outcomes.
EstimateRow summarize(int n, TruncationLevel m, std::span<const ReplicaOutcome> outcomes);

EstimateRow estimate_mn(const DistributionSpec& spec, int d, int n, TruncationLevel m, std::uint64_t replicas,
                        std::uint64_t seed, const RunOptions& options = {});

struct TruncatedConstant {
  TruncationLevel m = TruncationLevel::none();
  std::vector<EstimateRow> rows;  // one per n, increasing
  double estimate = 0.0;          // mean at the largest n
  double drift = 0.0;             // |mean(n_max) - mean(n_prev)|
  double halfwidth = 0.0;         // z * stderr + drift
};

TruncatedConstant truncated_constant_from_rows(std::vector<EstimateRow> rows);

TruncatedConstant estimate_truncated_constant(const DistributionSpec& spec, int d, TruncationLevel m,
                                              std::span<const int> n_grid, std::uint64_t replicas,
                                              std::uint64_t seed, const RunOptions& options = {});

struct LimitEstimate {
  std::vector<TruncatedConstant> per_m;  // increasing m
  double estimate = 0.0;                 // at the largest m
  double halfwidth = 0.0;
  double bias_bound = 0.0;  // 4 * overshoot_mean(m_max) + |last two estimates|
  double mean_x0 = 0.0;     // E X_0, the lower bound for the limit
  bool above_mean = true;   // estimate + halfwidth >= E X_0
  bool monotone_ok = true;  // nonincreasing in m within combined half-widths
};

// Throws Error{truncation_bias_too_large} if target_precision is set and the
// bias bound exceeds it.
LimitEstimate assemble_limit(const DistributionSpec& spec, std::vector<TruncatedConstant> per_m,
                             std::optional<double> target_precision = std::nullopt);

LimitEstimate estimate_limit(const DistributionSpec& spec, int d, std::span<const double> m_grid,
                             std::span<const int> n_grid, std::uint64_t replicas, std::uint64_t seed,
                             const RunOptions& options = {}, std::optional<double> target_precision = std::nullopt);

struct ErrorDecomposition {
  int n = 0;
  double m = 0.0;
  std::uint64_t replicas = 0;
  double plug_in_truncated = 0.0;  // stands in for M^{>=-m}
  double plug_in_limit = 0.0;      // stands in for M
  double mean_lhs = 0.0;           // |M_n/n - M|
  double mean_fluctuation = 0.0;   // |M_n^{>=-m}/n - M^{>=-m}|
  double truncation_gap = 0.0;     // |M^{>=-m} - M|
  double mean_defect = 0.0;        // defect / n
  double stderr_defect = 0.0;
  double defect_bound = 0.0;       // overshoot_mean(m)
  std::uint64_t inequality_violations = 0;
  std::uint64_t sandwich_violations = 0;
  bool defect_within_bound = true;
  bool pass = true;
};

ErrorDecomposition error_decomposition(const DistributionSpec& spec, int d, int n, double m,
                                       std::uint64_t replicas, std::uint64_t seed, const RunOptions& options = {},
                                       std::optional<double> plug_in_truncated = std::nullopt,
                                       std::optional<double> plug_in_limit = std::nullopt);

struct MeanAndError {
  double mean = 0.0;
  double stderr_ = 0.0;
};

MeanAndError mean_and_stderr(std::span<const double> xs);

}  // namespace glp
