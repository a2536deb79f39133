#include "estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "error.hpp"
#include "parallel.hpp"
#include "philox.hpp"

namespace glp {

std::uint64_t replica_field_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t replica) {
  return derive_seed(master, stream, replica);
}

MeanAndError mean_and_stderr(std::span<const double> xs) {
  MeanAndError out;
  if (xs.empty()) return out;
  double s = 0.0;
  for (double x : xs) s += x;
  out.mean = s / static_cast<double>(xs.size());
  if (xs.size() < 2) return out;
  double ss = 0.0;
  for (double x : xs) ss += (x - out.mean) * (x - out.mean);
  const double var = ss / static_cast<double>(xs.size() - 1);
  out.stderr_ = std::sqrt(var / static_cast<double>(xs.size()));
  return out;
}

std::vector<ReplicaOutcome> solve_replicas(const DistributionSpec& spec, int d, int n, TruncationLevel m,
                                           std::uint64_t first, std::uint64_t count, std::uint64_t seed,
                                           const RunOptions& options) {
  std::vector<ReplicaOutcome> out(count);
  parallel_for(count, options.threads, [&](std::size_t i) {
    const WeightField field(spec, d, replica_field_seed(seed, options.stream, first + i));
    const SolverResult r = max_weight_path(field, n, m, options.solver);
    const GreedyPathStats stats = greedy_stats(r, field, m);
    out[i] = {r.value, r.exact, stats.n_below, stats.defect};
  });
  return out;
}

EstimateRow summarize(int n, TruncationLevel m, std::span<const ReplicaOutcome> outcomes) {
  if (outcomes.size() < 2) throw Error(ErrorCode::invalid_argument, "need at least 2 replicas");
  std::vector<double> scaled;
  scaled.reserve(outcomes.size());
  std::uint64_t exact = 0;
  for (const auto& o : outcomes) {
    scaled.push_back(o.value / n);
    if (o.exact) ++exact;
  }
  const MeanAndError me = mean_and_stderr(scaled);
  EstimateRow row;
  row.n = n;
  row.m = m;
  row.replicas = outcomes.size();
  row.mean = me.mean;
  row.stderr_ = me.stderr_;
  row.ci_low = me.mean - kZ95 * me.stderr_;
  row.ci_high = me.mean + kZ95 * me.stderr_;
  row.exact_fraction = static_cast<double>(exact) / static_cast<double>(outcomes.size());
  return row;
}

EstimateRow estimate_mn(const DistributionSpec& spec, int d, int n, TruncationLevel m, std::uint64_t replicas,
                        std::uint64_t seed, const RunOptions& options) {
  if (replicas < 2) throw Error(ErrorCode::invalid_argument, "need at least 2 replicas");
  const auto outcomes = solve_replicas(spec, d, n, m, 0, replicas, seed, options);
  return summarize(n, m, outcomes);
}

TruncatedConstant truncated_constant_from_rows(std::vector<EstimateRow> rows) {
  if (rows.empty()) throw Error(ErrorCode::invalid_argument, "no rows");
  std::sort(rows.begin(), rows.end(), [](const EstimateRow& a, const EstimateRow& b) { return a.n < b.n; });
  TruncatedConstant tc;
  tc.m = rows.front().m;
  const EstimateRow& last = rows.back();
  tc.estimate = last.mean;
  tc.drift = rows.size() >= 2 ? std::fabs(last.mean - rows[rows.size() - 2].mean) : 0.0;
  tc.halfwidth = kZ95 * last.stderr_ + tc.drift;
  tc.rows = std::move(rows);
  return tc;
}

namespace {

void check_n_grid(std::span<const int> n_grid) {
  if (n_grid.size() < 3) throw Error(ErrorCode::invalid_argument, "n grid needs at least 3 points");
  for (std::size_t i = 1; i < n_grid.size(); ++i) {
    if (n_grid[i] <= n_grid[i - 1]) throw Error(ErrorCode::invalid_argument, "n grid must be increasing");
  }
}

}  // namespace

TruncatedConstant estimate_truncated_constant(const DistributionSpec& spec, int d, TruncationLevel m,
                                              std::span<const int> n_grid, std::uint64_t replicas,
                                              std::uint64_t seed, const RunOptions& options) {
  check_n_grid(n_grid);
  std::vector<EstimateRow> rows;
  for (int n : n_grid) rows.push_back(estimate_mn(spec, d, n, m, replicas, seed, options));
  return truncated_constant_from_rows(std::move(rows));
}

LimitEstimate assemble_limit(const DistributionSpec& spec, std::vector<TruncatedConstant> per_m,
                             std::optional<double> target_precision) {
  if (per_m.empty()) throw Error(ErrorCode::invalid_argument, "no truncation levels");
  std::sort(per_m.begin(), per_m.end(),
            [](const TruncatedConstant& a, const TruncatedConstant& b) { return a.m.m() < b.m.m(); });
  LimitEstimate out;
  const TruncatedConstant& last = per_m.back();
  out.estimate = last.estimate;
  out.halfwidth = last.halfwidth;
  double overshoot = 0.0;
  try {
    overshoot = last.m.active() ? overshoot_mean(spec, last.m.m()) : 0.0;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::infinite_moment) throw;
    overshoot = std::numeric_limits<double>::infinity();
  }
  out.bias_bound = 4.0 * overshoot;
  if (per_m.size() >= 2) out.bias_bound += std::fabs(last.estimate - per_m[per_m.size() - 2].estimate);
  for (std::size_t i = 1; i < per_m.size(); ++i) {
    if (per_m[i].estimate > per_m[i - 1].estimate + per_m[i].halfwidth + per_m[i - 1].halfwidth) {
      out.monotone_ok = false;
    }
  }
  out.mean_x0 = spec.mean();
  out.above_mean = out.estimate + out.halfwidth >= out.mean_x0;
  out.per_m = std::move(per_m);
  if (target_precision && !(out.bias_bound <= *target_precision)) {
    throw Error(ErrorCode::truncation_bias_too_large,
                "truncation bias bound " + format_double(out.bias_bound) + " exceeds target " +
                    format_double(*target_precision) + "; extend the m grid");
  }
  return out;
}

LimitEstimate estimate_limit(const DistributionSpec& spec, int d, std::span<const double> m_grid,
                             std::span<const int> n_grid, std::uint64_t replicas, std::uint64_t seed,
                             const RunOptions& options, std::optional<double> target_precision) {
  if (m_grid.empty()) throw Error(ErrorCode::invalid_argument, "m grid is empty");
  for (std::size_t i = 1; i < m_grid.size(); ++i) {
    if (m_grid[i] <= m_grid[i - 1]) throw Error(ErrorCode::invalid_argument, "m grid must be increasing");
  }
  std::vector<TruncatedConstant> per_m;
  for (double m : m_grid) {
    per_m.push_back(estimate_truncated_constant(spec, d, TruncationLevel(m), n_grid, replicas, seed, options));
  }
  return assemble_limit(spec, std::move(per_m), target_precision);
}

ErrorDecomposition error_decomposition(const DistributionSpec& spec, int d, int n, double m,
                                       std::uint64_t replicas, std::uint64_t seed, const RunOptions& options,
                                       std::optional<double> plug_in_truncated,
                                       std::optional<double> plug_in_limit) {
  if (replicas < 2) throw Error(ErrorCode::invalid_argument, "need at least 2 replicas");
  const TruncationLevel trunc(m);
  struct Pair {
    double untruncated;
    double truncated;
    double defect;
    double untruncated_weight_of_truncated_path;
  };
  std::vector<Pair> pairs(replicas);
  parallel_for(replicas, options.threads, [&](std::size_t r) {
    const WeightField field(spec, d, replica_field_seed(seed, options.stream, r));
    const SolverResult full = max_weight_path(field, n, TruncationLevel::none(), options.solver);
    const SolverResult cut = max_weight_path(field, n, trunc, options.solver);
    const GreedyPathStats stats = greedy_stats(cut, field, trunc);
    pairs[r] = {full.value, cut.value, stats.defect, path_weight(cut.path, field)};
  });

  ErrorDecomposition out;
  out.n = n;
  out.m = m;
  out.replicas = replicas;
  std::vector<double> full_scaled, cut_scaled, defect_scaled;
  for (const auto& p : pairs) {
    full_scaled.push_back(p.untruncated / n);
    cut_scaled.push_back(p.truncated / n);
    defect_scaled.push_back(p.defect / n);
  }
  out.plug_in_truncated = plug_in_truncated.value_or(mean_and_stderr(cut_scaled).mean);
  out.plug_in_limit = plug_in_limit.value_or(mean_and_stderr(full_scaled).mean);
  out.truncation_gap = std::fabs(out.plug_in_truncated - out.plug_in_limit);
  double lhs = 0.0, fluct = 0.0;
  for (std::size_t r = 0; r < pairs.size(); ++r) {
    const double l = std::fabs(full_scaled[r] - out.plug_in_limit);
    const double f = std::fabs(cut_scaled[r] - out.plug_in_truncated);
    lhs += l;
    fluct += f;
    const double scale = 1.0 + std::fabs(full_scaled[r]) + std::fabs(cut_scaled[r]) + defect_scaled[r];
    if (l > f + out.truncation_gap + defect_scaled[r] + 1e-12 * scale) ++out.inequality_violations;
    // M_n <= M_n^{>=-m} and M_n >= S(truncated greedy path) = M_n^{>=-m} - defect.
    const auto& p = pairs[r];
    const double tol = 1e-9 * (1.0 + std::fabs(p.truncated) + p.defect);
    if (p.untruncated > p.truncated + tol || p.untruncated + tol < p.untruncated_weight_of_truncated_path ||
        std::fabs(p.truncated - p.defect - p.untruncated_weight_of_truncated_path) > tol) {
      ++out.sandwich_violations;
    }
  }
  out.mean_lhs = lhs / static_cast<double>(replicas);
  out.mean_fluctuation = fluct / static_cast<double>(replicas);
  const MeanAndError de = mean_and_stderr(defect_scaled);
  out.mean_defect = de.mean;
  out.stderr_defect = de.stderr_;
  out.defect_bound = overshoot_mean(spec, m);
  out.defect_within_bound = out.mean_defect <= out.defect_bound + 3.0 * out.stderr_defect;
  out.pass = out.defect_within_bound && out.inequality_violations == 0 && out.sandwich_violations == 0;
  return out;
}

}  // namespace glp
