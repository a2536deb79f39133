#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "lattice.hpp"
#include "weight_field.hpp"

namespace glp {

struct SolverResult {
  double value = 0.0;  // M_n, or M_n^{>=-m} under truncation
  SelfAvoidingPath path;  // lexicographically smallest maximizer when exact
  std::uint64_t nodes_expanded = 0;
  std::uint64_t nodes_pruned = 0;
  bool exact = false;
};

// N_n(m) and the defect sum over the truncated greedy path.
struct GreedyPathStats {
  std::size_t n_below = 0;
  double defect = 0.0;
};

struct SolverOptions {
  std::uint64_t node_budget = 100'000'000;
  // Width of the beam used to seed the incumbent; 0 disables the warm start.
  std::size_t warm_start_width = 8;
};

// Weights of the vertices a length-n path from the origin can reach (the L1
// ball of radius n - 1), indexed in vertex order.
class BallView {
public:
  BallView(const WeightField& field, int n, TruncationLevel trunc);

  int path_length() const noexcept { return n_; }
  int radius() const noexcept { return n_ - 1; }
  int size() const noexcept { return static_cast<int>(vertices_.size()); }
  int origin() const noexcept { return origin_; }
  const Vertex& vertex(int i) const { return vertices_[static_cast<std::size_t>(i)]; }
  double weight(int i) const { return weights_[static_cast<std::size_t>(i)]; }
  double raw_weight(int i) const { return raw_[static_cast<std::size_t>(i)]; }
  std::span<const int> neighbors(int i) const;
  int norm(int i) const { return norms_[static_cast<std::size_t>(i)]; }
  bool exact_arithmetic() const noexcept { return exact_arithmetic_; }

  // Indices of up to n vertices of ball(i, r) \ {i}, restricted to this view,
  // with the largest weights first (ties by index). r must be <= radius() - norm(i).
  std::span<const int> top_within(int i, int r) const;

  // Best completion bound: sum of the `remaining` largest weights in
  // top_within(i, remaining) that are not flagged in `occupied`; -inf when too
  // few free vertices remain.
  double completion_bound(int i, int remaining, std::span<const std::uint8_t> occupied) const;

private:
  int n_;
  int origin_ = 0;
  bool exact_arithmetic_ = true;
  std::vector<Vertex> vertices_;
  std::vector<double> weights_;
  std::vector<double> raw_;
  std::vector<int> norms_;
  std::vector<int> nbr_start_;
  std::vector<int> nbr_;
  std::vector<std::uint32_t> top_start_;  // (i * (radius + 1) + r) -> [start, start + len)
  std::vector<std::uint32_t> top_len_;
  std::vector<int> top_;
};

// Exact M_n (or M_n^{>=-m}) by depth-first branch-and-bound in vertex order.
// On budget exhaustion the result has exact = false and carries the best path
// found, a lower bound.
SolverResult max_weight_path(const WeightField& field, int n, TruncationLevel trunc,
                             const SolverOptions& options = {});
SolverResult max_weight_path(const BallView& view, const SolverOptions& options = {});

// Partial weight plus the `remaining` largest truncated weights in the L1 ball
// of radius `remaining` around the endpoint, excluding path vertices. Never
// below the best completion.
double admissible_upper_bound(const WeightField& field, const SelfAvoidingPath& partial, int remaining,
                              TruncationLevel trunc);

inline constexpr std::size_t kMaxBeamWidth = std::size_t{1} << 24;

// Nested beam search: the beam of width w is always a subset of the beam of
// width w + 1, so the returned value is nondecreasing in width.
SolverResult beam_search(const WeightField& field, int n, std::size_t width, TruncationLevel trunc);
SolverResult beam_search(const BallView& view, std::size_t width);

GreedyPathStats greedy_stats(const SolverResult& result, const WeightField& field, TruncationLevel m);

}  // namespace glp
