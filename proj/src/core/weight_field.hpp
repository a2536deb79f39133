#pragma once

#include <cstdint>
#include <memory>
#include <unordered_map>

#include "distribution.hpp"
#include "lattice.hpp"

namespace glp {

// Lazily sampled i.i.d. field {X_v}. The value at v is a pure function of
// (spec, seed, v): a Philox counter keyed by the seed and the vertex
// coordinates feeds the inverse CDF. Truncation is applied on read, so all
// truncation levels see the same realization.
//
// The cache is not synchronized; give each worker its own field.
class WeightField {
public:
  WeightField(DistributionSpec spec, int dimension, std::uint64_t seed);

  // A field whose values at the listed vertices are fixed; every other vertex
  // falls back to the sampled value.
  static WeightField with_overrides(DistributionSpec fallback, int dimension, std::uint64_t seed,
                                    std::unordered_map<Vertex, double, VertexHash> overrides);

  const DistributionSpec& spec() const noexcept { return spec_; }
  int dimension() const noexcept { return dim_; }
  std::uint64_t seed() const noexcept { return seed_; }

  // X_v, untruncated.
  double sample(const Vertex& v) const;
  double value(const Vertex& v, TruncationLevel t) const { return truncate(sample(v), t); }

  // The uniform variate behind X_v (no cache, no overrides).
  double uniform_at(const Vertex& v) const;

private:
  DistributionSpec spec_;
  int dim_;
  std::uint64_t seed_;
  std::shared_ptr<const std::unordered_map<Vertex, double, VertexHash>> overrides_;
  mutable std::unordered_map<Vertex, double, VertexHash> cache_;
};

inline double sample_weight(const WeightField& field, const Vertex& v) { return field.sample(v); }

// Sum over the path of the (possibly truncated) weights, accumulated in path order.
double path_weight(const SelfAvoidingPath& p, const WeightField& field,
                   TruncationLevel trunc = TruncationLevel::none());

}  // namespace glp
