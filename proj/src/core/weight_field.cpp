#include "weight_field.hpp"

#include <cstdlib>

#include "error.hpp"
#include "philox.hpp"

namespace glp {

namespace {

std::uint32_t zigzag16(std::int32_t x) {
  if (x <= -(1 << 15) || x >= (1 << 15)) {
    throw Error(ErrorCode::invalid_argument, "coordinate out of range for d > 4 encoding");
  }
  return static_cast<std::uint32_t>((x << 1) ^ (x >> 31)) & 0xffffu;
}

// Injective packing of a vertex into a 128-bit counter: one word per axis for
// d <= 4, two 16-bit zigzag coordinates per word for 4 < d <= 8.
Philox4x32::Counter encode(const Vertex& v) {
  Philox4x32::Counter c{0u, 0u, 0u, 0u};
  const int d = v.dimension();
  if (d <= 4) {
    for (int i = 0; i < d; ++i) c[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(v[i]);
    return c;
  }
  for (int i = 0; i < d; ++i) {
    c[static_cast<std::size_t>(i / 2)] |= zigzag16(v[i]) << (16 * (i % 2));
  }
  return c;
}

// Fields of different dimension get unrelated keys.
std::uint64_t dimension_key(std::uint64_t seed, int d) {
  return seed ^ (0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(d));
}

}  // namespace

WeightField::WeightField(DistributionSpec spec, int dimension, std::uint64_t seed)
    : spec_(std::move(spec)), dim_(dimension), seed_(seed) {
  if (dimension < 1 || dimension > kMaxDimension) {
    throw Error(ErrorCode::invalid_argument, "dimension out of range");
  }
}

WeightField WeightField::with_overrides(DistributionSpec fallback, int dimension, std::uint64_t seed,
                                        std::unordered_map<Vertex, double, VertexHash> overrides) {
  WeightField f(std::move(fallback), dimension, seed);
  f.overrides_ = std::make_shared<const std::unordered_map<Vertex, double, VertexHash>>(std::move(overrides));
  return f;
}

double WeightField::uniform_at(const Vertex& v) const {
  if (v.dimension() != dim_) throw Error(ErrorCode::invalid_argument, "vertex dimension mismatch");
  const std::uint64_t key = dimension_key(seed_, dim_);
  const auto out = Philox4x32::generate(encode(v), philox_key(key));
  return to_open_unit(out[0], out[1]);
}

double WeightField::sample(const Vertex& v) const {
  if (overrides_) {
    if (auto it = overrides_->find(v); it != overrides_->end()) return it->second;
  }
  if (auto it = cache_.find(v); it != cache_.end()) return it->second;
  const double x = spec_.quantile(uniform_at(v));
  cache_.emplace(v, x);
  return x;
}

double path_weight(const SelfAvoidingPath& p, const WeightField& field, TruncationLevel trunc) {
  double s = 0.0;
  for (const Vertex& v : p.vertices()) s += field.value(v, trunc);
  return s;
}

}  // namespace glp
