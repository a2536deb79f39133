#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace glp {

inline constexpr int kMaxDimension = 8;

// A point of Z^d. Ordering is coordinatewise lexicographic; this is the fixed
// total order used for neighbour iteration and greedy-path tie-breaking.
class Vertex {
public:
  Vertex() = default;
  explicit Vertex(int dimension);
  Vertex(std::initializer_list<std::int32_t> coords);
  explicit Vertex(std::span<const std::int32_t> coords);

  static Vertex origin(int dimension) { return Vertex(dimension); }

  int dimension() const noexcept { return dim_; }
  std::int32_t operator[](int i) const noexcept { return coords_[static_cast<std::size_t>(i)]; }
  std::int32_t& operator[](int i) noexcept { return coords_[static_cast<std::size_t>(i)]; }
  std::span<const std::int32_t> coords() const noexcept {
    return {coords_.data(), static_cast<std::size_t>(dim_)};
  }

  // L1 norm.
  std::int64_t norm1() const noexcept;

  std::string to_string() const;

  friend auto operator<=>(const Vertex&, const Vertex&) = default;
  friend bool operator==(const Vertex&, const Vertex&) = default;

private:
  std::uint8_t dim_ = 0;
  std::array<std::int32_t, kMaxDimension> coords_{};
};

std::int64_t l1_distance(const Vertex& a, const Vertex& b) noexcept;

struct VertexHash {
  std::size_t operator()(const Vertex& v) const noexcept;
};

// The 2d lattice neighbours of v, sorted by the vertex order.
std::vector<Vertex> neighbors(const Vertex& v);

// A self-avoiding path. Its length is the number of vertices, so a path of
// length 1 is a single vertex.
class SelfAvoidingPath {
public:
  SelfAvoidingPath() = default;
  explicit SelfAvoidingPath(Vertex start) : vertices_{start} {}

  // Validates adjacency and distinctness; throws glp::Error otherwise.
  static SelfAvoidingPath from_vertices(std::vector<Vertex> vertices);

  std::size_t length() const noexcept { return vertices_.size(); }
  bool empty() const noexcept { return vertices_.empty(); }
  int dimension() const noexcept { return vertices_.empty() ? 0 : vertices_.front().dimension(); }
  const Vertex& front() const { return vertices_.front(); }
  const Vertex& back() const { return vertices_.back(); }
  const std::vector<Vertex>& vertices() const noexcept { return vertices_; }
  bool contains(const Vertex& v) const;

  std::string to_string() const;

  friend auto operator<=>(const SelfAvoidingPath&, const SelfAvoidingPath&) = default;
  friend bool operator==(const SelfAvoidingPath&, const SelfAvoidingPath&) = default;

private:
  friend SelfAvoidingPath path_extend(const SelfAvoidingPath&, const Vertex&);
  std::vector<Vertex> vertices_;
};

// Appends v. Throws Error{not_adjacent} or Error{not_self_avoiding}.
SelfAvoidingPath path_extend(const SelfAvoidingPath& p, const Vertex& v);

// Structural check of the path invariants (distinct, unit steps, one dimension).
bool is_self_avoiding_path(std::span<const Vertex> vertices);

// Calls visit(path) for every self-avoiding path of exactly n vertices starting
// at the origin of Z^d, in lexicographic order of the vertex sequences.
// Throws Error{resource_bound} once more than max_paths paths would be produced.
// visit may return false to stop early. Returns the number of paths visited.
std::uint64_t enumerate_saws(int n, int d,
                             const std::function<bool(const SelfAvoidingPath&)>& visit,
                             std::uint64_t max_paths = UINT64_MAX);

std::vector<SelfAvoidingPath> collect_saws(int n, int d, std::uint64_t max_paths = 10'000'000);

// All vertices with L1 norm <= radius, sorted by the vertex order.
std::vector<Vertex> l1_ball(int d, int radius);

}  // namespace glp
