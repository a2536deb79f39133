#include "lattice.hpp"

#include <algorithm>
#include <cstdlib>
#include <unordered_set>

#include "error.hpp"

namespace glp {

namespace {

void check_dimension(int d) {
  if (d < 1 || d > kMaxDimension) {
    throw Error(ErrorCode::invalid_argument,
                "dimension must be in [1, " + std::to_string(kMaxDimension) + "], got " +
                    std::to_string(d));
  }
}

}  // namespace

Vertex::Vertex(int dimension) {
  check_dimension(dimension);
  dim_ = static_cast<std::uint8_t>(dimension);
}

Vertex::Vertex(std::initializer_list<std::int32_t> coords)
    : Vertex(std::span<const std::int32_t>(coords.begin(), coords.size())) {}

Vertex::Vertex(std::span<const std::int32_t> coords) {
  check_dimension(static_cast<int>(coords.size()));
  dim_ = static_cast<std::uint8_t>(coords.size());
  std::copy(coords.begin(), coords.end(), coords_.begin());
}

std::int64_t Vertex::norm1() const noexcept {
  std::int64_t s = 0;
  for (int i = 0; i < dim_; ++i) s += std::llabs(coords_[static_cast<std::size_t>(i)]);
  return s;
}

std::string Vertex::to_string() const {
  std::string s = "(";
  for (int i = 0; i < dim_; ++i) {
    if (i) s += ',';
    s += std::to_string(coords_[static_cast<std::size_t>(i)]);
  }
  if (dim_ == 1) s += ',';
  s += ')';
  return s;
}

std::int64_t l1_distance(const Vertex& a, const Vertex& b) noexcept {
  std::int64_t s = 0;
  for (int i = 0; i < a.dimension(); ++i) s += std::llabs(std::int64_t{a[i]} - b[i]);
  return s;
}

std::size_t VertexHash::operator()(const Vertex& v) const noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL ^ static_cast<std::uint64_t>(v.dimension());
  for (auto c : v.coords()) {
    h ^= static_cast<std::uint32_t>(c);
    h *= 0x100000001b3ULL;
    h ^= h >> 29;
  }
  return static_cast<std::size_t>(h);
}

std::vector<Vertex> neighbors(const Vertex& v) {
  std::vector<Vertex> out;
  const int d = v.dimension();
  out.reserve(static_cast<std::size_t>(2 * d));
  for (int i = 0; i < d; ++i) {
    Vertex u = v;
    u[i] -= 1;
    out.push_back(u);
  }
  for (int i = d - 1; i >= 0; --i) {
    Vertex u = v;
    u[i] += 1;
    out.push_back(u);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool SelfAvoidingPath::contains(const Vertex& v) const {
  return std::find(vertices_.begin(), vertices_.end(), v) != vertices_.end();
}

std::string SelfAvoidingPath::to_string() const {
  std::string s = "[";
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (i) s += ',';
    s += vertices_[i].to_string();
  }
  return s + "]";
}

SelfAvoidingPath SelfAvoidingPath::from_vertices(std::vector<Vertex> vertices) {
  if (vertices.empty()) throw Error(ErrorCode::invalid_argument, "empty path");
  SelfAvoidingPath p(vertices.front());
  for (std::size_t i = 1; i < vertices.size(); ++i) p = path_extend(p, vertices[i]);
  return p;
}

SelfAvoidingPath path_extend(const SelfAvoidingPath& p, const Vertex& v) {
  if (p.empty()) return SelfAvoidingPath(v);
  if (v.dimension() != p.dimension() || l1_distance(p.back(), v) != 1) {
    throw Error(ErrorCode::not_adjacent, v.to_string() + " is not adjacent to " + p.back().to_string());
  }
  if (p.contains(v)) {
    throw Error(ErrorCode::not_self_avoiding, v.to_string() + " already lies on the path");
  }
  SelfAvoidingPath out = p;
  out.vertices_.push_back(v);
  return out;
}

bool is_self_avoiding_path(std::span<const Vertex> vertices) {
  if (vertices.empty()) return false;
  std::unordered_set<Vertex, VertexHash> seen;
  const int d = vertices.front().dimension();
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (vertices[i].dimension() != d) return false;
    if (!seen.insert(vertices[i]).second) return false;
    if (i > 0 && l1_distance(vertices[i - 1], vertices[i]) != 1) return false;
  }
  return true;
}

namespace {

struct SawEnumerator {
  int n;
  const std::function<bool(const SelfAvoidingPath&)>& visit;
  std::uint64_t max_paths;
  std::uint64_t count = 0;
  std::unordered_set<Vertex, VertexHash> occupied{};
  SelfAvoidingPath path{};

  // Returns false when the visitor asked to stop.
  bool walk() {
    if (static_cast<int>(path.length()) == n) {
      if (++count > max_paths) {
        throw Error(ErrorCode::resource_bound,
                    "self-avoiding path enumeration exceeded " + std::to_string(max_paths) + " paths");
      }
      return visit(path);
    }
    for (const Vertex& u : neighbors(path.back())) {
      if (occupied.contains(u)) continue;
      SelfAvoidingPath saved = path;
      path = path_extend(path, u);
      occupied.insert(u);
      const bool keep_going = walk();
      occupied.erase(u);
      path = std::move(saved);
      if (!keep_going) return false;
    }
    return true;
  }
};

}  // namespace

std::uint64_t enumerate_saws(int n, int d,
                             const std::function<bool(const SelfAvoidingPath&)>& visit,
                             std::uint64_t max_paths) {
  if (n < 1) throw Error(ErrorCode::invalid_argument, "path length must be >= 1");
  SawEnumerator e{n, visit, max_paths};
  const Vertex o = Vertex::origin(d);
  e.path = SelfAvoidingPath(o);
  e.occupied.insert(o);
  e.walk();
  return std::min(e.count, max_paths);
}

std::vector<SelfAvoidingPath> collect_saws(int n, int d, std::uint64_t max_paths) {
  std::vector<SelfAvoidingPath> out;
  enumerate_saws(
      n, d,
      [&](const SelfAvoidingPath& p) {
        out.push_back(p);
        return true;
      },
      max_paths);
  return out;
}

std::vector<Vertex> l1_ball(int d, int radius) {
  std::vector<Vertex> out;
  if (radius < 0) return out;
  // Odometer over [-radius, radius]^d restricted to the ball.
  std::vector<std::int32_t> c(static_cast<std::size_t>(d), -radius);
  while (true) {
    std::int64_t s = 0;
    for (auto x : c) s += std::llabs(x);
    if (s <= radius) out.emplace_back(std::span<const std::int32_t>(c));
    int i = d - 1;
    while (i >= 0 && c[static_cast<std::size_t>(i)] == radius) {
      c[static_cast<std::size_t>(i)] = -radius;
      --i;
    }
    if (i < 0) break;
    ++c[static_cast<std::size_t>(i)];
  }
  // The odometer already runs in lexicographic order.
  return out;
}

}  // namespace glp
