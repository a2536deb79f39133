#include "solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <queue>
#include <unordered_map>

#include "error.hpp"

namespace glp {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_length(int n) {
  if (n < 1) throw Error(ErrorCode::invalid_argument, "path length must be >= 1");
}

bool integral(double w) { return std::floor(w) == w && std::fabs(w) < 0x1.0p40; }

}  // namespace

BallView::BallView(const WeightField& field, int n, TruncationLevel trunc) : n_(n) {
  check_length(n);
  const int d = field.dimension();
  const int radius = n - 1;
  vertices_ = l1_ball(d, radius);
  const std::size_t count = vertices_.size();
  std::unordered_map<Vertex, int, VertexHash> index;
  index.reserve(count * 2);
  weights_.resize(count);
  raw_.resize(count);
  norms_.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    const Vertex& v = vertices_[i];
    index.emplace(v, static_cast<int>(i));
    raw_[i] = field.sample(v);
    weights_[i] = trunc.apply(raw_[i]);
    norms_[i] = static_cast<int>(v.norm1());
    if (!integral(weights_[i])) exact_arithmetic_ = false;
  }
  origin_ = index.at(Vertex::origin(d));

  nbr_start_.assign(count + 1, 0);
  for (std::size_t i = 0; i < count; ++i) {
    nbr_start_[i] = static_cast<int>(nbr_.size());
    for (const Vertex& u : glp::neighbors(vertices_[i])) {
      if (auto it = index.find(u); it != index.end()) nbr_.push_back(it->second);
    }
  }
  nbr_start_[count] = static_cast<int>(nbr_.size());

  // Offsets grouped by L1 norm, for growing top lists one sphere at a time.
  std::vector<std::vector<Vertex>> spheres(static_cast<std::size_t>(radius + 1));
  for (const Vertex& o : vertices_) spheres[static_cast<std::size_t>(o.norm1())].push_back(o);

  const auto stride = static_cast<std::size_t>(radius + 1);
  const auto keep = static_cast<std::size_t>(n);
  top_start_.assign(count * stride, 0);
  top_len_.assign(count * stride, 0);
  auto better = [this](int a, int b) {
    const double wa = weights_[static_cast<std::size_t>(a)];
    const double wb = weights_[static_cast<std::size_t>(b)];
    return wa != wb ? wa > wb : a < b;
  };
  std::vector<int> current;
  for (std::size_t i = 0; i < count; ++i) {
    current.clear();
    const int max_r = radius - norms_[i];
    for (int r = 1; r <= max_r; ++r) {
      for (const Vertex& o : spheres[static_cast<std::size_t>(r)]) {
        Vertex u = vertices_[i];
        for (int a = 0; a < d; ++a) u[a] += o[a];
        if (u.norm1() > radius) continue;
        current.push_back(index.at(u));
      }
      std::sort(current.begin(), current.end(), better);
      if (current.size() > keep) current.resize(keep);
      top_start_[i * stride + static_cast<std::size_t>(r)] = static_cast<std::uint32_t>(top_.size());
      top_len_[i * stride + static_cast<std::size_t>(r)] = static_cast<std::uint32_t>(current.size());
      top_.insert(top_.end(), current.begin(), current.end());
    }
  }
}

std::span<const int> BallView::neighbors(int i) const {
  const auto s = static_cast<std::size_t>(nbr_start_[static_cast<std::size_t>(i)]);
  const auto e = static_cast<std::size_t>(nbr_start_[static_cast<std::size_t>(i) + 1]);
  return {nbr_.data() + s, e - s};
}

std::span<const int> BallView::top_within(int i, int r) const {
  if (r <= 0) return {};
  const std::size_t slot = static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(r);
  return {top_.data() + top_start_[slot], top_len_[slot]};
}

double BallView::completion_bound(int i, int remaining, std::span<const std::uint8_t> occupied) const {
  if (remaining <= 0) return 0.0;
  double s = 0.0;
  int taken = 0;
  for (int u : top_within(i, remaining)) {
    if (occupied[static_cast<std::size_t>(u)]) continue;
    s += weights_[static_cast<std::size_t>(u)];
    if (++taken == remaining) return s;
  }
  return kNegInf;
}

namespace {

class BranchAndBound {
public:
  BranchAndBound(const BallView& view, const SolverOptions& options)
      : view_(view),
        options_(options),
        n_(view.path_length()),
        occupied_(static_cast<std::size_t>(view.size()), 0),
        path_(static_cast<std::size_t>(view.path_length()), -1) {}

  SolverResult run() {
    if (options_.warm_start_width > 0) {
      SolverResult warm = beam_search(view_, options_.warm_start_width);
      if (!warm.path.empty()) {
        have_best_ = true;
        best_ = warm.value;
        best_path_ = to_indices(warm.path);
      }
    }
    const int o = view_.origin();
    occupied_[static_cast<std::size_t>(o)] = 1;
    path_[0] = o;
    aborted_ = false;
    dfs(o, 1, 0.0 + view_.weight(o));

    SolverResult r;
    r.nodes_expanded = expanded_;
    r.nodes_pruned = pruned_;
    r.exact = !aborted_;
    if (!have_best_) {
      // Budget hit before any completion: fall back to a straight ray.
      best_path_.assign(1, o);
      for (int k = 1; k < n_; ++k) best_path_.push_back(view_.neighbors(best_path_.back()).front());
    }
    std::vector<Vertex> vs;
    double value = 0.0;
    for (int idx : best_path_) {
      vs.push_back(view_.vertex(idx));
      value += view_.weight(idx);
    }
    r.path = SelfAvoidingPath::from_vertices(std::move(vs));
    r.value = value;
    return r;
  }

private:
  std::vector<int> to_indices(const SelfAvoidingPath& p) const {
    std::vector<int> out;
    int cur = view_.origin();
    out.push_back(cur);
    for (std::size_t k = 1; k < p.length(); ++k) {
      for (int u : view_.neighbors(cur)) {
        if (view_.vertex(u) == p.vertices()[k]) {
          cur = u;
          break;
        }
      }
      out.push_back(cur);
    }
    return out;
  }

  bool prune(double bound) const {
    if (!have_best_) return false;
    if (view_.exact_arithmetic()) return best_from_dfs_ ? bound <= best_ : bound < best_;
    const double slack = 1e-9 * (1.0 + std::fabs(best_) + std::fabs(bound));
    return best_from_dfs_ ? bound + slack <= best_ : bound + slack < best_;
  }

  void dfs(int at, int len, double partial) {
    if (len == n_) {
      // Strict improvement keeps the first (lexicographically smallest) optimum
      // once the incumbent comes from this search.
      if (!have_best_ || partial > best_ || (partial == best_ && !best_from_dfs_)) {
        have_best_ = true;
        best_from_dfs_ = true;
        best_ = partial;
        best_path_.assign(path_.begin(), path_.end());
      }
      return;
    }
    if (++expanded_ > options_.node_budget) {
      aborted_ = true;
      return;
    }
    const int remaining_after = n_ - len - 1;
    for (int u : view_.neighbors(at)) {
      if (occupied_[static_cast<std::size_t>(u)]) continue;
      const double next = partial + view_.weight(u);
      occupied_[static_cast<std::size_t>(u)] = 1;
      const double bound = next + view_.completion_bound(u, remaining_after, occupied_);
      if (prune(bound)) {
        occupied_[static_cast<std::size_t>(u)] = 0;
        ++pruned_;
        continue;
      }
      path_[static_cast<std::size_t>(len)] = u;
      dfs(u, len + 1, next);
      occupied_[static_cast<std::size_t>(u)] = 0;
      if (aborted_) return;
    }
  }

  const BallView& view_;
  SolverOptions options_;
  int n_;
  std::vector<std::uint8_t> occupied_;
  std::vector<int> path_;
  std::vector<int> best_path_;
  double best_ = kNegInf;
  bool have_best_ = false;
  bool best_from_dfs_ = false;
  bool aborted_ = false;
  std::uint64_t expanded_ = 0;
  std::uint64_t pruned_ = 0;
};

struct BeamNode {
  int parent;  // index into the previous layer's node store
  int vertex;
  double value;
};

}  // namespace

SolverResult max_weight_path(const BallView& view, const SolverOptions& options) {
  return BranchAndBound(view, options).run();
}

SolverResult max_weight_path(const WeightField& field, int n, TruncationLevel trunc,
                             const SolverOptions& options) {
  const BallView view(field, n, trunc);
  return max_weight_path(view, options);
}

SolverResult beam_search(const BallView& view, std::size_t width) {
  if (width < 1) throw Error(ErrorCode::invalid_argument, "beam width must be >= 1");
  if (width > kMaxBeamWidth) {
    throw Error(ErrorCode::resource_bound, "beam width above " + std::to_string(kMaxBeamWidth));
  }
  const int n = view.path_length();
  // layers[t] holds the nodes of paths with t + 1 vertices; slots[t][w] is the
  // node admitted at width w (or -1), and lex_rank orders a layer's nodes
  // lexicographically by vertex sequence.
  std::vector<std::vector<BeamNode>> layers(static_cast<std::size_t>(n));
  std::vector<std::vector<int>> lex_rank(static_cast<std::size_t>(n));
  std::vector<int> slots(width, -1);
  layers[0].push_back({-1, view.origin(), view.weight(view.origin())});
  lex_rank[0].push_back(0);
  slots[0] = 0;
  std::vector<std::uint8_t> on_path(static_cast<std::size_t>(view.size()), 0);
  std::uint64_t expanded = 0;

  struct Candidate {
    double value;
    int parent_rank;
    int parent;
    int vertex;
  };
  auto worse = [](const Candidate& a, const Candidate& b) {
    if (a.value != b.value) return a.value < b.value;
    if (a.parent_rank != b.parent_rank) return a.parent_rank > b.parent_rank;
    return a.vertex > b.vertex;
  };

  for (int t = 1; t < n; ++t) {
    const auto& prev = layers[static_cast<std::size_t>(t - 1)];
    const auto& prev_rank = lex_rank[static_cast<std::size_t>(t - 1)];
    auto& cur = layers[static_cast<std::size_t>(t)];
    std::priority_queue<Candidate, std::vector<Candidate>, decltype(worse)> heap(worse);
    std::vector<int> next_slots(width, -1);
    for (std::size_t w = 0; w < width; ++w) {
      if (const int p = slots[w]; p >= 0) {
        ++expanded;
        // Mark the parent's path to test self-avoidance.
        for (int k = p, layer = t - 1; k >= 0; k = layers[static_cast<std::size_t>(layer)][static_cast<std::size_t>(k)].parent, --layer)
          on_path[static_cast<std::size_t>(layers[static_cast<std::size_t>(layer)][static_cast<std::size_t>(k)].vertex)] = 1;
        const BeamNode& pn = prev[static_cast<std::size_t>(p)];
        for (int u : view.neighbors(pn.vertex)) {
          if (on_path[static_cast<std::size_t>(u)]) continue;
          heap.push({pn.value + view.weight(u), prev_rank[static_cast<std::size_t>(p)], p, u});
        }
        for (int k = p, layer = t - 1; k >= 0; k = layers[static_cast<std::size_t>(layer)][static_cast<std::size_t>(k)].parent, --layer)
          on_path[static_cast<std::size_t>(layers[static_cast<std::size_t>(layer)][static_cast<std::size_t>(k)].vertex)] = 0;
      }
      if (!heap.empty()) {
        const Candidate c = heap.top();
        heap.pop();
        next_slots[w] = static_cast<int>(cur.size());
        cur.push_back({c.parent, c.vertex, c.value});
      }
    }
    // Lexicographic rank of the new layer: by (parent rank, vertex index).
    std::vector<int> order(cur.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      const BeamNode& na = cur[static_cast<std::size_t>(a)];
      const BeamNode& nb = cur[static_cast<std::size_t>(b)];
      const int ra = prev_rank[static_cast<std::size_t>(na.parent)];
      const int rb = prev_rank[static_cast<std::size_t>(nb.parent)];
      return ra != rb ? ra < rb : na.vertex < nb.vertex;
    });
    auto& rank = lex_rank[static_cast<std::size_t>(t)];
    rank.assign(cur.size(), 0);
    for (std::size_t i = 0; i < order.size(); ++i) rank[static_cast<std::size_t>(order[i])] = static_cast<int>(i);
    slots = std::move(next_slots);
  }

  SolverResult r;
  r.exact = false;
  r.nodes_expanded = expanded;
  const auto& last = layers[static_cast<std::size_t>(n - 1)];
  const auto& last_rank = lex_rank[static_cast<std::size_t>(n - 1)];
  int best = -1;
  for (std::size_t i = 0; i < last.size(); ++i) {
    if (best < 0 || last[i].value > last[static_cast<std::size_t>(best)].value ||
        (last[i].value == last[static_cast<std::size_t>(best)].value &&
         last_rank[i] < last_rank[static_cast<std::size_t>(best)])) {
      best = static_cast<int>(i);
    }
  }
  if (best < 0) {
    r.value = kNegInf;
    return r;
  }
  std::vector<Vertex> vs(static_cast<std::size_t>(n));
  for (int k = best, layer = n - 1; k >= 0; k = layers[static_cast<std::size_t>(layer)][static_cast<std::size_t>(k)].parent, --layer)
    vs[static_cast<std::size_t>(layer)] = view.vertex(layers[static_cast<std::size_t>(layer)][static_cast<std::size_t>(k)].vertex);
  r.path = SelfAvoidingPath::from_vertices(std::move(vs));
  r.value = last[static_cast<std::size_t>(best)].value;
  return r;
}

SolverResult beam_search(const WeightField& field, int n, std::size_t width, TruncationLevel trunc) {
  const BallView view(field, n, trunc);
  return beam_search(view, width);
}

double admissible_upper_bound(const WeightField& field, const SelfAvoidingPath& partial, int remaining,
                              TruncationLevel trunc) {
  if (remaining < 0) throw Error(ErrorCode::invalid_argument, "remaining must be >= 0");
  if (partial.empty()) throw Error(ErrorCode::invalid_argument, "partial path is empty");
  const double base = path_weight(partial, field, trunc);
  if (remaining == 0) return base;
  std::vector<double> candidates;
  for (const Vertex& offset : l1_ball(field.dimension(), remaining)) {
    if (offset.norm1() == 0) continue;
    Vertex u = partial.back();
    for (int a = 0; a < u.dimension(); ++a) u[a] += offset[a];
    if (partial.contains(u)) continue;
    candidates.push_back(field.value(u, trunc));
  }
  if (candidates.size() < static_cast<std::size_t>(remaining)) return kNegInf;
  std::partial_sort(candidates.begin(), candidates.begin() + remaining, candidates.end(), std::greater<>());
  double s = base;
  for (int k = 0; k < remaining; ++k) s += candidates[static_cast<std::size_t>(k)];
  return s;
}

GreedyPathStats greedy_stats(const SolverResult& result, const WeightField& field, TruncationLevel m) {
  GreedyPathStats stats;
  if (!m.active()) return stats;
  for (const Vertex& v : result.path.vertices()) {
    const double x = field.sample(v);
    if (x <= -m.m()) {
      ++stats.n_below;
      stats.defect += -m.m() - x;
    }
  }
  return stats;
}

}  // namespace glp
