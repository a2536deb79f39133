#include <algorithm>
#include <bit>
#include <boost/multiprecision/cpp_int.hpp>
#include <charconv>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "error.hpp"
#include "lattice.hpp"
#include "parallel.hpp"
#include "solver.hpp"
#include "verify.hpp"
#include "weight_field.hpp"

namespace glp {

namespace {

using boost::multiprecision::cpp_int;

struct Rational {
  std::uint64_t num = 0;
  std::uint64_t den = 1;
};

std::uint64_t parse_u64(std::string_view s) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
    throw Error(ErrorCode::parse_error, "not an unsigned integer: '" + std::string(s) + "'");
  }
  return v;
}

Rational parse_rational(std::string_view text) {
  Rational r;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    r.num = parse_u64(text.substr(0, slash));
    r.den = parse_u64(text.substr(slash + 1));
  } else {
    auto dot = text.find('.');
    if (dot == std::string_view::npos) {
      r.num = parse_u64(text);
    } else {
      const auto frac = text.substr(dot + 1);
      if (frac.size() > 18) throw Error(ErrorCode::parse_error, "too many decimals in '" + std::string(text) + "'");
      const auto whole = text.substr(0, dot);
      r.den = 1;
      for (std::size_t i = 0; i < frac.size(); ++i) r.den *= 10;
      r.num = (whole.empty() ? 0 : parse_u64(whole)) * r.den + (frac.empty() ? 0 : parse_u64(frac));
    }
  }
  if (r.den == 0) throw Error(ErrorCode::parse_error, "zero denominator in '" + std::string(text) + "'");
  if (r.num > r.den) throw Error(ErrorCode::invalid_argument, "q must lie in [0, 1], got " + std::string(text));
  const auto g = std::gcd(r.num, r.den);
  if (g > 1) {
    r.num /= g;
    r.den /= g;
  }
  return r;
}

std::uint64_t falling(std::uint64_t x, int k) {
  std::uint64_t f = 1;
  for (int j = 0; j < k; ++j) f *= x >= static_cast<std::uint64_t>(j) ? x - static_cast<std::uint64_t>(j) : 0;
  return f;
}

double to_double(const cpp_int& num, const cpp_int& den) {
  return boost::multiprecision::cpp_rational(num, den).convert_to<double>();
}

std::string rational_string(const cpp_int& num, const cpp_int& den) {
  const boost::multiprecision::cpp_rational r(num, den);
  return r.str();
}

struct Accumulator {
  int levels;  // B + 1 values of the total low count
  int ball;
  int kmax;
  std::vector<std::uint64_t> moment;      // [k - 1][L]
  std::vector<std::uint64_t> on;          // [v][L]: v on the path
  std::vector<std::uint64_t> on_low;      // [v][L]: v on the path and low
  std::vector<std::uint64_t> pair_on;     // [v][w][L]
  std::vector<std::uint64_t> pair_on_low; // [v][w][L]
  std::uint64_t vertex_monotonicity_violations = 0;
  std::uint64_t pair_monotonicity_violations = 0;

  Accumulator(int b, int k)
      : levels(b + 1),
        ball(b),
        kmax(k),
        moment(static_cast<std::size_t>(k * (b + 1)), 0),
        on(static_cast<std::size_t>(b * (b + 1)), 0),
        on_low(on.size(), 0),
        pair_on(static_cast<std::size_t>(b * b * (b + 1)), 0),
        pair_on_low(pair_on.size(), 0) {}

  std::size_t vi(int v, int L) const { return static_cast<std::size_t>(v * levels + L); }
  std::size_t pi(int v, int w, int L) const { return static_cast<std::size_t>((v * ball + w) * levels + L); }

  void merge(const Accumulator& o) {
    auto add = [](std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
      for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    };
    add(moment, o.moment);
    add(on, o.on);
    add(on_low, o.on_low);
    add(pair_on, o.pair_on);
    add(pair_on_low, o.pair_on_low);
    vertex_monotonicity_violations += o.vertex_monotonicity_violations;
    pair_monotonicity_violations += o.pair_monotonicity_violations;
  }
};

}  // namespace

VerificationReport check_key_lemma_exact_small(const ExactLemmaParams& params) {
  if (params.n < 1 || params.d < 1 || params.max_k < 1) {
    throw Error(ErrorCode::invalid_argument, "key-lemma-exact: need n, d, max_k >= 1");
  }
  if (!(params.m >= 0.0)) throw Error(ErrorCode::invalid_argument, "key-lemma-exact: m must be >= 0");
  if (!(params.a_minus >= 0.0) || !(params.a_plus > -params.m)) {
    throw Error(ErrorCode::invalid_argument, "key-lemma-exact: need a_minus >= 0 and a_plus > -m");
  }
  const Rational q = parse_rational(params.q);
  const auto ball = l1_ball(params.d, params.n - 1);
  const int B = static_cast<int>(ball.size());
  if (B > 26) {
    throw Error(ErrorCode::resource_bound,
                "key-lemma-exact: ball of " + std::to_string(B) + " vertices exceeds 2^26 configurations");
  }
  std::unordered_map<Vertex, int, VertexHash> index;
  for (int i = 0; i < B; ++i) index.emplace(ball[static_cast<std::size_t>(i)], i);

  const auto paths = collect_saws(params.n, params.d);
  std::vector<std::uint32_t> path_mask;
  path_mask.reserve(paths.size());
  for (const auto& p : paths) {
    std::uint32_t mask = 0;
    for (const auto& v : p.vertices()) mask |= 1u << index.at(v);
    path_mask.push_back(mask);
  }

  const double hi = params.a_plus;
  const double lo = std::max(-params.a_minus, -params.m);
  const bool counted = -params.a_minus <= -params.m;  // the low atom satisfies X <= -m
  const int kmax = params.max_k;

  // With two weight values the path weight is affine in the number L of low
  // vertices it visits, so the optimum is decided by L alone.
  auto greedy = [&](std::uint32_t config) -> std::uint32_t {
    std::uint32_t best = 0;
    int best_low = std::popcount(config & path_mask[0]);
    for (std::uint32_t i = 1; i < path_mask.size(); ++i) {
      const int l = std::popcount(config & path_mask[i]);
      const bool better = hi > lo ? l < best_low : (hi < lo ? l > best_low : false);
      if (better) {
        best = i;
        best_low = l;
      }
    }
    return best;
  };

  const std::uint64_t configs = std::uint64_t{1} << B;
  std::vector<std::uint8_t> best(configs);
  const std::size_t chunks = std::min<std::uint64_t>(configs, 256);
  const std::uint64_t per_chunk = (configs + chunks - 1) / chunks;
  parallel_for(chunks, params.threads, [&](std::size_t c) {
    const std::uint64_t begin = c * per_chunk;
    const std::uint64_t end = std::min(configs, begin + per_chunk);
    for (std::uint64_t cfg = begin; cfg < end; ++cfg) best[cfg] = static_cast<std::uint8_t>(greedy(static_cast<std::uint32_t>(cfg)));
  });

  std::vector<Accumulator> partial(chunks, Accumulator(B, kmax));
  parallel_for(chunks, params.threads, [&](std::size_t c) {
    Accumulator& acc = partial[c];
    const std::uint64_t begin = c * per_chunk;
    const std::uint64_t end = std::min(configs, begin + per_chunk);
    int members[32];
    for (std::uint64_t cfg = begin; cfg < end; ++cfg) {
      const auto config = static_cast<std::uint32_t>(cfg);
      const int L = std::popcount(config);
      const std::uint32_t on_path = path_mask[best[cfg]];
      const std::uint32_t low_on_path = counted ? (config & on_path) : 0u;
      const auto N = static_cast<std::uint64_t>(std::popcount(low_on_path));
      for (int k = 1; k <= kmax; ++k) acc.moment[static_cast<std::size_t>((k - 1) * acc.levels + L)] += falling(N, k);
      int count = 0;
      for (std::uint32_t rest = on_path; rest != 0; rest &= rest - 1) members[count++] = std::countr_zero(rest);
      for (int a = 0; a < count; ++a) {
        const int v = members[a];
        const bool v_low = (low_on_path >> v) & 1u;
        ++acc.on[acc.vi(v, L)];
        if (v_low) {
          ++acc.on_low[acc.vi(v, L)];
          // Raising X_v must keep v on the greedy path.
          if (!((path_mask[best[cfg ^ (std::uint64_t{1} << v)]] >> v) & 1u)) ++acc.vertex_monotonicity_violations;
        }
        for (int b = 0; b < count; ++b) {
          if (a == b) continue;
          const int w = members[b];
          ++acc.pair_on[acc.pi(v, w, L)];
          const bool w_low = (low_on_path >> w) & 1u;
          if (v_low && w_low) {
            ++acc.pair_on_low[acc.pi(v, w, L)];
            if (v < w) {
              const std::uint32_t both = (1u << v) | (1u << w);
              for (std::uint32_t raise : {1u << v, 1u << w, both}) {
                if ((path_mask[best[cfg ^ raise]] & both) != both) {
                  ++acc.pair_monotonicity_violations;
                  break;
                }
              }
            }
          }
        }
      }
    }
  });
  Accumulator total(B, kmax);
  for (const auto& a : partial) total.merge(a);

  // P(configuration with L low vertices) = a^L (b - a)^(B - L) / b^B.
  const cpp_int a = q.num;
  const cpp_int b = q.den;
  std::vector<cpp_int> weight(static_cast<std::size_t>(B + 1));
  for (int L = 0; L <= B; ++L) {
    weight[static_cast<std::size_t>(L)] = boost::multiprecision::pow(a, static_cast<unsigned>(L)) *
                                          boost::multiprecision::pow(b - a, static_cast<unsigned>(B - L));
  }
  const cpp_int bB = boost::multiprecision::pow(b, static_cast<unsigned>(B));
  const cpp_int p_num = counted ? a : cpp_int(0);
  auto expectation = [&](auto&& count_at) {
    cpp_int s = 0;
    for (int L = 0; L <= B; ++L) s += cpp_int(count_at(L)) * weight[static_cast<std::size_t>(L)];
    return s;  // numerator over b^B
  };

  VerificationReport r;
  r.check = "key-lemma-exact";
  r.mode = CheckMode::exact;
  r.details["q"] = std::to_string(q.num) + "/" + std::to_string(q.den);
  r.details["a_plus"] = params.a_plus;
  r.details["a_minus"] = params.a_minus;
  r.details["m"] = params.m;
  r.details["n"] = params.n;
  r.details["d"] = params.d;
  r.details["ball_vertices"] = B;
  r.details["configurations"] = configs;
  r.details["paths"] = paths.size();
  auto& moments = r.details["factorial_moments"] = nlohmann::ordered_json::array();

  for (int k = 1; k <= kmax; ++k) {
    const cpp_int lhs = expectation([&](int L) { return total.moment[static_cast<std::size_t>((k - 1) * total.levels + L)]; });
    // bound = falling(n, k) * (p_num / b)^k; compare lhs / b^B <= bound exactly.
    const cpp_int bound_num = cpp_int(falling(static_cast<std::uint64_t>(params.n), k)) *
                              boost::multiprecision::pow(p_num, static_cast<unsigned>(k));
    const cpp_int bk = boost::multiprecision::pow(b, static_cast<unsigned>(k));
    const bool ok = lhs * bk <= bound_num * bB;
    r.add_exact("k=" + std::to_string(k) + ": E prod(N - j) <= prod(n - j) p^k", to_double(lhs, bB),
                to_double(bound_num, bk), ok);
    nlohmann::ordered_json e;
    e["k"] = k;
    e["lhs"] = rational_string(lhs, bB);
    e["bound"] = rational_string(bound_num, bk);
    moments.push_back(std::move(e));
  }

  // Per-vertex step: E(1[v on path] 1[X_v low]) <= E(1[v on path]) p.
  std::uint64_t vertex_steps = 0;
  std::uint64_t vertex_failures = 0;
  double worst_vertex_gap = -std::numeric_limits<double>::infinity();
  for (int v = 0; v < B; ++v) {
    const cpp_int joint = expectation([&](int L) { return total.on_low[total.vi(v, L)]; });
    const cpp_int marginal = expectation([&](int L) { return total.on[total.vi(v, L)]; });
    if (marginal == 0) continue;
    ++vertex_steps;
    if (joint * b > marginal * p_num) ++vertex_failures;
    worst_vertex_gap = std::max(worst_vertex_gap, to_double(joint * b - marginal * p_num, bB * b));
  }
  r.add_exact("per-vertex Chebyshev steps violated", static_cast<double>(vertex_failures), 0.0, vertex_failures == 0);
  r.details["vertex_steps_checked"] = vertex_steps;
  r.details["worst_vertex_step_gap"] = vertex_steps > 0 ? worst_vertex_gap : 0.0;
  r.details["vertex_monotonicity_violations"] = total.vertex_monotonicity_violations;

  // Per-pair step: E(1[v, w on path] 1[X_v, X_w low]) <= E(1[v, w on path]) p^2.
  std::uint64_t pair_steps = 0;
  std::uint64_t pair_failures = 0;
  const cpp_int p2 = p_num * p_num;
  for (int v = 0; v < B; ++v) {
    for (int w = 0; w < B; ++w) {
      if (v == w) continue;
      const cpp_int joint = expectation([&](int L) { return total.pair_on_low[total.pi(v, w, L)]; });
      const cpp_int marginal = expectation([&](int L) { return total.pair_on[total.pi(v, w, L)]; });
      if (marginal == 0) continue;
      ++pair_steps;
      if (joint * b * b > marginal * p2) ++pair_failures;
    }
  }
  r.details["pair_steps_checked"] = pair_steps;
  r.details["pair_steps_violated"] = pair_failures;
  r.details["pair_monotonicity_violations"] = total.pair_monotonicity_violations;

  // Cross-check the two-value shortcut against the branch-and-bound solver.
  const std::uint64_t stride = std::max<std::uint64_t>(1, configs / 4096);
  const DistributionSpec spec(family::TwoPoint{params.a_plus, params.a_minus,
                                               static_cast<double>(q.num) / static_cast<double>(q.den)});
  const TruncationLevel trunc(params.m);
  std::vector<std::uint8_t> agree((configs + stride - 1) / stride, 1);
  parallel_for(agree.size(), params.threads, [&](std::size_t i) {
    const std::uint64_t cfg = i * stride;
    std::unordered_map<Vertex, double, VertexHash> values;
    for (int v = 0; v < B; ++v) {
      values.emplace(ball[static_cast<std::size_t>(v)], ((cfg >> v) & 1u) ? -params.a_minus : params.a_plus);
    }
    const auto field = WeightField::with_overrides(spec, params.d, 0, std::move(values));
    const auto solved = max_weight_path(field, params.n, trunc);
    agree[i] = solved.exact && solved.path == paths[best[cfg]];
  });
  const auto disagreements = static_cast<std::uint64_t>(std::count(agree.begin(), agree.end(), 0));
  r.add_exact("solver disagreements on sampled configurations", static_cast<double>(disagreements), 0.0,
              disagreements == 0);
  r.details["solver_cross_checked"] = agree.size();
  r.finalize();
  return r;
}

}  // namespace glp
