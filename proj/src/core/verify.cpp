#include "verify.hpp"

#include <cmath>
#include <limits>

#include "error.hpp"
#include "hypotheses.hpp"

namespace glp {

const char* to_string(CheckMode m) noexcept { return m == CheckMode::exact ? "exact" : "statistical"; }

const char* to_string(CheckStatus s) noexcept {
  switch (s) {
    case CheckStatus::passed: return "passed";
    case CheckStatus::failed: return "failed";
    case CheckStatus::vacuous: return "vacuous";
    case CheckStatus::infinite_moment: return "infinite_moment";
  }
  return "?";
}

Measurement& VerificationReport::add_statistical(std::string label, double statistic, double bound, double se) {
  Measurement m{std::move(label), statistic, bound, se, statistic <= bound + kSigmaSlack * se};
  measurements.push_back(std::move(m));
  return measurements.back();
}

Measurement& VerificationReport::add_exact(std::string label, double statistic, double bound, bool ok) {
  measurements.push_back(Measurement{std::move(label), statistic, bound, 0.0, ok});
  return measurements.back();
}

void VerificationReport::finalize() {
  bool all = true;
  for (const auto& m : measurements) all = all && m.pass;
  if (status == CheckStatus::infinite_moment) {
    pass = false;
    return;
  }
  pass = all;
  if (status != CheckStatus::vacuous) status = all ? CheckStatus::passed : CheckStatus::failed;
}

namespace {

nlohmann::ordered_json number(double x) {
  if (std::isfinite(x)) return x;
  return format_double(x);
}

}  // namespace

nlohmann::ordered_json to_json(const VerificationReport& r) {
  nlohmann::ordered_json j;
  j["check"] = r.check;
  j["mode"] = to_string(r.mode);
  j["status"] = to_string(r.status);
  j["pass"] = r.pass;
  auto& ms = j["measurements"] = nlohmann::ordered_json::array();
  for (const auto& m : r.measurements) {
    nlohmann::ordered_json e;
    e["label"] = m.label;
    e["statistic"] = number(m.statistic);
    e["bound"] = number(m.bound);
    e["stderr"] = number(m.stderr_);
    e["pass"] = m.pass;
    ms.push_back(std::move(e));
  }
  j["details"] = r.details;
  return j;
}

std::vector<std::vector<std::uint64_t>> stirling_table(int n_max) {
  if (n_max < 0 || n_max > 20) throw Error(ErrorCode::invalid_argument, "stirling_table: n_max must be in [0, 20]");
  std::vector<std::vector<std::uint64_t>> s(static_cast<std::size_t>(n_max + 1));
  for (int n = 0; n <= n_max; ++n) {
    auto& row = s[static_cast<std::size_t>(n)];
    row.assign(static_cast<std::size_t>(n + 1), 0);
    row[0] = n == 0 ? 1 : 0;
    for (int k = 1; k <= n; ++k) {
      const auto& prev = s[static_cast<std::size_t>(n - 1)];
      const std::uint64_t same = k <= n - 1 ? prev[static_cast<std::size_t>(k)] : 0;
      row[static_cast<std::size_t>(k)] = static_cast<std::uint64_t>(k) * same + prev[static_cast<std::size_t>(k - 1)];
    }
  }
  return s;
}

VerificationReport check_stirling(int n_max) {
  VerificationReport r;
  r.check = "stirling";
  r.mode = CheckMode::exact;
  const auto table = stirling_table(n_max);
  std::uint64_t checked = 0;
  std::uint64_t failures = 0;
  for (int n = 0; n <= n_max; ++n) {
    for (int x = -5; x <= 5; ++x) {
      __int128 power = 1;
      for (int i = 0; i < n; ++i) power *= x;
      __int128 sum = 0;
      __int128 falling = 1;
      for (int k = 0; k <= n; ++k) {
        sum += static_cast<__int128>(table[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)]) * falling;
        falling *= (x - k);
      }
      ++checked;
      if (sum != power) ++failures;
    }
  }
  bool boundary_ok = true;
  for (int n = 1; n <= n_max; ++n) {
    boundary_ok = boundary_ok && table[static_cast<std::size_t>(n)][static_cast<std::size_t>(n)] == 1 &&
                  table[static_cast<std::size_t>(n)][1] == 1;
  }
  r.add_exact("identity failures over n <= n_max, x in [-5, 5]", static_cast<double>(failures), 0.0, failures == 0);
  r.add_exact("S(n,n) = S(n,1) = 1", boundary_ok ? 0.0 : 1.0, 0.0, boundary_ok);
  r.details["n_max"] = n_max;
  r.details["identities_checked"] = checked;
  if (n_max >= 4) r.details["S(4,2)"] = table[4][2];
  r.finalize();
  return r;
}

double binomial_factorial_moment(int n, double p, int k) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::invalid_argument, "p must lie in [0, 1]");
  if (k < 1 || n < 0) throw Error(ErrorCode::invalid_argument, "need k >= 1 and n >= 0");
  if (k > n) return 0.0;
  double f = 1.0;
  for (int j = 0; j < k; ++j) f *= static_cast<double>(n - j);
  return f * std::pow(p, k);
}

double binomial_factorial_moment_by_pmf(int n, double p, int k) {
  double total = 0.0;
  double binom = 1.0;  // C(n, y), exact for n <= 60
  for (int y = 0; y <= n; ++y) {
    if (y > 0) binom = binom * static_cast<double>(n - y + 1) / static_cast<double>(y);
    double falling = 1.0;
    for (int j = 0; j < k; ++j) falling *= static_cast<double>(y - j);
    if (falling == 0.0) continue;
    total += binom * std::pow(p, y) * std::pow(1.0 - p, n - y) * falling;
  }
  return total;
}

VerificationReport check_binomial(int n_max) {
  VerificationReport r;
  r.check = "binomial";
  r.mode = CheckMode::exact;
  const double grid[] = {0.0, 0.05, 0.1, 0.2, 0.3, 0.5, 0.7, 0.9, 1.0};
  double worst = 0.0;
  std::uint64_t cases = 0;
  for (int n = 0; n <= n_max; ++n) {
    for (double p : grid) {
      for (int k = 1; k <= n + 1; ++k) {
        const double a = binomial_factorial_moment(n, p, k);
        const double b = binomial_factorial_moment_by_pmf(n, p, k);
        worst = std::max(worst, std::fabs(a - b) / std::max(1.0, std::fabs(a)));
        ++cases;
      }
    }
  }
  r.add_exact("max relative deviation closed form vs pmf sum", worst, 1e-12, worst <= 1e-12);
  r.details["n_max"] = n_max;
  r.details["cases"] = cases;
  r.finalize();
  return r;
}

ChernoffExponent compute_c_of_m(double p) {
  if (!(p >= 0.0 && p < 0.5)) {
    throw Error(ErrorCode::invalid_p, "compute_c_of_m: p must lie in [0, 1/2), got " + format_double(p));
  }
  ChernoffExponent e;
  e.t = std::log(2.0 * (1.0 - p) / (1.0 - 2.0 * p));
  e.c = 2.0 * p * e.t - std::log((1.0 - p) / (1.0 - 2.0 * p));
  return e;
}

VerificationReport check_c_of_m(double p) {
  VerificationReport r;
  r.check = "c-of-m";
  r.mode = CheckMode::exact;
  const ChernoffExponent e = compute_c_of_m(p);
  r.details["p"] = p;
  r.details["t"] = e.t;
  r.details["c"] = e.c;
  double first_nonpositive = std::numeric_limits<double>::quiet_NaN();
  for (int i = 1; i < 500; ++i) {
    const double q = i / 1000.0;
    if (compute_c_of_m(q).c <= 0.0) {
      first_nonpositive = q;
      break;
    }
  }
  const bool positive_everywhere = std::isnan(first_nonpositive);
  r.details["grid"] = "p = 0.001, 0.002, ..., 0.499";
  r.details["positivity_threshold"] = positive_everywhere ? nlohmann::ordered_json("none below 0.5")
                                                          : nlohmann::ordered_json(first_nonpositive);
  if (p > 0.0) r.add_exact("-c (must be < 0)", -e.c, 0.0, e.c > 0.0);
  r.add_exact("grid points with c <= 0", positive_everywhere ? 0.0 : 1.0, 0.0, positive_everywhere);
  r.finalize();
  return r;
}

VerificationReport check_hypotheses(const DistributionSpec& spec, int d, double alpha) {
  const HypothesisReport h = hypothesis_report(spec, d, alpha);
  VerificationReport r;
  r.check = "hypotheses";
  r.mode = CheckMode::exact;
  r.details["distribution"] = spec.canonical();
  r.details["d"] = d;
  r.details["alpha"] = alpha;
  r.details["positive_moment"] = to_string(h.positive_moment);
  r.details["negative_mean"] = to_string(h.negative_mean);
  r.details["negative_fourth_moment"] = to_string(h.negative_fourth);
  r.details["tail_integral"] = to_string(h.tail_integral);
  r.details["l1_granted"] = h.l1_granted;
  r.details["as_granted"] = h.as_granted;
  r.details["mode"] = h.mode;
  r.details["notes"] = h.notes;
  r.finalize();
  return r;
}

VerificationReport check_integrability_EM1(const DistributionSpec& spec, int d, int n) {
  if (d < 1 || n < 1) throw Error(ErrorCode::invalid_argument, "need d >= 1 and n >= 1");
  VerificationReport r;
  r.check = "integrability";
  r.mode = CheckMode::exact;
  const double power = 2.0 * d;
  const TailPowerIntegral analytic = tail_power_integral(spec, power);
  // Decade increments of the truncated integral: a power tail t^{-a} gives a
  // ratio 10^{1-a}, which is below 1 exactly when the integral converges.
  std::vector<double> partial;
  for (int e = 1; e <= 8; ++e) partial.push_back(tail_power_integral_to(spec, power, std::pow(10.0, e)));
  const double inc_last = partial[7] - partial[6];
  const double inc_prev = partial[6] - partial[5];
  bool numeric_finite = true;
  if (inc_last > 1e-12 * (1.0 + partial[7])) numeric_finite = inc_prev > 0.0 && inc_last / inc_prev < 0.999;
  r.details["distribution"] = spec.canonical();
  r.details["d"] = d;
  r.details["integral"] = number(analytic.value);
  r.details["method"] = analytic.method;
  r.details["finite"] = analytic.finite;
  r.details["quadrature_to_1e8"] = partial[7];
  r.details["quadrature_decade_ratio"] = inc_prev > 0.0 ? number(inc_last / inc_prev) : nlohmann::ordered_json(0.0);
  r.details["quadrature_finite"] = numeric_finite;
  if (analytic.finite) {
    r.details["n"] = n;
    r.details["lower_bound_E_Mn_minus_E_Mn_plus"] = -std::pow(static_cast<double>(n), power + 1.0) * analytic.value;
  }
  r.add_exact("analytic and quadrature classifications agree", analytic.finite == numeric_finite ? 0.0 : 1.0, 0.0,
              analytic.finite == numeric_finite);
  r.finalize();
  return r;
}

}  // namespace glp
