#include "distribution.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>

#include "error.hpp"
#include "philox.hpp"

namespace glp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

[[noreturn]] void bad(const std::string& msg) { throw Error(ErrorCode::invalid_argument, msg); }

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }
double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI); }

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t");
  auto e = s.find_last_not_of(" \t");
  if (b == std::string_view::npos) return {};
  return std::string(s.substr(b, e - b + 1));
}

TailSign parse_sign(const std::string& s) {
  if (s == "+" || s == "positive" || s == "pos" || s == "1" || s == "+1") return TailSign::positive;
  if (s == "-" || s == "negative" || s == "neg" || s == "-1") return TailSign::negative;
  throw Error(ErrorCode::parse_error, "bad sign '" + s + "' (expected positive/negative)");
}

const char* sign_name(TailSign s) { return s == TailSign::positive ? "positive" : "negative"; }

void validate(const DistributionFamily& f) {
  std::visit(Overloaded{
                 [](const family::Constant& c) {
                   if (!std::isfinite(c.c)) bad("constant: c must be finite");
                 },
                 [](const family::TwoPoint& t) {
                   if (!(t.q >= 0.0 && t.q <= 1.0)) bad("two_point: q must lie in [0,1]");
                   if (!(t.a_minus >= 0.0) || !std::isfinite(t.a_minus)) bad("two_point: a_minus must be >= 0");
                   if (!std::isfinite(t.a_plus)) bad("two_point: a_plus must be finite");
                   if (t.a_plus < -t.a_minus) bad("two_point: a_plus must be >= -a_minus");
                 },
                 [](const family::Bernoulli& b) {
                   if (!(b.p >= 0.0 && b.p <= 1.0)) bad("bernoulli: p must lie in [0,1]");
                 },
                 [](const family::UniformInt& u) {
                   if (u.lo > u.hi) bad("uniform_int: lo must be <= hi");
                 },
                 [](const family::Gaussian& g) {
                   if (!(g.sigma > 0.0) || !std::isfinite(g.sigma) || !std::isfinite(g.mu))
                     bad("gaussian: sigma must be > 0");
                 },
                 [](const family::ShiftedExponential& e) {
                   if (!(e.rate > 0.0) || !std::isfinite(e.rate) || !std::isfinite(e.shift))
                     bad("shifted_exponential: rate must be > 0");
                 },
                 [](const family::ParetoTail& p) {
                   if (!(p.beta > 0.0) || !std::isfinite(p.beta)) bad("pareto_tail: beta must be > 0");
                   if (!(p.scale > 0.0) || !std::isfinite(p.scale)) bad("pareto_tail: scale must be > 0");
                 },
             },
             f);
}

// Parses "a,b,c" or "x=a,y=b" against an ordered list of parameter names.
std::vector<std::string> bind_params(const std::string& fam, const std::string& body,
                                     const std::vector<std::string>& names) {
  std::vector<std::string> parts;
  if (!body.empty()) {
    std::size_t start = 0;
    while (true) {
      auto pos = body.find(',', start);
      parts.push_back(trim(std::string_view(body).substr(start, pos - start)));
      if (pos == std::string::npos) break;
      start = pos + 1;
    }
  }
  if (parts.size() != names.size()) {
    throw Error(ErrorCode::parse_error, fam + ": expected " + std::to_string(names.size()) +
                                            " parameters, got " + std::to_string(parts.size()));
  }
  std::vector<std::string> out(names.size());
  bool any_named = false;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    auto eq = parts[i].find('=');
    if (eq == std::string::npos) {
      if (any_named) throw Error(ErrorCode::parse_error, fam + ": positional parameter after named one");
      out[i] = parts[i];
      continue;
    }
    any_named = true;
    const std::string key = trim(std::string_view(parts[i]).substr(0, eq));
    const std::string val = trim(std::string_view(parts[i]).substr(eq + 1));
    bool found = false;
    for (std::size_t j = 0; j < names.size(); ++j) {
      if (names[j] == key) {
        if (!out[j].empty()) throw Error(ErrorCode::parse_error, fam + ": duplicate parameter " + key);
        out[j] = val;
        found = true;
      }
    }
    if (!found) throw Error(ErrorCode::parse_error, fam + ": unknown parameter '" + key + "'");
  }
  for (std::size_t j = 0; j < names.size(); ++j) {
    if (out[j].empty()) throw Error(ErrorCode::parse_error, fam + ": missing parameter " + names[j]);
  }
  return out;
}

long parse_long(const std::string& s) {
  long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw Error(ErrorCode::parse_error, "expected an integer, got '" + s + "'");
  return v;
}

// E[(Y - c)^k] for Y ~ Pareto(beta, s) and c <= s. Expands around s, using
// E[(Y - s)^j] = s^j beta j! Gamma(beta - j) / Gamma(beta + 1), so every term is
// nonnegative.
double pareto_shifted_moment(double beta, double s, double c, int k) {
  if (beta <= k) return kInf;
  double total = 0.0;
  double binom = 1.0;
  double fact = 1.0;
  for (int j = 0; j <= k; ++j) {
    if (j > 0) fact *= j;
    const double centred =
        std::pow(s, j) * beta * fact * std::exp(std::lgamma(beta - j) - std::lgamma(beta + 1.0));
    total += binom * std::pow(s - c, k - j) * centred;
    binom = binom * (k - j) / (j + 1);
  }
  return total;
}

// E[xi^k] = k * int_0^inf s^{k-1} P(X < -m - s) ds / p, evaluated by quadrature.
double overshoot_moment_quadrature(const DistributionSpec& spec, double m, int k, double p) {
  auto integrand = [&](double s) {
    const double tail = spec.cdf_strict(-m - s);
    return tail == 0.0 ? 0.0 : k * std::pow(s, k - 1) * tail;
  };
  const double lo = spec.support_min();
  double value = 0.0;
  if (std::isfinite(lo)) {
    const double upper = -m - lo;
    if (upper <= 0.0) return 0.0;
    value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, 0.0, upper, 15, 1e-13);
  } else {
    boost::math::quadrature::exp_sinh<double> integrator;
    value = integrator.integrate(integrand, 0.0, kInf, 1e-13);
  }
  return value / p;
}

}  // namespace

DistributionSpec::DistributionSpec(DistributionFamily family) : family_(std::move(family)) {
  validate(family_);
}

DistributionSpec DistributionSpec::parse(std::string_view text) {
  const std::string s = trim(text);
  const auto colon = s.find(':');
  const std::string fam = trim(std::string_view(s).substr(0, colon));
  const std::string body = colon == std::string::npos ? std::string() : trim(std::string_view(s).substr(colon + 1));
  auto num = [](const std::string& v) { return parse_double(v); };
  if (fam == "constant") {
    auto p = bind_params(fam, body, {"c"});
    return DistributionSpec(family::Constant{num(p[0])});
  }
  if (fam == "two_point") {
    auto p = bind_params(fam, body, {"a_plus", "a_minus", "q"});
    return DistributionSpec(family::TwoPoint{num(p[0]), num(p[1]), num(p[2])});
  }
  if (fam == "bernoulli") {
    auto p = bind_params(fam, body, {"p"});
    return DistributionSpec(family::Bernoulli{num(p[0])});
  }
  if (fam == "uniform_int") {
    auto p = bind_params(fam, body, {"lo", "hi"});
    return DistributionSpec(family::UniformInt{parse_long(p[0]), parse_long(p[1])});
  }
  if (fam == "gaussian") {
    auto p = bind_params(fam, body, {"mu", "sigma"});
    return DistributionSpec(family::Gaussian{num(p[0]), num(p[1])});
  }
  if (fam == "shifted_exponential") {
    auto p = bind_params(fam, body, {"rate", "shift", "sign"});
    return DistributionSpec(family::ShiftedExponential{num(p[0]), num(p[1]), parse_sign(p[2])});
  }
  if (fam == "pareto_tail") {
    auto p = bind_params(fam, body, {"beta", "sign", "scale"});
    return DistributionSpec(family::ParetoTail{num(p[0]), parse_sign(p[1]), num(p[2])});
  }
  throw Error(ErrorCode::parse_error, "unknown distribution family '" + fam + "'");
}

std::string DistributionSpec::family_name() const {
  return std::visit(Overloaded{
                        [](const family::Constant&) { return "constant"; },
                        [](const family::TwoPoint&) { return "two_point"; },
                        [](const family::Bernoulli&) { return "bernoulli"; },
                        [](const family::UniformInt&) { return "uniform_int"; },
                        [](const family::Gaussian&) { return "gaussian"; },
                        [](const family::ShiftedExponential&) { return "shifted_exponential"; },
                        [](const family::ParetoTail&) { return "pareto_tail"; },
                    },
                    family_);
}

namespace {

std::vector<std::string> positional(const DistributionFamily& f) {
  auto d = [](double x) { return format_double(x); };
  return std::visit(
      Overloaded{
          [&](const family::Constant& c) { return std::vector<std::string>{d(c.c)}; },
          [&](const family::TwoPoint& t) { return std::vector<std::string>{d(t.a_plus), d(t.a_minus), d(t.q)}; },
          [&](const family::Bernoulli& b) { return std::vector<std::string>{d(b.p)}; },
          [&](const family::UniformInt& u) {
            return std::vector<std::string>{std::to_string(u.lo), std::to_string(u.hi)};
          },
          [&](const family::Gaussian& g) { return std::vector<std::string>{d(g.mu), d(g.sigma)}; },
          [&](const family::ShiftedExponential& e) {
            return std::vector<std::string>{d(e.rate), d(e.shift), sign_name(e.sign)};
          },
          [&](const family::ParetoTail& p) {
            return std::vector<std::string>{d(p.beta), sign_name(p.sign), d(p.scale)};
          },
      },
      f);
}

std::string join(const std::vector<std::string>& parts, char sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace

std::string DistributionSpec::params_string() const { return join(positional(family_), ';'); }

std::string DistributionSpec::canonical() const {
  return family_name() + ":" + join(positional(family_), ',');
}

bool DistributionSpec::integer_valued() const noexcept {
  auto is_int = [](double x) { return std::isfinite(x) && std::floor(x) == x && std::fabs(x) < 0x1.0p40; };
  return std::visit(Overloaded{
                        [&](const family::Constant& c) { return is_int(c.c); },
                        [&](const family::TwoPoint& t) { return is_int(t.a_plus) && is_int(t.a_minus); },
                        [](const family::Bernoulli&) { return true; },
                        [](const family::UniformInt&) { return true; },
                        [](const auto&) { return false; },
                    },
                    family_);
}

bool DistributionSpec::nonnegative() const noexcept { return support_min() >= 0.0; }

double DistributionSpec::quantile(double u) const {
  return std::visit(
      Overloaded{
          [](const family::Constant& c) { return c.c; },
          [&](const family::TwoPoint& t) { return u <= t.q ? -t.a_minus : t.a_plus; },
          [&](const family::Bernoulli& b) { return u <= 1.0 - b.p ? 0.0 : 1.0; },
          [&](const family::UniformInt& r) {
            const double count = static_cast<double>(r.hi - r.lo + 1);
            double k = std::ceil(u * count) - 1.0;
            k = std::clamp(k, 0.0, count - 1.0);
            return static_cast<double>(r.lo) + k;
          },
          [&](const family::Gaussian& g) {
            return g.mu - g.sigma * std::sqrt(2.0) * boost::math::erfc_inv(2.0 * u);
          },
          [&](const family::ShiftedExponential& e) {
            return e.sign == TailSign::positive ? e.shift - std::log1p(-u) / e.rate
                                                : e.shift + std::log(u) / e.rate;
          },
          [&](const family::ParetoTail& p) {
            return p.sign == TailSign::positive ? p.scale * std::pow(1.0 - u, -1.0 / p.beta)
                                                : -p.scale * std::pow(u, -1.0 / p.beta);
          },
      },
      family_);
}

double DistributionSpec::cdf(double x) const {
  return std::visit(
      Overloaded{
          [&](const family::Constant& c) { return x >= c.c ? 1.0 : 0.0; },
          [&](const family::TwoPoint& t) { return x >= t.a_plus ? 1.0 : (x >= -t.a_minus ? t.q : 0.0); },
          [&](const family::Bernoulli& b) { return x >= 1.0 ? 1.0 : (x >= 0.0 ? 1.0 - b.p : 0.0); },
          [&](const family::UniformInt& r) {
            if (x < static_cast<double>(r.lo)) return 0.0;
            if (x >= static_cast<double>(r.hi)) return 1.0;
            const double k = std::floor(x) - static_cast<double>(r.lo) + 1.0;
            return k / static_cast<double>(r.hi - r.lo + 1);
          },
          [&](const family::Gaussian& g) { return normal_cdf((x - g.mu) / g.sigma); },
          [&](const family::ShiftedExponential& e) {
            if (e.sign == TailSign::positive) return x <= e.shift ? 0.0 : -std::expm1(-e.rate * (x - e.shift));
            return x >= e.shift ? 1.0 : std::exp(-e.rate * (e.shift - x));
          },
          [&](const family::ParetoTail& p) {
            if (p.sign == TailSign::positive) return x <= p.scale ? 0.0 : 1.0 - std::pow(p.scale / x, p.beta);
            return x > -p.scale ? 1.0 : std::pow(p.scale / -x, p.beta);
          },
      },
      family_);
}

double DistributionSpec::cdf_strict(double x) const {
  return std::visit(
      Overloaded{
          [&](const family::Constant& c) { return x > c.c ? 1.0 : 0.0; },
          [&](const family::TwoPoint& t) { return x > t.a_plus ? 1.0 : (x > -t.a_minus ? t.q : 0.0); },
          [&](const family::Bernoulli& b) { return x > 1.0 ? 1.0 : (x > 0.0 ? 1.0 - b.p : 0.0); },
          [&](const family::UniformInt& r) {
            if (x <= static_cast<double>(r.lo)) return 0.0;
            if (x > static_cast<double>(r.hi)) return 1.0;
            const double k = std::ceil(x) - static_cast<double>(r.lo);
            return k / static_cast<double>(r.hi - r.lo + 1);
          },
          [&](const auto&) { return cdf(x); },
      },
      family_);
}

double DistributionSpec::mean() const {
  return std::visit(
      Overloaded{
          [](const family::Constant& c) { return c.c; },
          [](const family::TwoPoint& t) { return (1.0 - t.q) * t.a_plus - t.q * t.a_minus; },
          [](const family::Bernoulli& b) { return b.p; },
          [](const family::UniformInt& r) { return 0.5 * (static_cast<double>(r.lo) + static_cast<double>(r.hi)); },
          [](const family::Gaussian& g) { return g.mu; },
          [](const family::ShiftedExponential& e) {
            return e.sign == TailSign::positive ? e.shift + 1.0 / e.rate : e.shift - 1.0 / e.rate;
          },
          [](const family::ParetoTail& p) {
            const double m = p.beta > 1.0 ? p.beta * p.scale / (p.beta - 1.0) : kInf;
            return p.sign == TailSign::positive ? m : -m;
          },
      },
      family_);
}

double DistributionSpec::support_min() const {
  return std::visit(
      Overloaded{
          [](const family::Constant& c) { return c.c; },
          [](const family::TwoPoint& t) { return t.q > 0.0 ? -t.a_minus : t.a_plus; },
          [](const family::Bernoulli& b) { return b.p < 1.0 ? 0.0 : 1.0; },
          [](const family::UniformInt& r) { return static_cast<double>(r.lo); },
          [](const family::Gaussian&) { return -kInf; },
          [](const family::ShiftedExponential& e) { return e.sign == TailSign::positive ? e.shift : -kInf; },
          [](const family::ParetoTail& p) { return p.sign == TailSign::positive ? p.scale : -kInf; },
      },
      family_);
}

double DistributionSpec::support_max() const {
  return std::visit(
      Overloaded{
          [](const family::Constant& c) { return c.c; },
          [](const family::TwoPoint& t) { return t.q < 1.0 ? t.a_plus : -t.a_minus; },
          [](const family::Bernoulli& b) { return b.p > 0.0 ? 1.0 : 0.0; },
          [](const family::UniformInt& r) { return static_cast<double>(r.hi); },
          [](const family::Gaussian&) { return kInf; },
          [](const family::ShiftedExponential& e) { return e.sign == TailSign::positive ? kInf : e.shift; },
          [](const family::ParetoTail& p) { return p.sign == TailSign::positive ? kInf : -p.scale; },
      },
      family_);
}

TruncationLevel TruncationLevel::none() { return TruncationLevel(kInf); }

TruncationLevel::TruncationLevel(double m) : m_(m) {
  if (!(m >= 0.0)) bad("truncation level must be >= 0 (or inf), got " + format_double(m));
}

bool TruncationLevel::active() const noexcept { return std::isfinite(m_); }

std::string TruncationLevel::to_string() const { return format_double(m_); }

double tail_prob(const DistributionSpec& spec, double m) {
  if (!(m >= 0.0)) bad("tail_prob: m must be >= 0");
  return spec.cdf(-m);
}

double overshoot_mean(const DistributionSpec& spec, double m) {
  if (!(m >= 0.0)) bad("overshoot_mean: m must be >= 0");
  const double a = -m;  // E[(a - X)^+]
  return std::visit(
      Overloaded{
          [&](const family::Constant& c) { return std::max(a - c.c, 0.0); },
          [&](const family::TwoPoint& t) {
            return (t.q > 0.0 ? t.q * std::max(a + t.a_minus, 0.0) : 0.0) +
                   (t.q < 1.0 ? (1.0 - t.q) * std::max(a - t.a_plus, 0.0) : 0.0);
          },
          [&](const family::Bernoulli& b) {
            return (1.0 - b.p) * std::max(a, 0.0) + b.p * std::max(a - 1.0, 0.0);
          },
          [&](const family::UniformInt& r) {
            double s = 0.0;
            for (long k = r.lo; k <= r.hi && static_cast<double>(k) <= a; ++k) s += a - static_cast<double>(k);
            return s / static_cast<double>(r.hi - r.lo + 1);
          },
          [&](const family::Gaussian& g) {
            const double z = (a - g.mu) / g.sigma;
            return g.sigma * (z * normal_cdf(z) + normal_pdf(z));
          },
          [&](const family::ShiftedExponential& e) {
            const double b = a - e.shift;
            if (e.sign == TailSign::negative) {
              // X = shift - E: (a - X)^+ = (b + E)^+
              return b >= 0.0 ? b + 1.0 / e.rate : std::exp(e.rate * b) / e.rate;
            }
            // X = shift + E: (b - E)^+
            return b <= 0.0 ? 0.0 : b + std::expm1(-e.rate * b) / e.rate;
          },
          [&](const family::ParetoTail& p) {
            if (p.sign == TailSign::positive) return 0.0;
            // X = -Y, (a - X)^+ = (Y - m)^+
            if (p.beta <= 1.0) {
              throw Error(ErrorCode::infinite_moment,
                          "overshoot mean diverges for a Pareto negative tail with beta <= 1");
            }
            if (m <= p.scale) return p.beta * p.scale / (p.beta - 1.0) - m;
            return std::pow(p.scale, p.beta) * std::pow(m, 1.0 - p.beta) / (p.beta - 1.0);
          },
      },
      spec.family());
}

double conditional_overshoot_mean(const DistributionSpec& spec, double m) {
  const double p = tail_prob(spec, m);
  if (p <= 0.0) {
    throw Error(ErrorCode::empty_conditioning_event, "P(X_0 <= -m) = 0 at m = " + format_double(m));
  }
  return overshoot_mean(spec, m) / p;
}

double overshoot_moment(const DistributionSpec& spec, double m, int k) {
  if (k < 0) bad("overshoot_moment: k must be >= 0");
  const double p = tail_prob(spec, m);
  if (p <= 0.0) {
    throw Error(ErrorCode::empty_conditioning_event, "P(X_0 <= -m) = 0 at m = " + format_double(m));
  }
  if (k == 0) return 1.0;
  const double a = -m;
  return std::visit(
      Overloaded{
          [&](const family::Constant& c) { return std::pow(a - c.c, k); },
          [&](const family::TwoPoint& t) {
            // Conditioning on X <= -m can keep the upper atom only if a_plus <= -m.
            const double lo_mass = t.q;
            const double hi_mass = t.a_plus <= a ? 1.0 - t.q : 0.0;
            return (lo_mass * std::pow(a + t.a_minus, k) + hi_mass * std::pow(a - t.a_plus, k)) / p;
          },
          [&](const family::Bernoulli& b) {
            const double lo_mass = 1.0 - b.p;
            const double hi_mass = a >= 1.0 ? b.p : 0.0;
            return (lo_mass * std::pow(a, k) + hi_mass * std::pow(a - 1.0, k)) / p;
          },
          [&](const family::UniformInt& r) {
            double s = 0.0;
            for (long v = r.lo; v <= r.hi && static_cast<double>(v) <= a; ++v)
              s += std::pow(a - static_cast<double>(v), k);
            return s / static_cast<double>(r.hi - r.lo + 1) / p;
          },
          [&](const family::ShiftedExponential& e) {
            if (e.sign == TailSign::negative) {
              // xi = b + E with b = max(-m - shift, 0) by memorylessness.
              const double b = std::max(a - e.shift, 0.0);
              double total = 0.0, binom = 1.0, fact = 1.0;
              for (int j = 0; j <= k; ++j) {
                if (j > 0) fact *= j;
                total += binom * std::pow(b, k - j) * fact / std::pow(e.rate, j);
                binom = binom * (k - j) / (j + 1);
              }
              return total;
            }
            return overshoot_moment_quadrature(spec, m, k, p);
          },
          [&](const family::ParetoTail& pt) {
            // Only the negative tail reaches here (p > 0). Y | Y >= m is Pareto(beta, max(scale, m)).
            return pareto_shifted_moment(pt.beta, std::max(pt.scale, m), m, k);
          },
          [&](const family::Gaussian&) { return overshoot_moment_quadrature(spec, m, k, p); },
      },
      spec.family());
}

OvershootSampler::OvershootSampler(const DistributionSpec& spec, double m, std::uint64_t seed)
    : spec_(spec), m_(m), tail_(tail_prob(spec, m)), seed_(seed) {
  if (tail_ <= 0.0) {
    throw Error(ErrorCode::empty_conditioning_event, "P(X_0 <= -m) = 0 at m = " + format_double(m));
  }
}

double OvershootSampler::operator()() {
  const UniformStream stream(seed_, 0x05e5u);
  const double u = stream.at(position_++);
  double x = 0.0;
  if (const auto* r = std::get_if<family::UniformInt>(&spec_.family())) {
    // Exact: pick uniformly among the support points <= -m.
    const long top = std::min(r->hi, static_cast<long>(std::floor(-m_)));
    const double count = static_cast<double>(top - r->lo + 1);
    const double k = std::min(std::floor(u * count), count - 1.0);
    x = static_cast<double>(r->lo) + k;
  } else {
    x = spec_.quantile(u * tail_);
  }
  return std::max(-m_ - x, 0.0);
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_double(std::string_view text) {
  const std::string s = trim(text);
  if (s == "inf" || s == "+inf" || s == "infinity") return kInf;
  if (s == "-inf" || s == "-infinity") return -kInf;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::parse_error, "expected a number, got '" + s + "'");
  }
  return v;
}

}  // namespace glp
