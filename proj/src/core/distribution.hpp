#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace glp {

enum class TailSign { positive, negative };

namespace family {
struct Constant { double c; };
// P(X = a_plus) = 1 - q, P(X = -a_minus) = q.
struct TwoPoint { double a_plus; double a_minus; double q; };
// P(X = 1) = p, P(X = 0) = 1 - p.
struct Bernoulli { double p; };
struct UniformInt { long lo; long hi; };
struct Gaussian { double mu; double sigma; };
// X = shift + E (positive) or X = shift - E (negative), E ~ Exp(rate).
struct ShiftedExponential { double rate; double shift; TailSign sign; };
// |X| is Pareto: P(|X| > y) = (scale / y)^beta for y >= scale; X carries sign.
struct ParetoTail { double beta; TailSign sign; double scale; };
}  // namespace family

using DistributionFamily =
    std::variant<family::Constant, family::TwoPoint, family::Bernoulli, family::UniformInt,
                 family::Gaussian, family::ShiftedExponential, family::ParetoTail>;

// Law of a single vertex weight X_0. Immutable once constructed; the
// constructor validates parameters and throws Error{invalid_argument}.
class DistributionSpec {
public:
  explicit DistributionSpec(DistributionFamily family);

  // "family:p1,p2,..." or "family:name=value,..." e.g. "gaussian:0,1",
  // "two_point:a_plus=1,a_minus=10,q=0.3", "pareto_tail:2,negative,1".
  static DistributionSpec parse(std::string_view text);

  const DistributionFamily& family() const noexcept { return family_; }
  std::string family_name() const;
  // Positional parameters, 17 significant digits, joined by ';'.
  std::string params_string() const;
  // family_name() + ":" + params with ',' separators; parse() round-trips it.
  std::string canonical() const;

  bool integer_valued() const noexcept;
  bool nonnegative() const noexcept;

  // Inverse CDF: smallest x with P(X <= x) >= u, for u in (0, 1).
  double quantile(double u) const;
  double cdf(double x) const;         // P(X <= x)
  double cdf_strict(double x) const;  // P(X < x)
  // E X_0; may be +-infinity for Pareto tails with beta <= 1.
  double mean() const;
  // Lower end of the support (-infinity if unbounded below).
  double support_min() const;
  double support_max() const;

private:
  DistributionFamily family_;
};

// Truncation level m >= 0; m = +infinity means no truncation.
class TruncationLevel {
public:
  static TruncationLevel none();
  explicit TruncationLevel(double m);

  double m() const noexcept { return m_; }
  bool active() const noexcept;
  double apply(double x) const noexcept { return x < -m_ ? -m_ : x; }

  std::string to_string() const;  // "inf" or 17-digit number

  friend bool operator==(const TruncationLevel&, const TruncationLevel&) = default;

private:
  double m_;
};

// max(x, -m); identity when m = +infinity.
inline double truncate(double x, TruncationLevel t) noexcept { return t.apply(x); }

// P(X_0 <= -m).
double tail_prob(const DistributionSpec& spec, double m);

// E[(-m - X_0) 1{X_0 <= -m}]. Throws Error{infinite_moment} when it diverges.
double overshoot_mean(const DistributionSpec& spec, double m);

// E(-m - X_0 | X_0 <= -m); throws Error{empty_conditioning_event} if
// tail_prob is zero.
double conditional_overshoot_mean(const DistributionSpec& spec, double m);

// E[xi^k] for xi ~ law of (-m - X_0) given X_0 <= -m. Returns +infinity when
// the moment diverges. Throws Error{empty_conditioning_event} if tail_prob is 0.
double overshoot_moment(const DistributionSpec& spec, double m, int k);

// I.i.d. draws from the overshoot law, by inverse CDF of the conditional law.
class OvershootSampler {
public:
  OvershootSampler(const DistributionSpec& spec, double m, std::uint64_t seed);

  double operator()();
  double tail_probability() const noexcept { return tail_; }

private:
  DistributionSpec spec_;
  double m_;
  double tail_;
  std::uint64_t seed_;
  std::uint64_t position_ = 0;
};

std::string format_double(double x);  // %.17g, "inf"/"-inf"/"nan" spelled out
double parse_double(std::string_view text);  // accepts "inf", throws Error{parse_error}

}  // namespace glp
