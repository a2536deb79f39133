#include "hypotheses.hpp"

#include <algorithm>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <functional>
#include <limits>
#include <set>

#include "error.hpp"

namespace glp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Integrability threshold(double exponent, double critical) {
  if (exponent > critical) return Integrability::holds;
  if (exponent == critical) return Integrability::boundary;
  return Integrability::fails;
}

// Finite support points of a discrete law, or empty for continuous laws.
std::vector<double> atoms(const DistributionSpec& spec) {
  const auto& f = spec.family();
  if (auto c = std::get_if<family::Constant>(&f)) return {c->c};
  if (auto t = std::get_if<family::TwoPoint>(&f)) return {-t->a_minus, t->a_plus};
  if (std::get_if<family::Bernoulli>(&f)) return {0.0, 1.0};
  if (auto u = std::get_if<family::UniformInt>(&f)) {
    std::vector<double> out;
    for (long k = u->lo; k <= u->hi; ++k) out.push_back(static_cast<double>(k));
    return out;
  }
  return {};
}

double gk(const std::function<double(double)>& f, double a, double b) {
  if (b <= a) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 20, 1e-13);
}

}  // namespace

const char* to_string(Integrability i) noexcept {
  switch (i) {
    case Integrability::holds: return "holds";
    case Integrability::fails: return "fails";
    case Integrability::boundary: return "boundary";
  }
  return "?";
}

HypothesisReport hypothesis_report(const DistributionSpec& spec, int d, double alpha) {
  if (!(alpha > 0.0)) throw Error(ErrorCode::invalid_argument, "alpha must be > 0");
  if (d < 1) throw Error(ErrorCode::invalid_argument, "dimension must be >= 1");
  HypothesisReport r;
  r.d = d;
  r.alpha = alpha;
  // Every family except the Pareto tail has exponential moments on both sides
  // or bounded support, so all four conditions hold for them.
  if (const auto* p = std::get_if<family::ParetoTail>(&spec.family())) {
    if (p->sign == TailSign::positive) {
      r.positive_moment = threshold(p->beta, static_cast<double>(d));
    } else {
      r.negative_mean = threshold(p->beta, 1.0);
      r.negative_fourth = threshold(p->beta, 4.0);
      r.tail_integral = threshold(2.0 * d * p->beta, 1.0);
    }
  }
  const bool pos = r.positive_moment == Integrability::holds;
  r.l1_granted = pos && r.negative_mean == Integrability::holds;
  r.as_granted = pos && r.negative_fourth == Integrability::holds;
  r.mode = r.as_granted ? "L1 and a.s." : (r.l1_granted ? "L1 only" : "neither proved");
  if (!pos) r.notes.emplace_back("positive-tail moment condition fails; no convergence result applies");
  if (pos && !r.as_granted) r.notes.emplace_back("a.s. convergence conjectured but not proved");
  if (pos && !r.l1_granted && r.tail_integral == Integrability::holds)
    r.notes.emplace_back("L1 convergence conjectured under the finite tail integral");
  if (r.tail_integral != Integrability::holds)
    r.notes.emplace_back("tail integral infinite: the disjoint-path lower bound on E M_n is unavailable");
  return r;
}

TailPowerIntegral tail_power_integral(const DistributionSpec& spec, double power) {
  if (!(power > 0.0)) throw Error(ErrorCode::invalid_argument, "power must be > 0");
  TailPowerIntegral out;
  const auto support = atoms(spec);
  if (!support.empty()) {
    // P(X < -t) is constant on each interval between consecutive values -x of
    // the negative atoms.
    std::set<double> cuts{0.0};
    for (double x : support)
      if (x < 0.0) cuts.insert(-x);
    double total = 0.0;
    double prev = 0.0;
    for (double c : cuts) {
      if (c > prev) total += std::pow(spec.cdf_strict(-0.5 * (prev + c)), power) * (c - prev);
      prev = c;
    }
    out.value = total;
    out.method = "exact step sum";
    return out;
  }
  auto f = [&](double t) { return std::pow(spec.cdf_strict(-t), power); };
  if (const auto* p = std::get_if<family::ParetoTail>(&spec.family())) {
    if (p->sign == TailSign::positive) {
      out.value = 0.0;
      out.method = "support bounded below by scale > 0";
      return out;
    }
    const double a = p->beta * power;
    const double body = gk(f, 0.0, p->scale);
    if (a <= 1.0) {
      out.value = kInf;
      out.finite = false;
    } else {
      out.value = body + p->scale / (a - 1.0);
    }
    out.method = "quadrature on [0, scale] + analytic power tail";
    return out;
  }
  const double lo = spec.support_min();
  if (std::isfinite(lo)) {
    out.value = lo >= 0.0 ? 0.0 : gk(f, 0.0, -lo);
    out.method = "quadrature over bounded support";
    return out;
  }
  // Unbounded below with an exponential or faster tail. A negative exponential
  // with negative shift has P(X < -t) = 1 up to t = -shift; split at that kink.
  double kink = 0.0;
  if (const auto* e = std::get_if<family::ShiftedExponential>(&spec.family())) kink = std::max(0.0, -e->shift);
  boost::math::quadrature::exp_sinh<double> integrator;
  out.value = gk(f, 0.0, kink) + gk(f, kink, kink + 1.0) + integrator.integrate(f, kink + 1.0, kInf, 1e-12);
  out.method = "adaptive quadrature to infinity";
  return out;
}

double tail_power_integral_to(const DistributionSpec& spec, double power, double upper) {
  auto f = [&](double t) { return std::pow(spec.cdf_strict(-t), power); };
  // Geometric panels keep the quadrature accurate on long ranges.
  double total = 0.0;
  double a = 0.0;
  double b = std::min(1.0, upper);
  while (a < upper) {
    total += gk(f, a, b);
    a = b;
    b = std::min(upper, b * 4.0);
  }
  return total;
}

}  // namespace glp
