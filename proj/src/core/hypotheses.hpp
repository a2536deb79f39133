#pragma once

#include <string>
#include <vector>

#include "distribution.hpp"

namespace glp {

// "boundary" marks the exact threshold exponent, where the integral diverges
// only logarithmically. It counts as not holding.
enum class Integrability { holds, fails, boundary };

const char* to_string(Integrability i) noexcept;

struct HypothesisReport {
  int d = 0;
  double alpha = 0.0;
  Integrability positive_moment = Integrability::holds;  // E (X+)^d (log+ X+)^{d+alpha}
  Integrability negative_mean = Integrability::holds;    // E X^-
  Integrability negative_fourth = Integrability::holds;  // E (X^-)^4
  Integrability tail_integral = Integrability::holds;    // int_0^inf P(X < -t)^{2d} dt
  bool l1_granted = false;
  bool as_granted = false;
  std::string mode;  // "L1 and a.s.", "L1 only", "neither proved"
  std::vector<std::string> notes;
};

HypothesisReport hypothesis_report(const DistributionSpec& spec, int d, double alpha);

struct TailPowerIntegral {
  double value = 0.0;  // +inf when divergent
  bool finite = true;
  std::string method;
};

// int_0^inf P(X_0 < -t)^power dt. Discrete laws are summed exactly over their
// step intervals; continuous laws use adaptive quadrature, with the Pareto
// tail beyond its scale integrated analytically.
TailPowerIntegral tail_power_integral(const DistributionSpec& spec, double power);

// Quadrature-only estimate of int_0^upper P(X_0 < -t)^power dt, used to check
// the analytic classification by watching growth in the upper limit.
double tail_power_integral_to(const DistributionSpec& spec, double power, double upper);

}  // namespace glp
