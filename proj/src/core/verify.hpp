#pragma once

#include <cstdint>
#include <json.hpp>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "distribution.hpp"
#include "estimation.hpp"

namespace glp {

enum class CheckMode { exact, statistical };
enum class CheckStatus { passed, failed, vacuous, infinite_moment };

const char* to_string(CheckMode m) noexcept;
const char* to_string(CheckStatus s) noexcept;

// One compared quantity. Statistical measurements pass when
// statistic <= bound + 3 * stderr; exact ones when statistic <= bound.
struct Measurement {
  std::string label;
  double statistic = 0.0;
  double bound = 0.0;
  double stderr_ = 0.0;
  bool pass = true;
};

inline constexpr double kSigmaSlack = 3.0;

struct VerificationReport {
  std::string check;
  CheckMode mode = CheckMode::exact;
  CheckStatus status = CheckStatus::passed;
  bool pass = true;
  std::vector<Measurement> measurements;
  nlohmann::ordered_json details = nlohmann::ordered_json::object();

  // Adds a one-sided statistical comparison.
  Measurement& add_statistical(std::string label, double statistic, double bound, double stderr_);
  Measurement& add_exact(std::string label, double statistic, double bound, bool pass);
  // pass = all measurements pass; status follows unless already vacuous or infinite_moment.
  void finalize();
};

nlohmann::ordered_json to_json(const VerificationReport& r);

// --- exact combinatorial identities ---------------------------------------

// S(n, k) for 0 <= k <= n <= n_max (n_max <= 20), via S(n,k) = k S(n-1,k) + S(n-1,k-1).
std::vector<std::vector<std::uint64_t>> stirling_table(int n_max);
// x^n == sum_k S(n,k) x (x-1) ... (x-k+1) for every n <= n_max and integer x in [-5, 5].
VerificationReport check_stirling(int n_max);

// prod_{j<k} (n - j) * p^k.
double binomial_factorial_moment(int n, double p, int k);
// The same moment by direct summation over the Binomial(n, p) pmf.
double binomial_factorial_moment_by_pmf(int n, double p, int k);
// Closed form vs pmf summation for all n <= n_max, k <= n + 1, p on a grid; relative 1e-12.
VerificationReport check_binomial(int n_max);

// --- key lemma -------------------------------------------------------------

// Monte Carlo E prod_{j<k}(N_n(m) - j) against prod_{j<k}(n - j) p^k for each k.
VerificationReport check_key_lemma_statistical(const DistributionSpec& spec, int d, int n, double m,
                                               std::span<const int> ks, std::uint64_t replicas,
                                               std::uint64_t seed, const RunOptions& options = {});

struct ExactLemmaParams {
  std::string q = "1/2";  // P(X = -a_minus), as "a/b" or a terminating decimal
  double a_plus = 1.0;
  double a_minus = 10.0;
  double m = 4.0;
  int n = 3;
  int d = 2;
  int max_k = 2;
  unsigned threads = 1;
};

// Enumerates every two-point configuration of the ball of radius n - 1, solves
// each, and compares the factorial moments, the per-vertex Chebyshev step and
// the per-pair FKG step exactly in rational arithmetic.
VerificationReport check_key_lemma_exact_small(const ExactLemmaParams& params);

// --- concentration of N_n(m) ----------------------------------------------

struct ChernoffExponent {
  double t = 0.0;  // ln(2(1-p)/(1-2p))
  double c = 0.0;  // 2p t - ln((1-p)/(1-2p))
};

// Throws Error{invalid_p} unless 0 <= p < 1/2.
ChernoffExponent compute_c_of_m(double p);
// Evaluates (t, c) at p and scans p over (0, 0.5) for the smallest p with c <= 0.
VerificationReport check_c_of_m(double p);

VerificationReport check_concentration_Nn(const DistributionSpec& spec, int d, int n, double m,
                                          std::uint64_t replicas, std::uint64_t seed,
                                          const RunOptions& options = {});

// --- overshoot sums ---------------------------------------------------------

VerificationReport check_fourth_moment(const DistributionSpec& spec, double m, int ell, std::uint64_t batches,
                                       std::uint64_t seed, unsigned threads = 1);

// E(Y1 + Y2)^4 by two-dimensional quadrature against 2 E Y^4 + 6 (E Y^2)^2 for
// the centred overshoot Y (continuous laws).
VerificationReport check_fourth_moment_identity(const DistributionSpec& spec, double m);

// a(m, eps) = 512 p^2 E xi^4 / eps^4 with eps = 4 * overshoot_mean(m).
double partial_sum_constant(const DistributionSpec& spec, double m);
VerificationReport check_partial_sum_bound(const DistributionSpec& spec, int d, int n, double m,
                                           std::uint64_t batches, std::uint64_t seed, unsigned threads = 1);

// --- lower tail of M_n -----------------------------------------------------

// 2d paths of n vertices from the origin, pairwise sharing only the origin:
// arm s*e_i turns into s*e_{i+1} (and e_{d-1} into -e_0) after its first step.
std::vector<SelfAvoidingPath> disjoint_arms(int d, int n);

VerificationReport check_tail_bound_Mn(const DistributionSpec& spec, int d, int n, std::span<const double> t_grid,
                                       std::uint64_t replicas, std::uint64_t seed, const RunOptions& options = {});

VerificationReport check_integrability_EM1(const DistributionSpec& spec, int d, int n = 1);

VerificationReport check_hypotheses(const DistributionSpec& spec, int d, double alpha);

VerificationReport check_error_decomposition(const DistributionSpec& spec, int d, int n, double m,
                                             std::uint64_t replicas, std::uint64_t seed,
                                             const RunOptions& options = {});

// --- suites ----------------------------------------------------------------

// Named preset runs. profile is "quick" or "full".
std::vector<VerificationReport> run_profile(const std::string& profile, std::uint64_t seed, unsigned threads);

// Names accepted by run_check, "all" included.
const std::vector<std::string>& check_names();

// Runs one named check with parameters taken from a JSON object; absent keys
// take the quick-profile defaults. "all" runs run_profile. Throws
// Error{unknown_check} for other names.
std::vector<VerificationReport> run_check(const std::string& check, const nlohmann::json& params);

}  // namespace glp
