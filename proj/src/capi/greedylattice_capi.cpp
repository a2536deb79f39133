#include "greedylattice/greedylattice.h"

#include <cmath>
#include <cstring>
#include <json.hpp>
#include <limits>
#include <map>
#include <new>
#include <string>

#include "distribution.hpp"
#include "error.hpp"
#include "estimation.hpp"
#include "hypotheses.hpp"
#include "solver.hpp"
#include "verify.hpp"
#include "weight_field.hpp"

struct glp_field {
  glp::WeightField field;
};

struct glp_solution {
  glp::SolverResult result;
  glp::GreedyPathStats stats;
  int dimension = 0;
};

namespace {

thread_local std::string last_error;

glp_status to_status(glp::ErrorCode code) {
  return static_cast<glp_status>(static_cast<int>(code));
}

template <class F>
glp_status guarded(F&& body) {
  last_error.clear();
  try {
    return body();
  } catch (const glp::Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return GLP_RESOURCE_BOUND;
  } catch (const std::exception& e) {
    last_error = e.what();
    return GLP_INTERNAL_ERROR;
  } catch (...) {
    last_error = "unknown error";
    return GLP_INTERNAL_ERROR;
  }
}

glp_status fail(glp_status s, const char* message) {
  last_error = message;
  return s;
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

glp::TruncationLevel level(double m) {
  if (std::isnan(m)) throw glp::Error(glp::ErrorCode::invalid_argument, "truncation level is NaN");
  if (m < 0.0 || std::isinf(m)) return glp::TruncationLevel::none();
  return glp::TruncationLevel(m);
}

glp::RunOptions run_options(const glp_run_options* o) {
  glp::RunOptions r;
  if (o != nullptr) {
    r.threads = o->threads == 0 ? 1 : o->threads;
    r.solver.node_budget = o->node_budget;
    r.solver.warm_start_width = o->warm_start_width;
    r.stream = o->stream;
  }
  return r;
}

nlohmann::ordered_json number(double x) {
  if (std::isfinite(x)) return x;
  return glp::format_double(x);
}

glp_solution* make_solution(glp::SolverResult r, const glp::WeightField& field, glp::TruncationLevel m) {
  auto* s = new glp_solution{};
  s->stats = glp::greedy_stats(r, field, m);
  s->result = std::move(r);
  s->dimension = field.dimension();
  return s;
}

}  // namespace

extern "C" {

const char* glp_version(void) { return "1.0.0"; }

const char* glp_status_name(glp_status status) {
  switch (status) {
    case GLP_OK: return "OK";
    case GLP_BUDGET_EXCEEDED: return "BudgetExceeded";
    case GLP_INTERNAL_ERROR: return "InternalError";
    default: break;
  }
  const int code = static_cast<int>(status);
  if (code >= 1 && code <= static_cast<int>(glp::ErrorCode::io_error)) {
    return glp::error_code_name(static_cast<glp::ErrorCode>(code));
  }
  return "Unknown";
}

const char* glp_last_error(void) { return last_error.c_str(); }

void glp_string_free(char* s) { std::free(s); }

glp_status glp_distribution_canonical(const char* dist, char** out) {
  if (dist == nullptr || out == nullptr) return fail(GLP_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = copy_string(glp::DistributionSpec::parse(dist).canonical());
    return GLP_OK;
  });
}

glp_status glp_distribution_mean(const char* dist, double* out) {
  if (dist == nullptr || out == nullptr) return fail(GLP_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = glp::DistributionSpec::parse(dist).mean();
    return GLP_OK;
  });
}

glp_status glp_tail_prob(const char* dist, double m, double* out) {
  if (dist == nullptr || out == nullptr) return fail(GLP_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = glp::tail_prob(glp::DistributionSpec::parse(dist), m);
    return GLP_OK;
  });
}

glp_status glp_overshoot_mean(const char* dist, double m, double* out) {
  if (dist == nullptr || out == nullptr) return fail(GLP_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = glp::overshoot_mean(glp::DistributionSpec::parse(dist), m);
    return GLP_OK;
  });
}

glp_status glp_hypothesis_report(const char* dist, int d, double alpha, char** json_out) {
  if (dist == nullptr || json_out == nullptr) return fail(GLP_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto report = glp::check_hypotheses(glp::DistributionSpec::parse(dist), d, alpha);
    *json_out = copy_string(glp::to_json(report).dump(2));
    return GLP_OK;
  });
}

glp_status glp_field_create(const char* dist, int d, uint64_t seed, glp_field** out) {
  if (dist == nullptr || out == nullptr) return fail(GLP_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new glp_field{glp::WeightField(glp::DistributionSpec::parse(dist), d, seed)};
    return GLP_OK;
  });
}

void glp_field_destroy(glp_field* field) { delete field; }

glp_status glp_field_sample(glp_field* field, const int32_t* coords, double* out) {
  if (field == nullptr || coords == nullptr || out == nullptr) return fail(GLP_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const int d = field->field.dimension();
    *out = field->field.sample(glp::Vertex(std::span<const int32_t>(coords, static_cast<std::size_t>(d))));
    return GLP_OK;
  });
}

glp_status glp_solve(glp_field* field, int n, double m, uint64_t node_budget, size_t warm_start_width,
                     glp_solution** out) {
  if (field == nullptr || out == nullptr) return fail(GLP_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    glp::SolverOptions opts;
    opts.node_budget = node_budget;
    opts.warm_start_width = warm_start_width;
    const auto trunc = level(m);
    auto r = glp::max_weight_path(field->field, n, trunc, opts);
    const bool exact = r.exact;
    *out = make_solution(std::move(r), field->field, trunc);
    if (!exact) {
      last_error = "node budget exhausted before optimality was proved";
      return GLP_BUDGET_EXCEEDED;
    }
    return GLP_OK;
  });
}

glp_status glp_beam_search(glp_field* field, int n, double m, size_t width, glp_solution** out) {
  if (field == nullptr || out == nullptr) return fail(GLP_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto trunc = level(m);
    *out = make_solution(glp::beam_search(field->field, n, width, trunc), field->field, trunc);
    return GLP_OK;
  });
}

void glp_solution_destroy(glp_solution* solution) { delete solution; }

double glp_solution_value(const glp_solution* s) {
  return s != nullptr ? s->result.value : std::numeric_limits<double>::quiet_NaN();
}

int glp_solution_length(const glp_solution* s) {
  return s != nullptr ? static_cast<int>(s->result.path.length()) : 0;
}

int glp_solution_dimension(const glp_solution* s) { return s != nullptr ? s->dimension : 0; }

glp_status glp_solution_path(const glp_solution* s, int32_t* coords, size_t capacity) {
  if (s == nullptr || coords == nullptr) return fail(GLP_INVALID_ARGUMENT, "null argument");
  const auto& vs = s->result.path.vertices();
  const auto d = static_cast<std::size_t>(s->dimension);
  if (capacity < vs.size() * d) return fail(GLP_INVALID_ARGUMENT, "coordinate buffer too small");
  for (std::size_t i = 0; i < vs.size(); ++i) {
    for (std::size_t k = 0; k < d; ++k) coords[i * d + k] = vs[i][static_cast<int>(k)];
  }
  last_error.clear();
  return GLP_OK;
}

uint64_t glp_solution_nodes_expanded(const glp_solution* s) { return s != nullptr ? s->result.nodes_expanded : 0; }
uint64_t glp_solution_nodes_pruned(const glp_solution* s) { return s != nullptr ? s->result.nodes_pruned : 0; }
int glp_solution_exact(const glp_solution* s) { return s != nullptr && s->result.exact ? 1 : 0; }
size_t glp_solution_n_below(const glp_solution* s) { return s != nullptr ? s->stats.n_below : 0; }
double glp_solution_defect(const glp_solution* s) { return s != nullptr ? s->stats.defect : 0.0; }

void glp_run_options_default(glp_run_options* options) {
  if (options == nullptr) return;
  const glp::RunOptions r;
  options->threads = r.threads;
  options->node_budget = r.solver.node_budget;
  options->warm_start_width = r.solver.warm_start_width;
  options->stream = r.stream;
}

glp_status glp_solve_replicas(const char* dist, int d, int n, double m, uint64_t first, uint64_t count, uint64_t seed,
                              const glp_run_options* options, glp_replica* out) {
  if (dist == nullptr || (out == nullptr && count > 0)) return fail(GLP_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto outcomes = glp::solve_replicas(glp::DistributionSpec::parse(dist), d, n, level(m), first, count, seed,
                                              run_options(options));
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
      out[i] = {outcomes[i].value, outcomes[i].exact ? 1 : 0, outcomes[i].n_below, outcomes[i].defect};
    }
    return GLP_OK;
  });
}

glp_status glp_summarize(int n, double m, const glp_replica* replicas, size_t count, glp_estimate_row* out) {
  if (replicas == nullptr || out == nullptr) return fail(GLP_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    std::vector<glp::ReplicaOutcome> outcomes(count);
    for (std::size_t i = 0; i < count; ++i) {
      outcomes[i] = {replicas[i].value, replicas[i].exact != 0, static_cast<std::size_t>(replicas[i].n_below),
                     replicas[i].defect};
    }
    const auto row = glp::summarize(n, level(m), outcomes);
    *out = {row.n, row.m.m(), row.replicas, row.mean, row.stderr_, row.ci_low, row.ci_high, row.exact_fraction};
    return GLP_OK;
  });
}

glp_status glp_limit_estimate(const char* dist, const glp_estimate_row* rows, size_t count, double target_precision,
                              char** json_out) {
  if (dist == nullptr || rows == nullptr || json_out == nullptr) return fail(GLP_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto spec = glp::DistributionSpec::parse(dist);
    std::map<double, std::vector<glp::EstimateRow>> by_m;
    for (std::size_t i = 0; i < count; ++i) {
      const auto& r = rows[i];
      glp::EstimateRow e;
      e.n = r.n;
      e.m = level(r.m);
      e.replicas = r.replicas;
      e.mean = r.mean;
      e.stderr_ = r.stderr_;
      e.ci_low = r.ci_low;
      e.ci_high = r.ci_high;
      e.exact_fraction = r.exact_fraction;
      by_m[e.m.m()].push_back(e);
    }
    std::vector<glp::TruncatedConstant> per_m;
    for (auto& [m, group] : by_m) per_m.push_back(glp::truncated_constant_from_rows(std::move(group)));
    std::optional<double> target;
    if (target_precision > 0.0) target = target_precision;
    const auto limit = glp::assemble_limit(spec, std::move(per_m), target);
    nlohmann::ordered_json j;
    j["distribution"] = spec.canonical();
    auto& levels = j["per_m"] = nlohmann::ordered_json::array();
    for (const auto& tc : limit.per_m) {
      nlohmann::ordered_json e;
      e["m"] = number(tc.m.m());
      e["n_max"] = tc.rows.back().n;
      e["estimate"] = tc.estimate;
      e["drift"] = tc.drift;
      e["halfwidth"] = tc.halfwidth;
      levels.push_back(std::move(e));
    }
    j["estimate"] = limit.estimate;
    j["halfwidth"] = limit.halfwidth;
    j["bias_bound"] = number(limit.bias_bound);
    j["mean_x0"] = number(limit.mean_x0);
    j["above_mean"] = limit.above_mean;
    j["monotone_ok"] = limit.monotone_ok;
    *json_out = copy_string(j.dump(2));
    return GLP_OK;
  });
}

glp_status glp_verify(const char* check, const char* params_json, char** report_json, int* passed) {
  if (check == nullptr || report_json == nullptr || passed == nullptr) {
    return fail(GLP_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&] {
    nlohmann::json params = nlohmann::json::object();
    if (params_json != nullptr && *params_json != '\0') {
      try {
        params = nlohmann::json::parse(params_json);
      } catch (const nlohmann::json::parse_error& e) {
        throw glp::Error(glp::ErrorCode::parse_error, std::string("check parameters: ") + e.what());
      }
    }
    const auto reports = glp::run_check(check, params);
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    bool all = true;
    for (const auto& r : reports) {
      out.push_back(glp::to_json(r));
      all = all && r.pass;
    }
    *report_json = copy_string(out.dump(2));
    *passed = all ? 1 : 0;
    return GLP_OK;
  });
}

}  // extern "C"
