#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <ostream>
#include <stdexcept>

#include "capi.hpp"
#include "config.hpp"
#include "store.hpp"

namespace glpcli {

namespace fs = std::filesystem;

namespace {

const std::vector<std::string> kSolveHeader = {"experiment_id", "d",     "family",         "params",
                                               "n",             "m",     "seed",           "method",
                                               "value",         "exact", "nodes_expanded", "nodes_pruned",
                                               "n_below",       "defect", "path"};
const std::vector<std::string> kReplicaHeader = {"n", "m", "replica", "value", "exact", "n_below", "defect"};

struct DistName {
  std::string canonical;
  std::string family;
  std::string params;  // ';'-separated
};

DistName describe(const std::string& dist) {
  char* raw = nullptr;
  check(glp_distribution_canonical(dist.c_str(), &raw));
  DistName d;
  d.canonical = take_string(raw);
  const auto colon = d.canonical.find(':');
  d.family = d.canonical.substr(0, colon);
  d.params = colon == std::string::npos ? std::string() : d.canonical.substr(colon + 1);
  std::replace(d.params.begin(), d.params.end(), ',', ';');
  return d;
}

std::string experiment_id(int d, const std::string& canonical, std::uint64_t seed) {
  return hex64(fnv1a64("d=" + std::to_string(d) + "\ndist=" + canonical + "\nseed=" + std::to_string(seed) + "\n"));
}

std::string m_text(double m) { return format_number(std::isinf(m) ? INFINITY : m); }

void write_if_changed(const fs::path& path, const std::string& content) {
  if (fs::exists(path) && read_file(path) == content) return;
  write_file_atomic(path, content);
}

std::string join_ints(const std::vector<int>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + std::to_string(xs[i]);
  return s;
}

std::string join_numbers(const std::vector<double>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + m_text(xs[i]);
  return s;
}

std::uint64_t parse_u64_field(const std::string& s, const std::string& where) {
  const double v = parse_number(s, where);
  if (v < 0 || v != std::floor(v)) throw std::runtime_error(where + ": '" + s + "' is not a count");
  return static_cast<std::uint64_t>(v);
}

}  // namespace

int run_solve(const Common& common, const SolveConfig& cfg, std::ostream& out) {
  if (cfg.n < 1) throw std::runtime_error("--n must be >= 1");
  const DistName dist = describe(cfg.dist);
  Field field;
  {
    glp_field* raw = nullptr;
    check(glp_field_create(cfg.dist.c_str(), cfg.d, cfg.seed, &raw));
    field.reset(raw);
  }
  const double m = cfg.m.value_or(INFINITY);
  if (m < 0) throw std::runtime_error("--m must be >= 0");
  glp_solution* raw = nullptr;
  glp_status status = GLP_OK;
  if (cfg.beam > 0) {
    status = glp_beam_search(field.get(), cfg.n, m, cfg.beam, &raw);
  } else {
    status = glp_solve(field.get(), cfg.n, m, cfg.node_budget, cfg.warm_start, &raw);
  }
  if (status != GLP_OK && status != GLP_BUDGET_EXCEEDED) check(status);
  Solution sol(raw);

  const int len = glp_solution_length(sol.get());
  const int dim = glp_solution_dimension(sol.get());
  std::vector<int32_t> coords(static_cast<std::size_t>(len * dim));
  check(glp_solution_path(sol.get(), coords.data(), coords.size()));
  std::string path_display;
  std::string path_csv;
  for (int i = 0; i < len; ++i) {
    path_display += i ? " (" : "(";
    path_csv += i ? " " : "";
    for (int k = 0; k < dim; ++k) {
      const auto c = std::to_string(coords[static_cast<std::size_t>(i * dim + k)]);
      path_display += (k ? "," : "") + c;
      path_csv += (k ? ";" : "") + c;
    }
    path_display += ")";
  }
  const bool exact = glp_solution_exact(sol.get()) != 0;
  const double value = glp_solution_value(sol.get());
  const std::string method = cfg.beam > 0 ? "beam:" + std::to_string(cfg.beam) : "exact";

  out << "distribution: " << dist.canonical << "\n";
  out << "d: " << cfg.d << "\nn: " << cfg.n << "\nm: " << m_text(m) << "\nseed: " << cfg.seed << "\n";
  out << "method: " << method << "\n";
  out << "value: " << format_number(value) << "\n";
  out << "path: " << path_display << "\n";
  out << "exact: " << (exact ? "true" : "false") << "\n";
  out << "nodes_expanded: " << glp_solution_nodes_expanded(sol.get()) << "\n";
  out << "nodes_pruned: " << glp_solution_nodes_pruned(sol.get()) << "\n";
  if (std::isfinite(m)) {
    out << "n_below: " << glp_solution_n_below(sol.get()) << "\n";
    out << "defect: " << format_number(glp_solution_defect(sol.get())) << "\n";
  }
  if (status == GLP_BUDGET_EXCEEDED) out << "note: node budget exhausted; value is a lower bound\n";

  const std::vector<std::string> row = {experiment_id(cfg.d, dist.canonical, cfg.seed),
                                        std::to_string(cfg.d),
                                        dist.family,
                                        dist.params,
                                        std::to_string(cfg.n),
                                        m_text(m),
                                        std::to_string(cfg.seed),
                                        method,
                                        format_number(value),
                                        exact ? "1" : "0",
                                        std::to_string(glp_solution_nodes_expanded(sol.get())),
                                        std::to_string(glp_solution_nodes_pruned(sol.get())),
                                        std::to_string(glp_solution_n_below(sol.get())),
                                        format_number(glp_solution_defect(sol.get())),
                                        path_csv};
  const fs::path root(common.out);
  const fs::path file = root / "results" / "solve.csv";
  bool present = false;
  std::size_t rows = 0;
  if (fs::exists(file)) {
    const CsvTable t = read_csv(file);
    rows = t.rows.size();
    present = std::find(t.rows.begin(), t.rows.end(), row) != t.rows.end();
  }
  if (!present) {
    append_csv(file, kSolveHeader, {row});
    ++rows;
  }
  const std::string config = "cmd=solve\nd=" + std::to_string(cfg.d) + "\ndist=" + dist.canonical +
                             "\nn=" + std::to_string(cfg.n) + "\nm=" + m_text(m) + "\nseed=" +
                             std::to_string(cfg.seed) + "\nmethod=" + method + "\nnode-budget=" +
                             std::to_string(cfg.node_budget) + "\nwarm-start=" + std::to_string(cfg.warm_start) + "\n";
  Manifest manifest(root);
  nlohmann::json entry;
  // Keep the hashes of every configuration that contributed a row.
  std::vector<std::string> hashes;
  if (const auto* prev = manifest.find("results/solve.csv"); prev != nullptr && prev->contains("config_hashes")) {
    hashes = (*prev)["config_hashes"].get<std::vector<std::string>>();
  }
  const std::string h = hex64(fnv1a64(config));
  if (std::find(hashes.begin(), hashes.end(), h) == hashes.end()) hashes.push_back(h);
  std::sort(hashes.begin(), hashes.end());
  entry["kind"] = "solve";
  entry["config_hashes"] = hashes;
  entry["rows"] = rows;
  entry["complete"] = true;
  manifest.record("results/solve.csv", entry);
  manifest.save();
  return 0;
}

int run_estimate(const Common& common, const EstimateConfig& cfg, std::ostream& out) {
  if (cfg.n_grid.empty() || cfg.m_grid.empty()) throw std::runtime_error("n grid and m grid must be nonempty");
  for (std::size_t i = 0; i < cfg.n_grid.size(); ++i) {
    if (cfg.n_grid[i] < 1) throw std::runtime_error("n grid entries must be >= 1");
    if (i > 0 && cfg.n_grid[i] <= cfg.n_grid[i - 1]) throw std::runtime_error("n grid must be increasing");
  }
  for (std::size_t i = 0; i < cfg.m_grid.size(); ++i) {
    if (!(cfg.m_grid[i] >= 0)) throw std::runtime_error("m grid entries must be >= 0");
    if (i > 0 && !(cfg.m_grid[i] > cfg.m_grid[i - 1])) throw std::runtime_error("m grid must be increasing");
  }
  if (cfg.replicas < 2) throw std::runtime_error("--replicas must be >= 2");

  const DistName dist = describe(cfg.dist);
  const std::string id = experiment_id(cfg.d, dist.canonical, cfg.seed);
  const fs::path root(common.out);
  const std::string replica_rel = "results/" + id + ".replicas.csv";
  const std::string summary_rel = "results/" + id + ".csv";
  const std::string limit_rel = "reports/" + id + ".limit.json";
  const fs::path replica_file = root / replica_rel;

  // (n, m text) -> replica index -> outcome
  std::map<std::pair<int, std::string>, std::map<std::uint64_t, glp_replica>> store;
  if (fs::exists(replica_file)) {
    const CsvTable t = read_csv(replica_file);
    if (t.header != kReplicaHeader) throw std::runtime_error(replica_file.string() + ": unexpected header");
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      const auto& r = t.rows[i];
      const std::string where = replica_file.string() + ":" + std::to_string(t.lines[i]);
      glp_replica rep{};
      const int n = static_cast<int>(parse_u64_field(r[0], where));
      const std::uint64_t idx = parse_u64_field(r[2], where);
      rep.value = parse_number(r[3], where);
      rep.exact = r[4] == "1" ? 1 : 0;
      rep.n_below = parse_u64_field(r[5], where);
      rep.defect = parse_number(r[6], where);
      store[{n, m_text(parse_number(r[1], where))}].emplace(idx, rep);
    }
  }

  glp_run_options opts;
  glp_run_options_default(&opts);
  opts.threads = common.threads;
  opts.node_budget = cfg.node_budget;
  opts.warm_start_width = cfg.warm_start;
  opts.stream = 0;

  std::vector<glp_estimate_row> rows;
  std::uint64_t solved = 0;
  for (int n : cfg.n_grid) {
    for (double m : cfg.m_grid) {
      auto& have = store[{n, m_text(m)}];
      std::vector<std::vector<std::string>> fresh;
      std::uint64_t i = 0;
      while (i < cfg.replicas) {
        if (have.count(i)) {
          ++i;
          continue;
        }
        std::uint64_t j = i;
        while (j < cfg.replicas && !have.count(j)) ++j;
        std::vector<glp_replica> batch(j - i);
        check(glp_solve_replicas(cfg.dist.c_str(), cfg.d, n, m, i, j - i, cfg.seed, &opts, batch.data()));
        for (std::uint64_t k = i; k < j; ++k) {
          const auto& rep = batch[k - i];
          have.emplace(k, rep);
          fresh.push_back({std::to_string(n), m_text(m), std::to_string(k), format_number(rep.value),
                           rep.exact ? "1" : "0", std::to_string(rep.n_below), format_number(rep.defect)});
        }
        solved += j - i;
        i = j;
      }
      if (!fresh.empty()) append_csv(replica_file, kReplicaHeader, fresh);
      std::vector<glp_replica> used;
      used.reserve(cfg.replicas);
      for (std::uint64_t k = 0; k < cfg.replicas; ++k) used.push_back(have.at(k));
      glp_estimate_row row{};
      check(glp_summarize(n, m, used.data(), used.size(), &row));
      rows.push_back(row);
    }
  }

  std::string csv = csv_line({"experiment_id", "d", "family", "params", "n", "m", "replicas", "mean", "stderr",
                              "ci_low", "ci_high", "exact_fraction"});
  for (const auto& r : rows) {
    csv += csv_line({id, std::to_string(cfg.d), dist.family, dist.params, std::to_string(r.n), m_text(r.m),
                     std::to_string(r.replicas), format_number(r.mean), format_number(r.stderr_),
                     format_number(r.ci_low), format_number(r.ci_high), format_number(r.exact_fraction)});
  }
  write_if_changed(root / summary_rel, csv);

  out << "experiment " << id << " (" << dist.canonical << ", d=" << cfg.d << ", seed=" << cfg.seed << ")\n";
  out << "solved " << solved << " new replicas\n";
  out << "n,m,replicas,mean,stderr,ci_low,ci_high,exact_fraction\n";
  for (const auto& r : rows) {
    out << r.n << "," << m_text(r.m) << "," << r.replicas << "," << format_number(r.mean) << ","
        << format_number(r.stderr_) << "," << format_number(r.ci_low) << "," << format_number(r.ci_high) << ","
        << format_number(r.exact_fraction) << "\n";
  }

  std::string config = "cmd=estimate\nd=" + std::to_string(cfg.d) + "\ndist=" + dist.canonical + "\nn-grid=" +
                       join_ints(cfg.n_grid) + "\nm-grid=" + join_numbers(cfg.m_grid) + "\nreplicas=" +
                       std::to_string(cfg.replicas) + "\nseed=" + std::to_string(cfg.seed) + "\nnode-budget=" +
                       std::to_string(cfg.node_budget) + "\nwarm-start=" + std::to_string(cfg.warm_start) + "\n";
  if (cfg.target_precision) config += "target-precision=" + format_number(*cfg.target_precision) + "\n";
  const std::string hash = hex64(fnv1a64(config));

  Manifest manifest(root);
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& r : rows) cells.push_back({{"n", r.n}, {"m", m_text(r.m)}, {"replicas", r.replicas}});
  manifest.record(summary_rel, {{"kind", "estimate-summary"},
                                {"config_hash", hash},
                                {"experiment_id", id},
                                {"distribution", dist.canonical},
                                {"d", cfg.d},
                                {"seed", cfg.seed},
                                {"cells", cells},
                                {"complete", true}});
  nlohmann::json stored = nlohmann::json::array();
  for (const auto& [key, reps] : store) {
    if (reps.empty()) continue;
    nlohmann::json ranges = nlohmann::json::array();
    std::uint64_t start = reps.begin()->first;
    std::uint64_t prev = start;
    for (auto it = std::next(reps.begin()); it != reps.end(); ++it) {
      if (it->first != prev + 1) {
        ranges.push_back({start, prev});
        start = it->first;
      }
      prev = it->first;
    }
    ranges.push_back({start, prev});
    stored.push_back({{"n", key.first}, {"m", key.second}, {"replica_ranges", ranges}});
  }
  manifest.record(replica_rel, {{"kind", "replicas"},
                                {"config_hash", hash},
                                {"experiment_id", id},
                                {"cells", stored},
                                {"complete", true}});

  int exit_code = 0;
  char* limit_raw = nullptr;
  const glp_status ls = glp_limit_estimate(dist.canonical.c_str(), rows.data(), rows.size(),
                                           cfg.target_precision.value_or(0.0), &limit_raw);
  if (ls == GLP_OK) {
    const std::string limit = take_string(limit_raw);
    write_if_changed(root / limit_rel, limit + "\n");
    manifest.record(limit_rel, {{"kind", "limit-estimate"}, {"config_hash", hash}, {"complete", true}});
    const auto j = nlohmann::json::parse(limit);
    out << "limit estimate: " << format_number(j["estimate"].get<double>()) << " +- "
        << format_number(j["halfwidth"].get<double>()) << ", truncation bias bound "
        << (j["bias_bound"].is_string() ? j["bias_bound"].get<std::string>()
                                        : format_number(j["bias_bound"].get<double>()))
        << "\n";
  } else {
    out << "limit estimate: " << glp_status_name(ls) << ": " << glp_last_error() << "\n";
    exit_code = 1;
  }
  manifest.save();
  return exit_code;
}

int run_verify(const Common& common, const VerifyConfig& cfg, std::ostream& out) {
  nlohmann::json params = cfg.params;
  params["threads"] = common.threads;
  char* raw = nullptr;
  int passed = 0;
  check(glp_verify(cfg.check.c_str(), params.dump().c_str(), &raw, &passed));
  const auto reports = nlohmann::ordered_json::parse(take_string(raw));

  std::string name = cfg.check;
  if (cfg.check == "all") name += "-" + cfg.params.value("profile", std::string("quick"));
  const std::string rel = "reports/" + name + ".json";
  nlohmann::ordered_json doc;
  doc["check"] = cfg.check;
  doc["params"] = cfg.params;
  doc["pass"] = passed != 0;
  doc["reports"] = reports;
  const fs::path root(common.out);
  write_if_changed(root / rel, doc.dump(2) + "\n");

  std::string config = "cmd=verify\ncheck=" + cfg.check + "\nparams=" + cfg.params.dump() + "\n";
  Manifest manifest(root);
  manifest.record(rel, {{"kind", "verification"}, {"config_hash", hex64(fnv1a64(config))}, {"complete", true}});
  manifest.save();

  for (const auto& r : reports) {
    out << (r["pass"].get<bool>() ? "PASS " : "FAIL ") << r["check"].get<std::string>() << " ["
        << r["mode"].get<std::string>() << ", " << r["status"].get<std::string>() << "]\n";
    for (const auto& m : r["measurements"]) {
      auto num = [](const nlohmann::ordered_json& v) {
        return v.is_string() ? v.get<std::string>() : format_number(v.get<double>());
      };
      out << "  " << (m["pass"].get<bool>() ? "ok  " : "bad ") << m["label"].get<std::string>() << ": "
          << num(m["statistic"]) << " vs " << num(m["bound"]);
      if (r["mode"] == "statistical") out << " (stderr " << num(m["stderr"]) << ")";
      out << "\n";
    }
  }
  out << (passed ? "all checks passed" : "some checks failed") << "; report: " << (root / rel).string() << "\n";
  return passed ? 0 : 1;
}

}  // namespace glpcli
