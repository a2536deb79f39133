#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "capi.hpp"
#include "commands.hpp"
#include "config.hpp"

namespace {

using glpcli::parse_number;

struct VerifyFlags {
  std::string check;
  std::map<std::string, std::string> values;  // option name without dashes -> text
};

const std::vector<std::string> kVerifyInts = {"nmax", "n", "d", "ell", "max-k"};
const std::vector<std::string> kVerifyCounts = {"replicas", "batches", "seed", "node-budget", "beam-width"};
const std::vector<std::string> kVerifyReals = {"m", "p", "alpha", "a-plus", "a-minus"};
const std::vector<std::string> kVerifyTexts = {"q", "dist", "profile"};
const std::vector<std::string> kVerifyLists = {"k", "t"};

std::string json_key(std::string name) {
  for (auto& c : name) {
    if (c == '-') c = '_';
  }
  return name;
}

nlohmann::json verify_params(const VerifyFlags& f) {
  nlohmann::json p = nlohmann::json::object();
  auto has = [](const std::vector<std::string>& v, const std::string& k) {
    return std::find(v.begin(), v.end(), k) != v.end();
  };
  for (const auto& [name, text] : f.values) {
    const std::string what = "--" + name;
    if (has(kVerifyInts, name)) {
      const double v = parse_number(text, what);
      if (v != std::floor(v)) throw std::runtime_error(what + ": '" + text + "' is not an integer");
      p[json_key(name)] = static_cast<int>(v);
    } else if (has(kVerifyCounts, name)) {
      const double v = parse_number(text, what);
      if (v < 0 || v != std::floor(v)) throw std::runtime_error(what + ": '" + text + "' is not a count");
      p[json_key(name)] = static_cast<std::uint64_t>(v);
    } else if (has(kVerifyReals, name)) {
      p[json_key(name)] = parse_number(text, what);
    } else if (name == "k") {
      p["k"] = glpcli::parse_int_list(text, what);
    } else if (name == "t") {
      p["t"] = glpcli::parse_double_list(text, what);
    } else {
      p[json_key(name)] = text;
    }
  }
  return p;
}

// Moves "--config FILE" out of argv and returns the file name, if any.
std::optional<std::string> extract_config(std::vector<std::string>& args) {
  std::optional<std::string> path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw std::runtime_error("--config needs a file name");
      path = args[i + 1];
      args.erase(args.begin() + static_cast<long>(i), args.begin() + static_cast<long>(i) + 2);
      --i;
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<long>(i));
      --i;
    }
  }
  return path;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Greedy lattice paths: exact solves, Monte Carlo estimates and inequality checks."};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(glp_version()));

  glpcli::Common common;
  app.add_option("--out", common.out, "Output directory")->capture_default_str();
  app.add_option("--threads", common.threads, "Worker threads")->check(CLI::Range(1u, 1024u))->capture_default_str();

  // solve
  glpcli::SolveConfig solve;
  std::string solve_m;
  auto* s = app.add_subcommand("solve", "Exact max-weight path for one seeded field");
  s->add_option("--dist", solve.dist, "Distribution, e.g. gaussian:0,1")->required();
  s->add_option("--d", solve.d, "Dimension")->check(CLI::Range(1, 8))->capture_default_str();
  s->add_option("--n", solve.n, "Path length (vertices)")->required()->check(CLI::PositiveNumber);
  s->add_option("--seed", solve.seed, "Field seed")->required();
  s->add_option("--m", solve_m, "Truncation level (omit or inf for none)");
  s->add_option("--node-budget", solve.node_budget, "Node budget")->capture_default_str();
  s->add_option("--warm-start", solve.warm_start, "Beam width for the initial incumbent (0: none)")
      ->capture_default_str();
  s->add_option("--beam", solve.beam, "Run beam search of this width instead of the exact solver");

  // estimate
  glpcli::EstimateConfig est;
  std::string n_grid;
  std::string m_grid = "inf";
  std::optional<double> target;
  auto* e = app.add_subcommand("estimate", "Monte Carlo estimates of M_n/n over an (n, m) grid");
  e->add_option("--dist", est.dist, "Distribution")->required();
  e->add_option("--d", est.d, "Dimension")->check(CLI::Range(1, 8))->capture_default_str();
  e->add_option("--n-grid", n_grid, "Path lengths, e.g. 8,10,12")->required();
  e->add_option("--m-grid", m_grid, "Truncation levels, e.g. 0,2,4 (inf: none)")->capture_default_str();
  e->add_option("--replicas", est.replicas, "Replicas per cell")->required();
  e->add_option("--seed", est.seed, "Master seed")->required();
  e->add_option("--node-budget", est.node_budget, "Node budget per solve")->capture_default_str();
  e->add_option("--warm-start", est.warm_start, "Beam width for the initial incumbent")->capture_default_str();
  e->add_option("--target-precision", target, "Fail if the truncation bias bound exceeds this");

  // verify
  VerifyFlags vf;
  auto* v = app.add_subcommand("verify", "Run named inequality and identity checks");
  v->add_option("--check", vf.check, "stirling, binomial, key-lemma-exact, key-lemma, c-of-m, concentration, "
                                     "fourth-moment, fourth-moment-identity, partial-sum, tail-bound, "
                                     "integrability, hypotheses, error-decomposition, all")
      ->required();
  std::map<std::string, std::string> verify_text;
  for (const auto* group : {&kVerifyInts, &kVerifyCounts, &kVerifyReals, &kVerifyTexts, &kVerifyLists}) {
    for (const auto& name : *group) v->add_option("--" + name, verify_text[name], "check parameter");
  }

  // plot
  auto* p = app.add_subcommand("plot", "SVG plots and tidy CSV from stored estimates");

  std::vector<std::string> args(argv + 1, argv + argc);
  std::optional<std::string> config_path;
  glpcli::ConfigFile config;
  try {
    config_path = extract_config(args);
    if (config_path) config = glpcli::read_config(*config_path);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  }

  // Config values go right after the subcommand name so that flags given on
  // the command line, which come later, take precedence.
  std::map<std::string, const glpcli::ConfigEntry*> origin;
  if (!config.entries.empty()) {
    std::size_t sub = args.size();
    CLI::App* target_app = nullptr;
    for (std::size_t i = 0; i < args.size(); ++i) {
      for (auto* candidate : {s, e, v, p}) {
        if (args[i] == candidate->get_name()) {
          sub = i;
          target_app = candidate;
          break;
        }
      }
      if (target_app != nullptr) break;
    }
    if (target_app == nullptr) {
      std::cerr << "error: a subcommand (solve, estimate, verify, plot) is required\n";
      return 2;
    }
    std::vector<std::string> injected;
    for (const auto& entry : config.entries) {
      const std::string flag = "--" + entry.key;
      if (target_app->get_option_no_throw(flag) == nullptr && app.get_option_no_throw(flag) == nullptr) {
        std::cerr << "error: " << config.path << ":" << entry.line << ": unknown key '" << entry.key << "' for "
                  << target_app->get_name() << "\n";
        return 2;
      }
      injected.push_back(flag);
      injected.push_back(entry.value);
      origin[flag] = &entry;
    }
    args.insert(args.begin() + static_cast<long>(sub) + 1, injected.begin(), injected.end());
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& ex) {
    if (ex.get_exit_code() == 0) return app.exit(ex);
    const std::string msg = ex.what();
    for (const auto& [flag, entry] : origin) {
      if (msg.find(flag) != std::string::npos) {
        std::cerr << "error: " << config.path << ":" << entry->line << ": " << msg << "\n";
        return 2;
      }
    }
    return app.exit(ex);
  }

  try {
    if (*s) {
      if (!solve_m.empty()) solve.m = parse_number(solve_m, "--m");
      return glpcli::run_solve(common, solve, std::cout);
    }
    if (*e) {
      est.n_grid = glpcli::parse_int_list(n_grid, "--n-grid");
      est.m_grid = glpcli::parse_double_list(m_grid, "--m-grid");
      est.target_precision = target;
      return glpcli::run_estimate(common, est, std::cout);
    }
    if (*v) {
      for (const auto& [name, text] : verify_text) {
        if (v->get_option("--" + name)->count() > 0) vf.values[name] = text;
      }
      glpcli::VerifyConfig vc;
      vc.check = vf.check;
      vc.params = verify_params(vf);
      return glpcli::run_verify(common, vc, std::cout);
    }
    if (*p) return glpcli::run_plot(common, std::cout);
  } catch (const glpcli::ApiError& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return ex.status() == GLP_UNKNOWN_CHECK ? 2 : 1;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return 0;
}
