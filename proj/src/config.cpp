#include "mrgnn/config.hpp"

#include <set>

#include <json.hpp>

#include "mrgnn/error.hpp"
#include "text_util.hpp"

namespace mrgnn {

using nlohmann::json;

namespace {

std::string join_lines(const std::vector<std::string>& v) {
  std::string s = "invalid experiment config:";
  for (const auto& p : v) s += "\n  - " + p;
  return s;
}

class Reader {
 public:
  std::vector<std::string> problems;

  void check_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
    if (!obj.is_object()) {
      problems.push_back(where + ": expected an object");
      return;
    }
    for (const auto& [k, v] : obj.items())
      if (!allowed.count(k)) problems.push_back(where + ": unknown key '" + k + "'");
  }

  template <class T>
  void get(const json& obj, const std::string& key, const std::string& where, T& out) {
    if (!obj.is_object() || !obj.contains(key)) return;
    try {
      out = obj.at(key).get<T>();
    } catch (const json::exception&) {
      problems.push_back(where + "." + key + ": wrong type");
    }
  }

  template <class T>
  void get_opt(const json& obj, const std::string& key, const std::string& where, std::optional<T>& out) {
    if (!obj.is_object() || !obj.contains(key)) return;
    T v{};
    get(obj, key, where, v);
    out = v;
  }

  void train(const json& obj, const std::string& where, TrainConfig& tc) {
    check_keys(obj, where, {"lr", "max_epochs", "tol", "patience", "mse_weight", "snapshot_every",
                            "d_hidden", "d_out", "d_in"});
    get(obj, "lr", where, tc.lr);
    get(obj, "max_epochs", where, tc.max_epochs);
    get(obj, "tol", where, tc.tol);
    get(obj, "patience", where, tc.patience);
    get(obj, "mse_weight", where, tc.mse_weight);
    get(obj, "snapshot_every", where, tc.snapshot_every);
    get(obj, "d_hidden", where, tc.d_hidden);
    get(obj, "d_out", where, tc.d_out);
    get(obj, "d_in", where, tc.d_in);
    try {
      tc.validate();
    } catch (const InvalidInput& e) {
      problems.push_back(where + ": " + e.what());
    }
  }
};

}  // namespace

ConfigError::ConfigError(std::vector<std::string> p) : InvalidInput(join_lines(p)), problems(std::move(p)) {}

ExperimentConfig parse_experiment_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError({std::string("not valid JSON: ") + e.what()});
  }
  ExperimentConfig cfg;
  Reader rd;
  rd.check_keys(root, "config", {"problem", "penalty", "gp_mode", "graph", "variants", "seed", "samples",
                                 "levels", "am", "am_limit", "gnn", "output", "hierarchy", "scatter_nodes"});
  auto& pc = cfg.pipeline;
  pc.anneal.var_limit = var_limit_from_env(pc.anneal.var_limit);

  if (root.contains("problem")) {
    try {
      pc.problem = parse_problem(root.at("problem").get<std::string>());
    } catch (const std::exception& e) {
      rd.problems.push_back(std::string("config.problem: ") + e.what());
    }
  } else {
    rd.problems.push_back("config.problem: required");
  }
  rd.get_opt(root, "penalty", "config", pc.penalty);
  if (pc.penalty && !(*pc.penalty > 0.0)) rd.problems.push_back("config.penalty: must be positive");
  if (root.contains("gp_mode")) {
    std::string m;
    rd.get(root, "gp_mode", "config", m);
    if (m == "corrected") pc.gp_mode = GpSignMode::Corrected;
    else if (m == "literal") pc.gp_mode = GpSignMode::Literal;
    else rd.problems.push_back("config.gp_mode: expected 'corrected' or 'literal'");
  }
  rd.get(root, "seed", "config", pc.seed);
  rd.get(root, "samples", "config", pc.samples);
  if (pc.samples < 1) rd.problems.push_back("config.samples: must be >= 1");
  rd.get_opt(root, "am_limit", "config", pc.am_limit);
  if (pc.am_limit && *pc.am_limit == 0) rd.problems.push_back("config.am_limit: must be positive");

  if (root.contains("graph")) {
    const auto& g = root.at("graph");
    rd.check_keys(g, "config.graph", {"n", "d", "seed", "path"});
    rd.get(g, "n", "config.graph", cfg.graph.n);
    rd.get(g, "d", "config.graph", cfg.graph.d);
    rd.get(g, "seed", "config.graph", cfg.graph.seed);
    if (g.is_object() && g.contains("path")) {
      std::string p;
      rd.get(g, "path", "config.graph", p);
      cfg.graph.path = p;
    }
  } else {
    rd.problems.push_back("config.graph: required");
  }

  if (root.contains("variants")) {
    cfg.variants.clear();
    if (!root.at("variants").is_array()) {
      rd.problems.push_back("config.variants: expected an array");
    } else {
      for (const auto& v : root.at("variants")) {
        try {
          cfg.variants.push_back(parse_variant(v.get<std::string>()));
        } catch (const std::exception& e) {
          rd.problems.push_back(std::string("config.variants: ") + e.what());
        }
      }
      if (cfg.variants.empty()) rd.problems.push_back("config.variants: must not be empty");
    }
  }

  if (root.contains("levels")) {
    const auto& l = root.at("levels");
    if (l.is_string()) {
      const auto s = l.get<std::string>();
      if (s == "all-smaller") pc.levels.kind = LevelsPolicy::Kind::AllSmaller;
      else if (s == "all-admissible") pc.levels.kind = LevelsPolicy::Kind::AllAdmissible;
      else rd.problems.push_back("config.levels: expected 'all-smaller', 'all-admissible' or a list");
    } else if (l.is_array()) {
      pc.levels.kind = LevelsPolicy::Kind::Explicit;
      rd.get(root, "levels", "config", pc.levels.explicit_levels);
      if (pc.levels.explicit_levels.empty()) rd.problems.push_back("config.levels: list must not be empty");
    } else {
      rd.problems.push_back("config.levels: wrong type");
    }
  }

  if (root.contains("am")) {
    const auto& a = root.at("am");
    rd.check_keys(a, "config.am", {"sweeps", "restarts", "t_start", "t_end", "var_limit", "coupling_max"});
    rd.get(a, "sweeps", "config.am", pc.anneal.sweeps);
    rd.get(a, "restarts", "config.am", pc.anneal.restarts);
    rd.get_opt(a, "t_start", "config.am", pc.anneal.t_start);
    rd.get_opt(a, "t_end", "config.am", pc.anneal.t_end);
    rd.get_opt(a, "coupling_max", "config.am", pc.anneal.coupling_max);
    rd.get(a, "var_limit", "config.am", pc.anneal.var_limit);
    try {
      pc.anneal.validate();
    } catch (const InvalidInput& e) {
      rd.problems.push_back(std::string("config.am: ") + e.what());
    }
  }

  if (root.contains("gnn")) {
    const auto& g = root.at("gnn");
    rd.check_keys(g, "config.gnn", {"main", "local"});
    if (g.is_object() && g.contains("main")) rd.train(g.at("main"), "config.gnn.main", pc.main);
    if (g.is_object() && g.contains("local")) rd.train(g.at("local"), "config.gnn.local", pc.local);
  }

  if (root.contains("output")) {
    std::string o;
    rd.get(root, "output", "config", o);
    cfg.output = o;
  }
  if (root.contains("hierarchy")) {
    std::string h;
    rd.get(root, "hierarchy", "config", h);
    cfg.hierarchy = h;
  }
  rd.get(root, "scatter_nodes", "config", cfg.scatter_nodes);

  if (!rd.problems.empty()) throw ConfigError(std::move(rd.problems));
  return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  return parse_experiment_config(detail::read_file(path));
}

void validate(const ExperimentConfig& cfg) {
  std::vector<std::string> p;
  const auto& g = cfg.graph;
  if (!g.path) {
    if (g.n == 0) p.push_back("graph: either path or n/d must be given");
    else if (g.d >= g.n) p.push_back("graph: d must be smaller than n");
    else if ((g.n * g.d) % 2) p.push_back("graph: n*d must be even");
  }
  if (cfg.pipeline.samples < 1) p.push_back("samples: must be >= 1");
  if (cfg.variants.empty()) p.push_back("variants: must not be empty");
  try {
    cfg.pipeline.anneal.validate();
    cfg.pipeline.main.validate();
    cfg.pipeline.local.validate();
  } catch (const InvalidInput& e) {
    p.push_back(e.what());
  }
  if (!p.empty()) throw ConfigError(std::move(p));
}

}  // namespace mrgnn
