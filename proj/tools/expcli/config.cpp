#include "config.hpp"

#include <json.hpp>

#include <fstream>
#include <stdexcept>

namespace expcli {

using nlohmann::json;

MethodSpec parse_method(const std::string& text) {
  MethodSpec spec;
  spec.label = text;

  std::vector<std::string> parts;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t colon = text.find(':', start);
    if (colon == std::string::npos) {
      parts.push_back(text.substr(start));
      break;
    }
    parts.push_back(text.substr(start, colon - start));
    start = colon + 1;
  }
  if (parts.empty() || parts.front().empty()) throw std::invalid_argument("empty method name");

  const std::string& head = parts.front();
  if (head == "fp") {
    spec.accelerated = false;
  } else if (head.rfind("aa", 0) == 0 && head.size() > 2) {
    spec.accelerated = true;
    spec.depth = std::stoi(head.substr(2));
    if (spec.depth < 1) throw std::invalid_argument("bad method depth: " + head);
  } else {
    throw std::invalid_argument("unknown method: " + head);
  }

  for (std::size_t i = 1; i < parts.size(); ++i) {
    const std::string& mod = parts[i];
    const std::size_t eq = mod.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("bad method modifier: " + mod);
    const std::string key = mod.substr(0, eq);
    const double value = std::stod(mod.substr(eq + 1));
    if (key == "c0") {
      spec.coeff_bound = value;
    } else if (key == "beta") {
      spec.damping = value;
    } else {
      throw std::invalid_argument("unknown method modifier: " + key);
    }
  }
  return spec;
}

namespace {

void apply_json(ExperimentConfig& cfg, const json& j) {
  if (j.contains("experiment")) cfg.experiment = j["experiment"].get<std::string>();
  if (j.contains("methods")) {
    cfg.methods.clear();
    for (const auto& m : j["methods"]) cfg.methods.push_back(parse_method(m.get<std::string>()));
  }
  if (j.contains("seeds")) {
    cfg.seeds.clear();
    for (const auto& s : j["seeds"]) cfg.seeds.push_back(s.get<std::uint64_t>());
    if (cfg.seeds.empty()) throw std::invalid_argument("empty seed list");
  } else if (j.contains("seed_count")) {
    const int count = j["seed_count"].get<int>();
    if (count < 1) throw std::invalid_argument("empty seed list");
    cfg.seeds.clear();
    for (int s = 1; s <= count; ++s) cfg.seeds.push_back(s);
  }
  if (j.contains("init_count")) cfg.init_count = j["init_count"].get<int>();
  if (j.contains("tol")) cfg.tol = j["tol"].get<double>();
  if (j.contains("max_iter")) cfg.max_iter = j["max_iter"].get<int>();

  if (j.contains("operator")) {
    const auto& o = j["operator"];
    const std::string type = o.value("type", "diag");
    if (type == "diag") {
      cfg.op.kind = OperatorSpec::Kind::diagonal;
      if (o.contains("diagonal")) cfg.op.diagonal = o["diagonal"].get<std::vector<double>>();
    } else if (type == "random") {
      cfg.op.kind = OperatorSpec::Kind::random;
      cfg.op.n = o.value("n", cfg.op.n);
      cfg.op.eig_low = o.value("eig_low", cfg.op.eig_low);
      cfg.op.eig_high = o.value("eig_high", cfg.op.eig_high);
      if (o.contains("forced_min_eig")) cfg.op.forced_min_eig = o["forced_min_eig"].get<double>();
      cfg.op.op_seed = o.value("op_seed", cfg.op.op_seed);
    } else {
      throw std::invalid_argument("unknown operator type: " + type);
    }
  }

  if (j.contains("model")) cfg.model = j["model"].get<int>();
  if (j.contains("p")) cfg.p = j["p"].get<int>();
  if (j.contains("n")) cfg.n = j["n"].get<int>();
  if (j.contains("n0")) cfg.n0 = j["n0"].get<int>();
  if (j.contains("n1")) cfg.n1 = j["n1"].get<int>();
  if (j.contains("D")) cfg.big_d = j["D"].get<int>();
  if (j.contains("d")) cfg.small_d = j["d"].get<int>();
  if (j.contains("w")) cfg.tight_w = j["w"].get<double>();
  if (j.contains("steps")) cfg.steps = j["steps"].get<int>();
  if (j.contains("grid")) cfg.grid = j["grid"].get<int>();
  if (j.contains("out")) cfg.out_dir = j["out"].get<std::string>();
}

std::vector<MethodSpec> default_methods(const std::string& experiment,
                                        const std::optional<double>& c0,
                                        const std::optional<double>& beta) {
  std::vector<std::string> names;
  if (experiment == "linear-bound") {
    names = {"aa1", "aa2", "aa3"};
  } else if (experiment == "linear-rate") {
    names = {"fp", "aa1", "aa2", "aa3"};
  } else if (experiment == "scalar-tight") {
    names = {"aa1"};
  } else if (experiment == "tme-run") {
    names = {"fp", "aa1:c0=1e4", "aa2:c0=1e4", "aa3:c0=1e4"};
  } else {
    return {};
  }
  std::vector<MethodSpec> methods;
  for (auto& name : names) {
    MethodSpec spec = parse_method(name);
    if (spec.accelerated) {
      if (c0 && spec.label.find("c0=") == std::string::npos) spec.coeff_bound = *c0;
      if (beta && spec.label.find("beta=") == std::string::npos) spec.damping = *beta;
    }
    methods.push_back(std::move(spec));
  }
  return methods;
}

}  // namespace

ExperimentConfig load_config(const std::optional<std::string>& config_path,
                             const CliOverrides& overrides) {
  ExperimentConfig cfg;

  if (config_path) {
    std::ifstream in(*config_path);
    if (!in) throw std::runtime_error("cannot open config: " + *config_path);
    json j;
    in >> j;
    apply_json(cfg, j);
  }

  if (overrides.experiment) cfg.experiment = *overrides.experiment;
  if (!overrides.methods.empty()) {
    cfg.methods.clear();
    for (const auto& m : overrides.methods) cfg.methods.push_back(parse_method(m));
  } else if (overrides.m && cfg.methods.empty()) {
    cfg.methods.push_back(parse_method("aa" + std::to_string(*overrides.m)));
  }
  if (overrides.seed_count) {
    if (*overrides.seed_count < 1) throw std::invalid_argument("empty seed list");
    cfg.seeds.clear();
    for (int s = 1; s <= *overrides.seed_count; ++s) cfg.seeds.push_back(s);
  }
  if (overrides.out) cfg.out_dir = *overrides.out;
  if (overrides.tol) cfg.tol = *overrides.tol;
  if (overrides.max_iter) cfg.max_iter = *overrides.max_iter;
  if (overrides.p) cfg.p = *overrides.p;
  if (overrides.n) cfg.n = *overrides.n;
  if (overrides.model) cfg.model = *overrides.model;

  if (cfg.experiment.empty()) throw std::invalid_argument("no experiment selected");

  for (auto& spec : cfg.methods) {
    if (!spec.accelerated) continue;
    if (overrides.c0 && spec.label.find("c0=") == std::string::npos) spec.coeff_bound = *overrides.c0;
    if (overrides.beta && spec.label.find("beta=") == std::string::npos) spec.damping = *overrides.beta;
  }
  if (cfg.methods.empty()) {
    cfg.methods = default_methods(cfg.experiment, overrides.c0, overrides.beta);
  }
  if (cfg.seeds.empty()) cfg.seeds = {1};
  return cfg;
}

}  // namespace expcli
