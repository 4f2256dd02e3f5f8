#pragma once

#include "fpaccel/anderson.hpp"
#include "fpaccel/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace expcli {

// One solver entry of the method list. The label is written verbatim into
// the CSV method column.
struct MethodSpec {
  std::string label = "fp";
  bool accelerated = false;
  int depth = 1;
  double coeff_bound = fpaccel::kUnbounded;
  double damping = 1.0;
};

// "fp", "aa<m>", with optional ":c0=<v>" and ":beta=<v>" modifiers,
// e.g. "aa2:c0=1e4:beta=0.7".
MethodSpec parse_method(const std::string& text);

struct OperatorSpec {
  enum class Kind { diagonal, random };
  Kind kind = Kind::diagonal;
  std::vector<double> diagonal = {-0.07, 0.62, -0.55, -0.6, 0.15};
  int n = 100;
  double eig_low = -0.9;
  double eig_high = 0.9;
  std::optional<double> forced_min_eig;
  std::uint64_t op_seed = 1;
};

struct ExperimentConfig {
  std::string experiment;
  std::vector<MethodSpec> methods;
  std::vector<std::uint64_t> seeds;
  int init_count = 1;

  double tol = 1e-12;
  int max_iter = 20000;

  OperatorSpec op;

  int model = 1;
  int p = 20;
  int n = 40;
  int n0 = 60;
  int n1 = 57;
  int big_d = 20;
  int small_d = 10;

  double tight_w = 0.5;
  int steps = 30;
  int grid = 50;

  std::string out_dir = ".";
};

// Loads the JSON config when given, then applies command-line overrides and
// per-experiment defaults.
struct CliOverrides {
  std::optional<std::string> experiment;
  std::vector<std::string> methods;
  std::optional<int> seed_count;
  std::optional<std::string> out;
  std::optional<int> m;
  std::optional<double> c0;
  std::optional<double> beta;
  std::optional<double> tol;
  std::optional<int> max_iter;
  std::optional<int> p;
  std::optional<int> n;
  std::optional<int> model;
};

ExperimentConfig load_config(const std::optional<std::string>& config_path,
                             const CliOverrides& overrides);

}  // namespace expcli
