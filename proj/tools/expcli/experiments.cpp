#include "experiments.hpp"

#include "report.hpp"

#include "fpaccel/anderson.hpp"
#include "fpaccel/datagen.hpp"
#include "fpaccel/operators.hpp"
#include "fpaccel/rng.hpp"
#include "fpaccel/theory.hpp"
#include "fpaccel/tyler.hpp"

#include <json.hpp>

#include <Eigen/Cholesky>

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace expcli {

using namespace fpaccel;
using nlohmann::json;

namespace {

constexpr const char* kBoundHeader = "seed,method,k,lhs,rhs,satisfied,floor";
constexpr const char* kRateHeader = "seed,method,k,error_norm,r_est";
constexpr const char* kTmeHeader = "seed,init,method,iterations,wall_clock_s,final_residual,r_est_tail";
constexpr const char* kW0Header = "lambda_min,lambda_max,w0,op_norm,rate_bound,equality_flag";

std::string table_path(const ExperimentConfig& cfg, const char* name) {
  return cfg.out_dir + "/" + name;
}

LinearSymmetricOperator make_operator(const OperatorSpec& spec) {
  if (spec.kind == OperatorSpec::Kind::diagonal) {
    Vector diag(static_cast<Index>(spec.diagonal.size()));
    for (std::size_t i = 0; i < spec.diagonal.size(); ++i) diag(static_cast<Index>(i)) = spec.diagonal[i];
    return make_diag_operator(diag, Vector::Zero(diag.size()));
  }
  return make_random_symmetric(spec.n, spec.eig_low, spec.eig_high, spec.forced_min_eig,
                               spec.op_seed);
}

Vector seeded_normal_vector(std::uint64_t seed, Index n) {
  SplitMix64 g(seed);
  return normal_vector(g, n);
}

AAConfig to_aa_config(const MethodSpec& spec, double tol, int max_iter) {
  AAConfig cfg;
  cfg.depth = spec.depth;
  cfg.coeff_bound = spec.coeff_bound;
  cfg.damping = spec.damping;
  cfg.residual_tol = tol;
  cfg.max_iterations = max_iter;
  return cfg;
}

struct TimedTrace {
  SolveTrace trace;
  double seconds = 0.0;
};

template <typename Fn>
TimedTrace timed(Fn&& run) {
  const auto start = std::chrono::steady_clock::now();
  SolveTrace trace = run();
  const auto stop = std::chrono::steady_clock::now();
  return {std::move(trace), std::chrono::duration<double>(stop - start).count()};
}

TylerProblem make_problem(const ExperimentConfig& cfg, std::uint64_t seed) {
  if (cfg.model == 1) return gen_data_model_1(cfg.p, cfg.n, seed);
  if (cfg.model == 2) return gen_data_model_2(cfg.n0, cfg.n1, cfg.big_d, cfg.small_d, seed);
  throw std::invalid_argument("model must be 1 or 2");
}

json spectrum_json(const SpectrumSummary& s) {
  return json{{"lambda_min", s.lambda_min},
              {"lambda_max", s.lambda_max},
              {"op_norm", s.op_norm},
              {"w0", s.w0},
              {"rate_bound", s.rate_bound}};
}

int run_linear_bound(const ExperimentConfig& cfg) {
  const LinearSymmetricOperator op = make_operator(cfg.op);
  CsvWriter bound(table_path(cfg, "bound.csv"), kBoundHeader);

  int violations = 0;
  double min_rel_gap = std::numeric_limits<double>::infinity();
  double max_ratio = 0.0;
  json per_method = json::object();

  for (const auto& method : cfg.methods) {
    if (!method.accelerated) {
      throw std::invalid_argument("linear-bound runs accelerated methods only");
    }
    std::vector<double> iterations, wall;
    for (std::uint64_t seed : cfg.seeds) {
      const Vector x0 = seeded_normal_vector(seed, op.dimension());
      const auto timed_run = timed([&] {
        return aa_solve(op, x0, to_aa_config(method, cfg.tol, cfg.max_iter));
      });
      iterations.push_back(static_cast<double>(timed_run.trace.iterations()));
      wall.push_back(timed_run.seconds);

      // Damped runs are equivalent to undamped runs of the blended operator,
      // so the improvement bound is checked against that operator.
      const Index n = op.dimension();
      const Matrix w_eff = method.damping * op.matrix() +
                           (1.0 - method.damping) * Matrix::Identity(n, n);
      const Vector a_eff = method.damping * op.offset();
      for (const auto& row : check_pairwise_bound(timed_run.trace, w_eff, a_eff)) {
        bound.row({CsvWriter::cell(seed), method.label, CsvWriter::cell(row.k),
                   CsvWriter::cell(row.lhs), CsvWriter::cell(row.rhs),
                   CsvWriter::cell(row.satisfied), CsvWriter::cell(row.floor)});
        if (row.floor) continue;
        if (!row.satisfied) ++violations;
        min_rel_gap = std::min(min_rel_gap, (row.rhs - row.lhs) / row.rhs);
        max_ratio = std::max(max_ratio, row.lhs / row.rhs);
      }
    }
    per_method[method.label] = json{{"iterations", iterations}, {"wall_clock_s", wall}};
  }

  json summary{{"experiment", cfg.experiment},
               {"seeds", cfg.seeds},
               {"violations", violations},
               {"min_relative_gap", min_rel_gap},
               {"max_lhs_over_rhs", max_ratio},
               {"spectrum", spectrum_json(spectrum_of(op.matrix()))},
               {"per_method", per_method}};
  write_summary(table_path(cfg, "summary.json"), summary);
  return violations;
}

int run_linear_rate(const ExperimentConfig& cfg) {
  const LinearSymmetricOperator op = make_operator(cfg.op);
  const SpectrumSummary spec = spectrum_of(op.matrix());
  const Index n = op.dimension();
  const Vector x_star = (Matrix::Identity(n, n) - op.matrix()).llt().solve(op.offset());

  CsvWriter rate(table_path(cfg, "rate.csv"), kRateHeader);
  int violations = 0;
  json per_method = json::object();

  for (const auto& method : cfg.methods) {
    std::vector<double> tails, iterations, wall;
    for (std::uint64_t seed : cfg.seeds) {
      const Vector x0 = seeded_normal_vector(seed, n);
      const auto timed_run = timed([&] {
        if (!method.accelerated) return fp_iterate(op, x0, cfg.tol, cfg.max_iter);
        return aa_solve(op, x0, to_aa_config(method, cfg.tol, cfg.max_iter));
      });

      std::vector<double> errors = iterate_error_norms(timed_run.trace, x_star);
      errors.erase(errors.begin());
      if (errors.empty()) errors.push_back(0.0);
      const auto r_est = estimate_r_factor(errors);
      for (std::size_t k = 0; k < errors.size(); ++k) {
        rate.row({CsvWriter::cell(seed), method.label, CsvWriter::cell(static_cast<int>(k + 1)),
                  CsvWriter::cell(errors[k]), CsvWriter::cell(r_est[k])});
      }
      tails.push_back(r_est.back());
      iterations.push_back(static_cast<double>(timed_run.trace.iterations()));
      wall.push_back(timed_run.seconds);

      if (method.accelerated && r_est.back() > spec.rate_bound + 0.02) ++violations;
    }
    per_method[method.label] = json{{"r_est_tails", tails},
                                    {"median_tail", median(tails)},
                                    {"iterations", iterations},
                                    {"wall_clock_s", wall}};
  }

  json summary{{"experiment", cfg.experiment},
               {"seeds", cfg.seeds},
               {"violations", violations},
               {"spectrum", spectrum_json(spec)},
               {"per_method", per_method}};
  write_summary(table_path(cfg, "summary.json"), summary);
  return violations;
}

int run_scalar_tight(const ExperimentConfig& cfg) {
  const double w = cfg.tight_w;
  const auto pair = make_tight_init_scalar(w);
  const Matrix W = w * Matrix::Identity(2, 2);
  const int steps = std::max(cfg.steps, 25);
  const auto norms = reformulated_aa_linear(W, pair.xtilde0, pair.xtilde1, 1, steps);
  const double expected = w * w / (2.0 - w);

  CsvWriter bound(table_path(cfg, "bound.csv"), kBoundHeader);
  int violations = 0;
  double max_abs_dev = 0.0;
  for (std::size_t k = 2; k + 1 < norms.size(); ++k) {
    const bool floor = norms[k - 1] < 1e-250;
    const double lhs = floor ? 0.0 : norms[k + 1] / norms[k - 1];
    const bool satisfied = floor || std::abs(lhs - expected) <= 1e-8;
    bound.row({CsvWriter::cell(std::uint64_t{0}), "aa1", CsvWriter::cell(static_cast<int>(k)),
               CsvWriter::cell(lhs), CsvWriter::cell(expected), CsvWriter::cell(satisfied),
               CsvWriter::cell(floor)});
    if (!floor) {
      max_abs_dev = std::max(max_abs_dev, std::abs(lhs - expected));
      if (!satisfied) ++violations;
    }
  }

  json summary{{"experiment", cfg.experiment},
               {"w", w},
               {"expected_pair_ratio", expected},
               {"max_abs_deviation", max_abs_dev},
               {"violations", violations}};
  write_summary(table_path(cfg, "summary.json"), summary);
  return violations;
}

int run_w0_table(const ExperimentConfig& cfg) {
  CsvWriter table(table_path(cfg, "w0.csv"), kW0Header);
  const int grid = cfg.grid;
  int violations = 0;
  int equality_rows = 0;

  for (int i = 0; i < grid; ++i) {
    const double lo = -0.95 + (i + 0.5) * 1.9 / grid;
    for (int j = 0; j < grid; ++j) {
      const double hi = -0.95 + (j + 0.5) * 1.9 / grid;
      if (lo > hi) continue;
      const SpectrumSummary s = summarize_spectrum(lo, hi);
      const bool equality = std::abs(s.w0 - s.op_norm) <= 1e-9;
      table.row({CsvWriter::cell(lo), CsvWriter::cell(hi), CsvWriter::cell(s.w0),
                 CsvWriter::cell(s.op_norm), CsvWriter::cell(s.rate_bound),
                 CsvWriter::cell(equality)});

      if (s.w0 > s.op_norm + 1e-12) ++violations;
      if (std::abs(lo + hi) <= 1e-12 && !equality) ++violations;
      if (std::abs(lo + hi) >= 0.05 && s.op_norm - s.w0 < 1e-6) ++violations;
      if (equality) ++equality_rows;
    }
  }

  json summary{{"experiment", cfg.experiment},
               {"grid", grid},
               {"equality_rows", equality_rows},
               {"violations", violations}};
  write_summary(table_path(cfg, "summary.json"), summary);
  return violations;
}

// Shared per-seed reference state for the nonlinear experiments.
struct TmeReference {
  Vector w_star;
  Matrix sigma_star;
  double jacobian_defect = 0.0;
  double row_sum_deviation = 0.0;
  SpectrumSummary deflated;
};

TmeReference make_reference(const TylerProblem& prob, double tol) {
  TmeReference ref;
  ref.w_star = tme_reference_weights(prob, std::min(tol, 1e-13));
  ref.sigma_star = sigma_from_w(ref.w_star, prob, true).sigma;
  const Matrix J = jacobian_fd([&](const Vector& v) { return tme_log_step(v, prob); },
                               ref.w_star, 1e-5);
  ref.jacobian_defect = symmetry_defect(J);
  ref.row_sum_deviation = (J * Vector::Ones(J.rows()) - Vector::Ones(J.rows()))
                              .cwiseAbs()
                              .maxCoeff();
  ref.deflated = deflated_tme_spectrum(J);
  return ref;
}

int run_tme(const ExperimentConfig& cfg) {
  CsvWriter tme(table_path(cfg, "tme.csv"), kTmeHeader);
  CsvWriter bound(table_path(cfg, "bound.csv"), kBoundHeader);

  int violations = 0;
  json seeds_json = json::array();
  json per_method = json::object();
  for (const auto& method : cfg.methods) {
    per_method[method.label] = json{{"iterations", json::array()},
                                    {"wall_clock_s", json::array()},
                                    {"r_est_tails", json::array()}};
  }

  for (std::uint64_t seed : cfg.seeds) {
    const TylerProblem prob = make_problem(cfg, seed);
    const TmeReference ref = make_reference(prob, cfg.tol);
    const double rhs = ref.deflated.w0 * ref.deflated.op_norm;
    seeds_json.push_back(json{{"seed", seed},
                              {"jacobian_defect", ref.jacobian_defect},
                              {"row_sum_deviation", ref.row_sum_deviation},
                              {"deflated_spectrum", spectrum_json(ref.deflated)}});

    const FunctionOperator log_op = make_tme_log_operator(prob);
    const FunctionOperator std_op = make_tme_standard_operator(prob);

    for (int init = 0; init < cfg.init_count; ++init) {
      const Vector w0 = seeded_normal_vector(derive_seed(seed, static_cast<std::uint64_t>(init) + 1),
                                             prob.n());
      for (const auto& method : cfg.methods) {
        TimedTrace run;
        std::vector<double> errors;
        if (!method.accelerated) {
          const Vector s0 = vec(sigma_from_w(w0, prob, true).sigma);
          run = timed([&] { return fp_iterate(std_op, s0, cfg.tol, cfg.max_iter); });
          for (const auto& rec : run.trace.records) {
            errors.push_back((unvec(rec.iterate, prob.p()) - ref.sigma_star).norm());
          }
        } else {
          run = timed([&] {
            return aa_solve(log_op, w0, to_aa_config(method, cfg.tol, cfg.max_iter));
          });
          for (const auto& rec : run.trace.records) {
            errors.push_back((sigma_from_w(rec.iterate, prob, true).sigma - ref.sigma_star).norm());
          }

          // Two-step improvement rows once the run is locally linear.
          const auto rnorms = run.trace.residual_norms();
          std::size_t k0 = rnorms.size();
          for (std::size_t k = 0; k < rnorms.size(); ++k) {
            if (rnorms[k] < 1e-4) {
              k0 = k;
              break;
            }
          }
          const double floor_scale =
              100.0 * std::numeric_limits<double>::epsilon() *
              (rnorms.size() > 1 ? rnorms[1] : rnorms[0]);
          for (std::size_t k = std::max<std::size_t>(k0 + 1, 2); k + 1 < rnorms.size(); ++k) {
            const bool floor = rnorms[k - 1] <= floor_scale;
            const double lhs = floor ? 0.0 : rnorms[k + 1] / rnorms[k - 1];
            const bool satisfied = floor || lhs <= rhs * 1.05;
            bound.row({CsvWriter::cell(seed), method.label, CsvWriter::cell(static_cast<int>(k)),
                       CsvWriter::cell(lhs), CsvWriter::cell(rhs), CsvWriter::cell(satisfied),
                       CsvWriter::cell(floor)});
            if (!satisfied) ++violations;
          }
        }

        errors.erase(errors.begin());
        if (errors.empty()) errors.push_back(0.0);
        const double tail = estimate_r_factor(errors).back();

        tme.row({CsvWriter::cell(seed), CsvWriter::cell(init), method.label,
                 CsvWriter::cell(static_cast<int>(run.trace.iterations())),
                 CsvWriter::cell(run.seconds), CsvWriter::cell(run.trace.final_residual()),
                 CsvWriter::cell(tail)});
        auto& bucket = per_method[method.label];
        bucket["iterations"].push_back(static_cast<double>(run.trace.iterations()));
        bucket["wall_clock_s"].push_back(run.seconds);
        bucket["r_est_tails"].push_back(tail);
      }
    }
  }

  for (auto& [label, bucket] : per_method.items()) {
    std::vector<double> iters = bucket["iterations"].get<std::vector<double>>();
    if (!iters.empty()) bucket["median_iterations"] = median(iters);
  }

  json summary{{"experiment", cfg.experiment},
               {"model", cfg.model},
               {"violations", violations},
               {"seeds", seeds_json},
               {"per_method", per_method}};
  write_summary(table_path(cfg, "summary.json"), summary);
  return violations;
}

int run_tme_jacobian(const ExperimentConfig& cfg) {
  CsvWriter table(table_path(cfg, "w0.csv"), kW0Header);
  int violations = 0;
  json seeds_json = json::array();

  for (std::uint64_t seed : cfg.seeds) {
    const TylerProblem prob = make_problem(cfg, seed);
    const TmeReference ref = make_reference(prob, cfg.tol);
    const auto& s = ref.deflated;
    table.row({CsvWriter::cell(s.lambda_min), CsvWriter::cell(s.lambda_max),
               CsvWriter::cell(s.w0), CsvWriter::cell(s.op_norm), CsvWriter::cell(s.rate_bound),
               CsvWriter::cell(std::abs(s.w0 - s.op_norm) <= 1e-9)});
    seeds_json.push_back(json{{"seed", seed},
                              {"jacobian_defect", ref.jacobian_defect},
                              {"row_sum_deviation", ref.row_sum_deviation},
                              {"deflated_spectrum", spectrum_json(s)}});
    if (ref.jacobian_defect > 1e-5) ++violations;
    if (ref.row_sum_deviation > 1e-6) ++violations;
  }

  json summary{{"experiment", cfg.experiment},
               {"model", cfg.model},
               {"violations", violations},
               {"seeds", seeds_json}};
  write_summary(table_path(cfg, "summary.json"), summary);
  return violations;
}

int run_tme_compare(const ExperimentConfig& cfg) {
  CsvWriter rate(table_path(cfg, "rate.csv"), kRateHeader);
  int violations = 0;
  double max_gap = 0.0;
  const int steps = std::max(cfg.steps, 1);

  for (std::uint64_t seed : cfg.seeds) {
    const TylerProblem prob = make_problem(cfg, seed);
    const TmeReference ref = make_reference(prob, cfg.tol);
    const Vector w0 = seeded_normal_vector(derive_seed(seed, 1), prob.n());

    Vector w = w0;
    Matrix sigma = sigma_from_w(w0, prob, true).sigma;
    std::vector<double> std_errors, log_errors;
    for (int k = 0; k < steps; ++k) {
      sigma = tme_standard_step({sigma, true}, prob).sigma;
      w = tme_log_step(w, prob);
      const Matrix mapped = sigma_from_w(w, prob, true).sigma;
      max_gap = std::max(max_gap, (mapped - sigma).norm());
      std_errors.push_back((sigma - ref.sigma_star).norm());
      log_errors.push_back((mapped - ref.sigma_star).norm());
    }

    const auto std_r = estimate_r_factor(std_errors);
    const auto log_r = estimate_r_factor(log_errors);
    for (int k = 0; k < steps; ++k) {
      rate.row({CsvWriter::cell(seed), "standard", CsvWriter::cell(k + 1),
                CsvWriter::cell(std_errors[static_cast<std::size_t>(k)]),
                CsvWriter::cell(std_r[static_cast<std::size_t>(k)])});
    }
    for (int k = 0; k < steps; ++k) {
      rate.row({CsvWriter::cell(seed), "log", CsvWriter::cell(k + 1),
                CsvWriter::cell(log_errors[static_cast<std::size_t>(k)]),
                CsvWriter::cell(log_r[static_cast<std::size_t>(k)])});
    }
  }

  if (max_gap > 1e-8) ++violations;
  json summary{{"experiment", cfg.experiment},
               {"model", cfg.model},
               {"steps", steps},
               {"max_frobenius_gap", max_gap},
               {"violations", violations}};
  write_summary(table_path(cfg, "summary.json"), summary);
  return violations;
}

}  // namespace

int run_experiment(const ExperimentConfig& cfg) {
  if (cfg.seeds.empty()) throw std::invalid_argument("empty seed list");
  if (cfg.experiment == "linear-bound") return run_linear_bound(cfg);
  if (cfg.experiment == "linear-rate") return run_linear_rate(cfg);
  if (cfg.experiment == "scalar-tight") return run_scalar_tight(cfg);
  if (cfg.experiment == "tme-run") return run_tme(cfg);
  if (cfg.experiment == "tme-jacobian") return run_tme_jacobian(cfg);
  if (cfg.experiment == "tme-compare") return run_tme_compare(cfg);
  if (cfg.experiment == "w0-table") return run_w0_table(cfg);
  throw std::invalid_argument("unknown experiment: " + cfg.experiment);
}

}  // namespace expcli
