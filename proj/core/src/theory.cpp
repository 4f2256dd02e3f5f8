#include "fpaccel/theory.hpp"

#include "fpaccel/errors.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace fpaccel {

namespace {

constexpr double kHalfPi = 1.57079632679489661923;

void require_spectrum(double lambda_min, double lambda_max) {
  if (!(lambda_min > -1.0) || !(lambda_max < 1.0) || !(lambda_min <= lambda_max)) {
    throw std::invalid_argument("bad spectrum: need -1 < lambda_min <= lambda_max < 1");
  }
}

void require_symmetric(const Matrix& W) {
  if (W.rows() != W.cols()) throw std::invalid_argument("matrix must be square");
  const double scale = std::max(1.0, W.norm());
  if ((W - W.transpose()).norm() > 1e-12 * scale) {
    throw std::invalid_argument("matrix is not symmetric");
  }
}

// Golden-section maximization on [lo, hi] down to interval width tol.
double golden_max(const std::function<double(double)>& fn, double lo, double hi, double tol) {
  constexpr double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = fn(c), fd = fn(d);
  while (b - a > tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = fn(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = fn(d);
    }
  }
  return std::max(fc, fd);
}

}  // namespace

double w0_objective(double a, double lambda_min, double lambda_max) {
  require_spectrum(lambda_min, lambda_max);
  if (!(a >= 0.0)) throw std::invalid_argument("a must be nonnegative");

  const double spread = std::abs(lambda_max - lambda_min);
  const double depth = 2.0 - lambda_max - lambda_min;  // > 0 on the valid domain

  if (std::isinf(a)) {
    return spread / depth;
  }
  double s = spread * a / std::sqrt(4.0 + depth * depth * a * a);
  s = std::clamp(s, -1.0, 1.0);
  const double mid = 1.0 - 0.5 * (lambda_max + lambda_min);
  const double swing = std::abs(std::atan(a) - std::atan(mid * a));
  return std::sin(std::asin(s) + swing);
}

double compute_w0(double lambda_min, double lambda_max) {
  require_spectrum(lambda_min, lambda_max);

  const auto at_theta = [&](double theta) {
    if (theta >= kHalfPi) {
      return w0_objective(std::numeric_limits<double>::infinity(), lambda_min, lambda_max);
    }
    return w0_objective(std::tan(theta), lambda_min, lambda_max);
  };

  constexpr int kGridPoints = 10001;
  const double h = kHalfPi / (kGridPoints - 1);
  double best = -1.0;
  int best_i = 0;
  for (int i = 0; i < kGridPoints; ++i) {
    const double v = at_theta(i == kGridPoints - 1 ? kHalfPi : i * h);
    if (v > best) {
      best = v;
      best_i = i;
    }
  }

  const double lo = std::max(0.0, (best_i - 1) * h);
  const double hi = std::min(kHalfPi, (best_i + 1) * h);
  const double refined = golden_max(at_theta, lo, hi, 1e-12);
  return std::max(best, refined);
}

double scalar_w0(double w) {
  if (!(w > 0.0) || !(w < 1.0)) throw std::invalid_argument("w must be in (0, 1)");
  return w / (2.0 - w);
}

SpectrumSummary summarize_spectrum(double lambda_min, double lambda_max) {
  SpectrumSummary s;
  s.lambda_min = lambda_min;
  s.lambda_max = lambda_max;
  s.op_norm = std::max(std::abs(lambda_min), std::abs(lambda_max));
  s.w0 = compute_w0(lambda_min, lambda_max);
  s.rate_bound = std::sqrt(s.w0 * s.op_norm);
  return s;
}

SpectrumSummary spectrum_of(const Matrix& W) {
  require_symmetric(W);
  Eigen::SelfAdjointEigenSolver<Matrix> es(W, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw Error("eigendecomposition failed");
  const auto& ev = es.eigenvalues();
  return summarize_spectrum(ev(0), ev(ev.size() - 1));
}

TightInitPair make_tight_init_scalar(double w) {
  if (!(w > 0.0) || !(w < 1.0)) throw std::invalid_argument("w must be in (0, 1)");
  const double sin_phi = 1.0 / std::sqrt(2.0 - w);
  const double cos_phi = std::sqrt((1.0 - w) / (2.0 - w));
  TightInitPair pair;
  pair.xtilde0 = Vector(2);
  pair.xtilde0 << sin_phi, 1.0 - cos_phi;
  pair.xtilde1 = Vector(2);
  pair.xtilde1 << 0.0, 1.0;
  return pair;
}

std::vector<PairwiseBoundRow> check_pairwise_bound(const SolveTrace& trace, const Matrix& W,
                                                   const Vector& a) {
  require_symmetric(W);
  if (a.size() != W.rows()) throw std::invalid_argument("offset has wrong dimension");
  Eigen::SelfAdjointEigenSolver<Matrix> es(W, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw Error("eigendecomposition failed");
  const double lo = es.eigenvalues()(0);
  const double hi = es.eigenvalues()(es.eigenvalues().size() - 1);
  if (std::max(std::abs(lo), std::abs(hi)) >= 1.0) throw Error("not contractive");
  const SpectrumSummary spec = summarize_spectrum(lo, hi);

  const Index n = W.rows();
  const Matrix w_minus_i = W - Matrix::Identity(n, n);
  // I - W is SPD for a symmetric contraction.
  const Vector x_star = (Matrix::Identity(n, n) - W).llt().solve(a);

  std::vector<double> mapped;
  mapped.reserve(trace.records.size());
  for (const auto& rec : trace.records) {
    mapped.push_back((w_minus_i * (rec.iterate - x_star)).norm());
  }

  std::vector<PairwiseBoundRow> rows;
  if (trace.records.size() < 4) return rows;

  const double floor_scale =
      100.0 * std::numeric_limits<double>::epsilon() * (w_minus_i * trace.records[1].iterate).norm();
  const double rhs = spec.w0 * spec.op_norm;

  for (std::size_t k = 2; k + 1 < mapped.size(); ++k) {
    PairwiseBoundRow row;
    row.k = static_cast<int>(k);
    row.rhs = rhs;
    const double denom = mapped[k - 1];
    row.floor = denom <= floor_scale;
    row.lhs = denom > 0.0 ? mapped[k + 1] / denom : std::numeric_limits<double>::quiet_NaN();
    row.satisfied = row.floor || row.lhs <= rhs * (1.0 + 1e-9);
    rows.push_back(row);
  }
  return rows;
}

std::vector<double> estimate_r_factor(const std::vector<double>& error_norms) {
  if (error_norms.empty()) throw std::invalid_argument("error list is empty");
  for (double e : error_norms) {
    if (!(e >= 0.0) || !std::isfinite(e)) {
      throw std::invalid_argument("error norms must be finite and nonnegative");
    }
  }
  const double tiny = std::numeric_limits<double>::min();
  std::vector<double> out(error_norms.size());
  double suffix = 0.0;
  for (std::size_t i = error_norms.size(); i-- > 0;) {
    const double e = std::max(error_norms[i], tiny);
    suffix = std::max(suffix, std::pow(e, 1.0 / static_cast<double>(i + 1)));
    out[i] = suffix;
  }
  return out;
}

}  // namespace fpaccel
