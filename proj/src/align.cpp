#include "acca/align.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "acca/errors.hpp"
#include "acca/kernels.hpp"
#include "acca/linalg.hpp"

namespace acca {
namespace {

constexpr double kEntryTol = 1e-8;
constexpr double kRowSumTol = 1e-6;
constexpr double kEntropyTol = 1e-4;

double entropy_clamped(const double* p, std::size_t n) {
  double h = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = p[i];
    if (v > 0.0) h -= v * std::log(v);
  }
  return h;
}

}  // namespace

AlignmentMatrix AlignmentMatrix::wrap(Mat p, double entropy_bound) {
  AlignmentMatrix out;
  out.report = feasibility_report(p, p.rows());
  out.p = std::move(p);
  out.entropy_bound = entropy_bound;
  return out;
}

bool AlignmentMatrix::feasible() const {
  return report.min_entry >= -kEntryTol && report.max_entry <= 1.0 + kEntryTol &&
         report.max_row_sum_dev <= kRowSumTol &&
         report.max_row_entropy <= entropy_bound + kEntropyTol;
}

void AlignmentMatrix::require_feasible(const char* op) const {
  if (p.rows() != p.cols()) {
    throw ContractError(std::string(op) + ": alignment matrix is not square");
  }
  if (!feasible()) {
    throw ContractError(std::string(op) + ": infeasible alignment matrix");
  }
}

FeasibilityReport feasibility_report(const Mat& p, std::size_t n) {
  FeasibilityReport rep;
  if (p.size() == 0) return rep;
  rep.min_entry = p.data()[0];
  rep.max_entry = p.data()[0];
  for (std::size_t k = 0; k < p.size(); ++k) {
    rep.min_entry = std::min(rep.min_entry, p.data()[k]);
    rep.max_entry = std::max(rep.max_entry, p.data()[k]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    rep.max_row_sum_dev = std::max(
        rep.max_row_sum_dev, std::fabs(kernels::sum(p.row(i), p.cols()) - 1.0));
    rep.max_row_entropy =
        std::max(rep.max_row_entropy, entropy_clamped(p.row(i), p.cols()));
  }
  return rep;
}

void PStepProblem::validate() const {
  if (gamma1 < 0.0 || gamma2 < 0.0) {
    throw ContractError("PStepProblem: penalty weights must be nonnegative");
  }
  const std::size_t n = a.cols();
  if (s.cols() != n || s.rows() != a.rows()) {
    throw ContractError("PStepProblem: A and S shapes disagree");
  }
  if (!(entropy_bound > 0.0) ||
      entropy_bound > std::log(static_cast<double>(n)) + 1e-12) {
    throw ContractError("PStepProblem: entropy bound must lie in (0, ln N]");
  }
}

double row_entropy(std::span<const double> p) {
  double sum = 0.0;
  for (double v : p) {
    if (v < -kEntryTol) {
      throw ContractError("row_entropy: negative entry");
    }
    sum += v;
  }
  if (std::fabs(sum - 1.0) > kRowSumTol) {
    throw ContractError("row_entropy: entries sum to " + std::to_string(sum));
  }
  return entropy_clamped(p.data(), p.size());
}

double p_objective(const Mat& p, const PStepProblem& prob) {
  double value = frob_dist_sq(matmul(prob.a, p), prob.s);
  if (prob.gamma1 > 0.0 || prob.gamma2 > 0.0) {
    const Mat eye = Mat::identity(p.rows());
    if (prob.gamma1 > 0.0) value += prob.gamma1 * frob_dist_sq(matmul_nt(p, p), eye);
    if (prob.gamma2 > 0.0) value += prob.gamma2 * frob_dist_sq(matmul_tn(p, p), eye);
  }
  return value;
}

Mat p_gradient(const Mat& p, const PStepProblem& prob) {
  const Mat residual = sub(matmul(prob.a, p), prob.s);  // d x N
  Mat grad = matmul_tn(prob.a, residual);
  kernels::scal(2.0, grad.data(), grad.size());
  if (prob.gamma1 > 0.0) {
    Mat ppt = matmul_nt(p, p);
    for (std::size_t i = 0; i < ppt.rows(); ++i) ppt(i, i) -= 1.0;
    add_scaled_inplace(grad, 4.0 * prob.gamma1, matmul(ppt, p));
  }
  if (prob.gamma2 > 0.0) {
    Mat ptp = matmul_tn(p, p);
    for (std::size_t i = 0; i < ptp.rows(); ++i) ptp(i, i) -= 1.0;
    add_scaled_inplace(grad, 4.0 * prob.gamma2, matmul(p, ptp));
  }
  return grad;
}

std::vector<double> project_to_simplex(std::span<const double> v) {
  const std::size_t n = v.size();
  std::vector<double> sorted(v.begin(), v.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double tau = 0.0;
  std::size_t support = 0;
  for (std::size_t k = 0; k < n; ++k) {
    cumulative += sorted[k];
    const double candidate = (cumulative - 1.0) / static_cast<double>(k + 1);
    if (sorted[k] - candidate > 0.0) {
      tau = candidate;
      support = k + 1;
    }
  }
  (void)support;
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = std::max(v[i] - tau, 0.0);
  return out;
}

namespace {

// p_j^(1/t), computed in log space so tiny exponents cannot overflow.
std::vector<double> power_sharpen(const std::vector<double>& p, double t) {
  const std::size_t n = p.size();
  double pmax = 0.0;
  for (double v : p) pmax = std::max(pmax, v);
  std::vector<double> w(n, 0.0);
  double total = 0.0;
  const double log_pmax = std::log(pmax);
  for (std::size_t i = 0; i < n; ++i) {
    if (p[i] > 0.0) {
      w[i] = std::exp((std::log(p[i]) - log_pmax) / t);
      total += w[i];
    }
  }
  for (double& v : w) v /= total;
  return w;
}

// (1 - eps) * e_axis + eps * p
std::vector<double> blend_to_vertex(const std::vector<double>& p, std::size_t axis,
                                    double eps) {
  std::vector<double> q(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) q[i] = eps * p[i];
  q[axis] += 1.0 - eps;
  return q;
}

std::size_t lowest_argmax(const std::vector<double>& p) {
  std::size_t arg = 0;
  for (std::size_t i = 1; i < p.size(); ++i) {
    if (p[i] > p[arg]) arg = i;
  }
  return arg;
}

}  // namespace

std::vector<double> project_row_feasible(std::span<const double> v,
                                         double entropy_bound) {
  if (!(entropy_bound > 0.0)) {
    throw ParamError("project_row_feasible: entropy bound must be positive");
  }
  for (double x : v) {
    if (!std::isfinite(x)) {
      throw ContractError("project_row_feasible: non-finite input");
    }
  }
  std::vector<double> p = project_to_simplex(v);
  if (entropy_clamped(p.data(), p.size()) <= entropy_bound) return p;

  constexpr double kTarget = 1e-6;
  constexpr int kMaxBisect = 60;

  // Power sharpening: entropy is monotone in t, t = 1 reproduces p.
  double lo = 1e-9, hi = 1.0;
  std::vector<double> at_lo = power_sharpen(p, lo);
  if (entropy_clamped(at_lo.data(), at_lo.size()) <= entropy_bound + kTarget) {
    for (int it = 0; it < kMaxBisect; ++it) {
      const double mid = 0.5 * (lo + hi);
      std::vector<double> cand = power_sharpen(p, mid);
      const double h = entropy_clamped(cand.data(), cand.size());
      if (std::fabs(h - entropy_bound) <= kTarget * 0.1) return cand;
      if (h > entropy_bound) {
        hi = mid;
      } else {
        lo = mid;
        at_lo = std::move(cand);
      }
    }
    return at_lo;
  }

  // Tied maxima keep the power transform above the bound; blend toward the
  // lowest-index argmax instead.
  const std::size_t axis = lowest_argmax(p);
  double elo = 0.0, ehi = 1.0;
  std::vector<double> best = blend_to_vertex(p, axis, elo);
  for (int it = 0; it < kMaxBisect; ++it) {
    const double mid = 0.5 * (elo + ehi);
    std::vector<double> cand = blend_to_vertex(p, axis, mid);
    const double h = entropy_clamped(cand.data(), cand.size());
    if (std::fabs(h - entropy_bound) <= kTarget * 0.1) return cand;
    if (h > entropy_bound) {
      ehi = mid;
    } else {
      elo = mid;
      best = std::move(cand);
    }
  }
  return best;
}

namespace {

Mat project_rows_feasible(const Mat& p, double entropy_bound) {
  Mat out(p.rows(), p.cols());
  for (std::size_t i = 0; i < p.rows(); ++i) {
    const std::vector<double> row =
        project_row_feasible({p.row(i), p.cols()}, entropy_bound);
    std::copy(row.begin(), row.end(), out.row(i));
  }
  return out;
}

}  // namespace

AlignmentMatrix solve_p_step(const AlignmentMatrix& start, const PStepProblem& prob,
                             std::vector<double>* trace) {
  prob.validate();
  start.require_feasible("solve_p_step");
  const PStepSettings& cfg = prob.settings;

  Mat p = start.p;
  double f = p_objective(p, prob);
  if (trace) trace->push_back(f);

  for (int iter = 0; iter < cfg.max_inner_iters; ++iter) {
    const Mat grad = p_gradient(p, prob);

    // Stationarity: displacement of the unit-step projected-gradient map.
    Mat probe = p;
    add_scaled_inplace(probe, -1.0, grad);
    probe = project_rows_feasible(probe, prob.entropy_bound);
    const double gap = std::sqrt(frob_dist_sq(probe, p));
    if (gap <= cfg.grad_tol * std::max(1.0, frob_norm(p))) break;

    // Backtracking: accept a step only on sufficient decrease.
    double alpha = 1.0;
    bool moved = false;
    while (alpha >= cfg.step_tol) {
      Mat cand = (alpha == 1.0) ? probe : Mat();
      if (alpha != 1.0) {
        cand = p;
        add_scaled_inplace(cand, -alpha, grad);
        cand = project_rows_feasible(cand, prob.entropy_bound);
      }
      const double fc = p_objective(cand, prob);
      const double move_sq = frob_dist_sq(cand, p);
      if (fc <= f - 1e-4 * move_sq / alpha) {
        p = std::move(cand);
        f = fc;
        moved = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!moved) break;
    if (trace) trace->push_back(f);
  }
  return AlignmentMatrix::wrap(std::move(p), prob.entropy_bound);
}

namespace {

// Coordinates of the view's columns in its top-r left-singular directions.
Mat reduce_view(const Mat& x, double rank_rtol, std::size_t max_rank) {
  const EigenResult eig = sym_eig(matmul_nt(x, x));
  const double lambda_max = eig.values.empty() ? 0.0 : std::max(eig.values[0], 0.0);
  std::size_t rank = 0;
  while (rank < eig.values.size() && eig.values[rank] > rank_rtol * lambda_max) {
    ++rank;
  }
  rank = std::min(rank, max_rank);
  Mat basis(x.rows(), rank);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t j = 0; j < rank; ++j) basis(i, j) = eig.vectors(i, j);
  }
  return matmul_tn(basis, x);  // rank x N
}

std::size_t gram_rank(const Mat& x, double rank_rtol) {
  const EigenResult eig = sym_eig(matmul_nt(x, x));
  const double lambda_max = eig.values.empty() ? 0.0 : std::max(eig.values[0], 0.0);
  if (lambda_max <= 0.0) return 0;
  std::size_t rank = 0;
  while (rank < eig.values.size() && eig.values[rank] > rank_rtol * lambda_max) {
    ++rank;
  }
  return rank;
}

}  // namespace

AlignmentMatrix initialize_alignment(const DatasetPair& data, double gamma1,
                                     double gamma2, double entropy_bound,
                                     double rank_rtol, const InitOptions& opts) {
  data.validate();
  if (!data.x_centered || !data.y_centered) {
    throw ContractError("initialize_alignment: data must be centered");
  }
  const std::size_t n = data.samples();

  // Uniform start sharpened to the bound; deterministic and seed-free.
  const std::vector<double> uniform(n, 1.0 / static_cast<double>(n));
  const std::vector<double> row = project_row_feasible(uniform, entropy_bound);
  Mat p0(n, n);
  for (std::size_t i = 0; i < n; ++i) std::copy(row.begin(), row.end(), p0.row(i));
  AlignmentMatrix start = AlignmentMatrix::wrap(std::move(p0), entropy_bound);

  PStepProblem prob;
  if (opts.raw_views) {
    if (data.x.rows() != data.y.rows()) {
      throw ParamError("initialize_alignment: raw matching requires D_x == D_y");
    }
    prob.s = data.x;
    prob.a = data.y;
  } else {
    const std::size_t r =
        std::min(gram_rank(data.x, rank_rtol), gram_rank(data.y, rank_rtol));
    if (r == 0) return start;  // degenerate views carry no matching signal
    prob.s = reduce_view(data.x, rank_rtol, r);
    prob.a = reduce_view(data.y, rank_rtol, r);
  }
  prob.gamma1 = gamma1;
  prob.gamma2 = gamma2;
  prob.entropy_bound = entropy_bound;
  prob.settings = opts.settings;
  return solve_p_step(start, prob);
}

Mat round_to_permutation(const AlignmentMatrix& alignment) {
  alignment.require_feasible("round_to_permutation");
  const Mat& p = alignment.p;
  const std::size_t n = p.rows();

  std::vector<std::size_t> order(n * n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
    return p.data()[l] > p.data()[r];
  });

  Mat perm(n, n);
  std::vector<bool> row_used(n, false), col_used(n, false);
  std::size_t placed = 0;
  for (std::size_t k = 0; k < order.size() && placed < n; ++k) {
    const std::size_t i = order[k] / n;
    const std::size_t j = order[k] % n;
    if (row_used[i] || col_used[j]) continue;
    perm(i, j) = 1.0;
    row_used[i] = true;
    col_used[j] = true;
    ++placed;
  }
  return perm;
}

}  // namespace acca
