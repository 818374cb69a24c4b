#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "acca/cca.hpp"
#include "acca/matrix.hpp"

namespace acca {

// Residuals of the relaxed-permutation row constraints, recomputed from P.
struct FeasibilityReport {
  double max_row_sum_dev = 0.0;  // max_i |sum_j p_ij - 1|
  double min_entry = 0.0;
  double max_entry = 0.0;
  double max_row_entropy = 0.0;  // nats
};

// Relaxed permutation estimate. Rows live on the probability simplex with a
// per-row entropy cap of `entropy_bound` nats.
struct AlignmentMatrix {
  Mat p;  // N x N
  double entropy_bound = 0.0;
  FeasibilityReport report;

  static AlignmentMatrix wrap(Mat p, double entropy_bound);

  // Entries in [-1e-8, 1+1e-8], row sums within 1e-6 of one, row entropies
  // within 1e-4 of the bound.
  bool feasible() const;
  void require_feasible(const char* op) const;
};

FeasibilityReport feasibility_report(const Mat& p, std::size_t n);

// Inner-solver knobs for the projected-gradient P-step.
struct PStepSettings {
  double grad_tol = 1e-7;   // on the unit-step projected-gradient displacement
  double step_tol = 1e-12;  // line-search floor before declaring no progress
  int max_inner_iters = 300;
};

// ||A P - S||_F^2 + gamma1 ||P P^T - I||_F^2 + gamma2 ||P^T P - I||_F^2
// with A and S held fixed.
struct PStepProblem {
  Mat a;  // d x N (V*Y during the alternating loop)
  Mat s;  // d x N
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double entropy_bound = 0.0;  // lambda, in (0, ln N]
  PStepSettings settings;

  void validate() const;
};

// Shannon entropy of a probability vector, in nats; 0 ln 0 := 0.
double row_entropy(std::span<const double> p);

double p_objective(const Mat& p, const PStepProblem& prob);
Mat p_gradient(const Mat& p, const PStepProblem& prob);

// Euclidean projection onto the probability simplex.
std::vector<double> project_to_simplex(std::span<const double> v);

// Simplex projection followed, when the entropy cap is exceeded, by
// power-transform sharpening with the exponent found by bisection.
std::vector<double> project_row_feasible(std::span<const double> v,
                                         double entropy_bound);

// Projected gradient descent with backtracking; never increases the
// objective. Appends the accepted objective values to *trace when given.
AlignmentMatrix solve_p_step(const AlignmentMatrix& start, const PStepProblem& prob,
                             std::vector<double>* trace = nullptr);

struct InitOptions {
  // Match on the raw views (requires D_x == D_y) instead of the
  // rank-reconciled representations.
  bool raw_views = false;
  PStepSettings settings{.grad_tol = 1e-7, .step_tol = 1e-12, .max_inner_iters = 500};
};

// CCA-free initial alignment: minimizes the direct matching objective between
// dimension-reconciled views, starting from the uniform matrix sharpened to
// the entropy bound.
AlignmentMatrix initialize_alignment(const DatasetPair& data, double gamma1,
                                     double gamma2, double entropy_bound,
                                     double rank_rtol, const InitOptions& opts = {});

// Greedy max-entry rounding with used row/column exclusion; ties broken by
// lowest (row, column).
Mat round_to_permutation(const AlignmentMatrix& alignment);

}  // namespace acca
