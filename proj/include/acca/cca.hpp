#pragma once

#include <cstdint>

#include "acca/linalg.hpp"
#include "acca/matrix.hpp"

namespace acca {

// Two views sharing N sample columns.
struct DatasetPair {
  Mat x;  // D_x x N
  Mat y;  // D_y x N
  bool x_centered = false;
  bool y_centered = false;

  std::size_t samples() const { return x.cols(); }

  // Validates shapes (equal N >= 2, finite entries) and, when the flags are
  // set, that row sums vanish within 1e-8 * N.
  void validate() const;
};

// Builds a validated, centered pair from raw views.
DatasetPair make_centered_pair(Mat x, Mat y);

struct CcaModel {
  Mat u;  // d x D_x
  Mat v;  // d x D_y
  Mat s;  // d x N, rows orthonormal
  std::size_t d = 0;
};

// Subtracts the row mean from every row.
Mat center_columns(const Mat& x);

// Rows of the result are the top-d eigenvectors of
// rowspace_projector(x) + rowspace_projector(y_aligned).
Mat update_s(const Mat& x, const Mat& y_aligned, std::size_t d, double rank_rtol);

// S X^T (X X^T)^+, the least-squares minimizer of ||U X - S||_F^2.
Mat update_u(const Mat& x, const Mat& s, double rank_rtol);

// S (YP)^T (YP (YP)^T)^+.
Mat update_v(const Mat& y, const Mat& p, const Mat& s, double rank_rtol);

// Closed-form two-view CCA on an aligned pair.
CcaModel classical_cca(const DatasetPair& data, std::size_t d, double rank_rtol);

// ||UX - S||_F^2 + ||VY - S||_F^2 for an aligned pair.
double cca_objective(const CcaModel& model, const DatasetPair& data);

}  // namespace acca
