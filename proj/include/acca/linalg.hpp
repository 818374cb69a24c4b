#pragma once

#include <cstddef>
#include <vector>

#include "acca/matrix.hpp"

namespace acca {

// Eigendecomposition of a symmetric matrix with pinned conventions:
//  - eigenvalues sorted descending, exact ties kept in original index order;
//  - eigenvectors (columns of `vectors`, same order) have unit norm and the
//    entry of largest magnitude positive (ties broken toward the lowest row).
struct EigenResult {
  std::vector<double> values;
  Mat vectors;  // n x n, column j is the eigenvector of values[j]
};

EigenResult sym_eig(const Mat& a);

struct PinvResult {
  Mat value;
  std::size_t rank = 0;  // 0 flags an all-zero (or fully cut) input
};

// Moore-Penrose pseudo-inverse of a symmetric PSD Gram matrix via
// eigendecomposition; eigenvalues <= rank_rtol * lambda_max are dropped.
PinvResult pinv_gram(const Mat& g, double rank_rtol);

struct ProjectorResult {
  Mat value;  // N x N orthogonal projector onto the row space of X
  std::size_t rank = 0;
};

// X^T (X X^T)^+ X.
ProjectorResult rowspace_projector(const Mat& x, double rank_rtol);

}  // namespace acca
