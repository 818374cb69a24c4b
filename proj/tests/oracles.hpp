#pragma once

// Test-only reference implementations, written as plain loops so they stay
// independent of the kernel and solver paths they check.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "acca/matrix.hpp"
#include "acca/rng.hpp"

namespace oracle {

inline acca::Mat naive_matmul(const acca::Mat& a, const acca::Mat& b) {
  acca::Mat c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      double acc = 0.0;
      for (std::size_t p = 0; p < a.cols(); ++p) acc += a(i, p) * b(p, j);
      c(i, j) = acc;
    }
  }
  return c;
}

inline acca::Mat naive_transpose(const acca::Mat& a) {
  acca::Mat t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  }
  return t;
}

inline double naive_frob_dist_sq(const acca::Mat& a, const acca::Mat& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const double d = a(i, j) - b(i, j);
      acc += d * d;
    }
  }
  return acc;
}

inline double naive_entropy(const std::vector<double>& p) {
  double h = 0.0;
  for (double v : p) {
    if (v > 0.0) h -= v * std::log(v);
  }
  return h;
}

inline acca::Mat random_matrix(acca::Rng& rng, std::size_t rows, std::size_t cols) {
  acca::Mat m(rows, cols);
  for (std::size_t k = 0; k < m.size(); ++k) m.data()[k] = rng.normal();
  return m;
}

inline acca::Mat random_symmetric(acca::Rng& rng, std::size_t n) {
  acca::Mat m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double v = rng.normal();
      m(i, j) = v;
      m(j, i) = v;
    }
  }
  return m;
}

// All permutations of {0, ..., n-1} in lexicographic order.
inline std::vector<std::vector<std::size_t>> all_permutations(std::size_t n) {
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  std::vector<std::vector<std::size_t>> out;
  do {
    out.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

// Permutation matrix with row i hot at column perm[i].
inline acca::Mat permutation_matrix(const std::vector<std::size_t>& perm) {
  acca::Mat p(perm.size(), perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) p(i, perm[i]) = 1.0;
  return p;
}

// ||A P - S||_F^2 + g1 ||P P^T - I||_F^2 + g2 ||P^T P - I||_F^2 by loops.
inline double naive_p_objective(const acca::Mat& p, const acca::Mat& a,
                                const acca::Mat& s, double g1, double g2) {
  const std::size_t n = p.rows();
  double value = naive_frob_dist_sq(naive_matmul(a, p), s);
  const acca::Mat eye = acca::Mat::identity(n);
  value += g1 * naive_frob_dist_sq(naive_matmul(p, naive_transpose(p)), eye);
  value += g2 * naive_frob_dist_sq(naive_matmul(naive_transpose(p), p), eye);
  return value;
}

// argmin over all permutation matrices of ||A P - S||_F^2, evaluated with
// plain loops. Both orthogonality penalties vanish at permutations, so this
// is also the argmin of the full penalized objective over permutations.
inline acca::Mat brute_force_matching(const acca::Mat& a, const acca::Mat& s) {
  const std::size_t n = a.cols();
  double best = std::numeric_limits<double>::infinity();
  acca::Mat best_p;
  for (const auto& perm : all_permutations(n)) {
    const acca::Mat p = permutation_matrix(perm);
    const double value = naive_frob_dist_sq(naive_matmul(a, p), s);
    if (value < best) {
      best = value;
      best_p = p;
    }
  }
  return best_p;
}

}  // namespace oracle
