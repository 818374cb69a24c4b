#include "acca/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "acca/errors.hpp"

namespace acca {
namespace {

void require_symmetric(const Mat& a, const char* op) {
  if (a.rows() != a.cols()) {
    throw ContractError(std::string(op) + ": matrix is not square");
  }
  const double scale = max_abs(a);
  const double tol = 1e-10 * std::max(1.0, scale);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = i + 1; j < a.cols(); ++j) {
      if (std::fabs(a(i, j) - a(j, i)) > tol) {
        throw ContractError(std::string(op) + ": matrix is not symmetric");
      }
    }
  }
}

// Cyclic Jacobi rotations on the symmetrized copy. Plain sequential sweeps so
// the result is a pure function of the input.
void jacobi(Mat& a, Mat& v, std::size_t n) {
  constexpr int kMaxSweeps = 64;
  const double frob = frob_norm(a);
  if (frob == 0.0) return;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    }
    if (std::sqrt(2.0 * off) <= 1e-15 * frob) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::fabs(apq) <= 1e-300) continue;
        const double app = a(p, p), aqq = a(q, q);
        const double theta = 0.5 * (aqq - app) / apq;
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::fabs(theta) + std::sqrt(1.0 + theta * theta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const double tau = s / (1.0 + c);

        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          if (i != p && i != q) {
            const double aip = a(i, p), aiq = a(i, q);
            a(i, p) = aip - s * (aiq + tau * aip);
            a(i, q) = aiq + s * (aip - tau * aiq);
            a(p, i) = a(i, p);
            a(q, i) = a(i, q);
          }
          const double vip = v(i, p), viq = v(i, q);
          v(i, p) = vip - s * (viq + tau * vip);
          v(i, q) = viq + s * (vip - tau * viq);
        }
      }
    }
  }
}

void fix_column_sign(Mat& v, std::size_t col) {
  std::size_t arg = 0;
  double best = -1.0;
  for (std::size_t i = 0; i < v.rows(); ++i) {
    const double mag = std::fabs(v(i, col));
    if (mag > best) {
      best = mag;
      arg = i;
    }
  }
  if (v(arg, col) < 0.0) {
    for (std::size_t i = 0; i < v.rows(); ++i) v(i, col) = -v(i, col);
  }
}

}  // namespace

EigenResult sym_eig(const Mat& a) {
  require_symmetric(a, "sym_eig");
  const std::size_t n = a.rows();

  Mat work(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) work(i, j) = 0.5 * (a(i, j) + a(j, i));
  }
  Mat vecs = Mat::identity(n);
  jacobi(work, vecs, n);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
    return work(l, l) > work(r, r);
  });

  EigenResult result;
  result.values.resize(n);
  result.vectors = Mat(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t src = order[j];
    result.values[j] = work(src, src);
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) norm += vecs(i, src) * vecs(i, src);
    const double inv = norm > 0.0 ? 1.0 / std::sqrt(norm) : 0.0;
    for (std::size_t i = 0; i < n; ++i) result.vectors(i, j) = vecs(i, src) * inv;
    fix_column_sign(result.vectors, j);
  }
  return result;
}

PinvResult pinv_gram(const Mat& g, double rank_rtol) {
  if (!(rank_rtol > 0.0 && rank_rtol < 1.0)) {
    throw ContractError("pinv_gram: rank_rtol must lie in (0, 1)");
  }
  require_symmetric(g, "pinv_gram");
  const std::size_t n = g.rows();

  const EigenResult eig = sym_eig(g);
  const double lambda_max = eig.values.empty() ? 0.0 : std::max(eig.values[0], 0.0);

  PinvResult out;
  out.value = Mat(n, n);
  if (lambda_max <= 0.0) return out;  // rank 0, zero matrix

  const double cutoff = rank_rtol * lambda_max;
  for (std::size_t j = 0; j < n; ++j) {
    if (eig.values[j] <= cutoff) continue;
    const double w = 1.0 / eig.values[j];
    for (std::size_t r = 0; r < n; ++r) {
      const double vr = eig.vectors(r, j) * w;
      for (std::size_t c = 0; c < n; ++c) {
        out.value(r, c) += vr * eig.vectors(c, j);
      }
    }
    ++out.rank;
  }
  // symmetrize away accumulation roundoff
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = r + 1; c < n; ++c) {
      const double m = 0.5 * (out.value(r, c) + out.value(c, r));
      out.value(r, c) = m;
      out.value(c, r) = m;
    }
  }
  return out;
}

ProjectorResult rowspace_projector(const Mat& x, double rank_rtol) {
  const std::size_t n = x.cols();
  ProjectorResult out;
  if (max_abs(x) == 0.0) {
    out.value = Mat(n, n);
    return out;
  }
  const Mat gram = matmul_nt(x, x);
  const PinvResult pinv = pinv_gram(gram, rank_rtol);
  const Mat t = matmul(pinv.value, x);  // D x N
  out.value = matmul_tn(x, t);          // N x N
  out.rank = pinv.rank;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = r + 1; c < n; ++c) {
      const double m = 0.5 * (out.value(r, c) + out.value(c, r));
      out.value(r, c) = m;
      out.value(c, r) = m;
    }
  }
  return out;
}

}  // namespace acca
