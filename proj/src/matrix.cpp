#include "acca/matrix.hpp"

#include <cmath>
#include <cstring>

#include "acca/errors.hpp"
#include "acca/kernels.hpp"

namespace acca {

Mat Mat::identity(std::size_t n) {
  Mat m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Mat Mat::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  Mat m(r, c);
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (row.size() != c) throw ContractError("Mat::from_rows: ragged rows");
    std::size_t j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  if (!m.all_finite()) throw ContractError("Mat::from_rows: non-finite entry");
  return m;
}

bool Mat::all_finite() const {
  for (double v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

Mat transpose(const Mat& a) {
  Mat t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  }
  return t;
}

namespace {
void require_shape(bool ok, const char* what) {
  if (!ok) throw ContractError(what);
}
}  // namespace

Mat matmul(const Mat& a, const Mat& b) {
  require_shape(a.cols() == b.rows(), "matmul: inner dimensions differ");
  Mat c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double* ci = c.row(i);
    for (std::size_t p = 0; p < a.cols(); ++p) {
      kernels::axpy(a(i, p), b.row(p), ci, b.cols());
    }
  }
  return c;
}

Mat matmul_nt(const Mat& a, const Mat& b) {
  require_shape(a.cols() == b.cols(), "matmul_nt: inner dimensions differ");
  Mat c(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.rows(); ++j) {
      c(i, j) = kernels::dot(a.row(i), b.row(j), a.cols());
    }
  }
  return c;
}

Mat matmul_tn(const Mat& a, const Mat& b) {
  require_shape(a.rows() == b.rows(), "matmul_tn: inner dimensions differ");
  Mat c(a.cols(), b.cols());
  for (std::size_t p = 0; p < a.rows(); ++p) {
    const double* bp = b.row(p);
    for (std::size_t i = 0; i < a.cols(); ++i) {
      kernels::axpy(a(p, i), bp, c.row(i), b.cols());
    }
  }
  return c;
}

Mat add(const Mat& a, const Mat& b) {
  require_shape(a.same_shape(b), "add: shape mismatch");
  Mat c = a;
  kernels::axpy(1.0, b.data(), c.data(), c.size());
  return c;
}

Mat sub(const Mat& a, const Mat& b) {
  require_shape(a.same_shape(b), "sub: shape mismatch");
  Mat c = a;
  kernels::axpy(-1.0, b.data(), c.data(), c.size());
  return c;
}

Mat scaled(const Mat& a, double s) {
  Mat c = a;
  kernels::scal(s, c.data(), c.size());
  return c;
}

double frob_sq(const Mat& a) { return kernels::sqnorm(a.data(), a.size()); }

double frob_dist_sq(const Mat& a, const Mat& b) {
  require_shape(a.same_shape(b), "frob_dist_sq: shape mismatch");
  return kernels::sqdiff(a.data(), b.data(), a.size());
}

double frob_norm(const Mat& a) { return std::sqrt(frob_sq(a)); }

double max_abs(const Mat& a) { return kernels::max_abs(a.data(), a.size()); }

double max_abs_diff(const Mat& a, const Mat& b) {
  require_shape(a.same_shape(b), "max_abs_diff: shape mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, std::fabs(a.data()[i] - b.data()[i]));
  }
  return m;
}

void add_scaled_inplace(Mat& a, double s, const Mat& b) {
  require_shape(a.same_shape(b), "add_scaled_inplace: shape mismatch");
  kernels::axpy(s, b.data(), a.data(), a.size());
}

}  // namespace acca
