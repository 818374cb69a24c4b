#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace acca {

// Dense row-major double matrix. Arithmetic helpers route their inner loops
// through the kernels layer.
class Mat {
 public:
  Mat() = default;
  Mat(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Mat identity(std::size_t n);
  // Construction from literal rows; throws ContractError on ragged or
  // non-finite input.
  static Mat from_rows(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  double* row(std::size_t i) { return data_.data() + i * cols_; }
  const double* row(std::size_t i) const { return data_.data() + i * cols_; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  bool all_finite() const;
  bool same_shape(const Mat& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  bool operator==(const Mat& other) const = default;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> data_;
};

Mat transpose(const Mat& a);

// c = a * b
Mat matmul(const Mat& a, const Mat& b);
// c = a * b^T
Mat matmul_nt(const Mat& a, const Mat& b);
// c = a^T * b
Mat matmul_tn(const Mat& a, const Mat& b);

Mat add(const Mat& a, const Mat& b);
Mat sub(const Mat& a, const Mat& b);
Mat scaled(const Mat& a, double s);

// ||a||_F^2 and ||a - b||_F^2
double frob_sq(const Mat& a);
double frob_dist_sq(const Mat& a, const Mat& b);
double frob_norm(const Mat& a);
double max_abs(const Mat& a);
double max_abs_diff(const Mat& a, const Mat& b);

// In-place a += s * b.
void add_scaled_inplace(Mat& a, double s, const Mat& b);

}  // namespace acca
