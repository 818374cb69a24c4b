#include "acca/cca.hpp"

#include <cmath>
#include <string>

#include "acca/errors.hpp"
#include "acca/kernels.hpp"

namespace acca {

void DatasetPair::validate() const {
  if (x.cols() != y.cols()) {
    throw ContractError("DatasetPair: views have " + std::to_string(x.cols()) +
                        " and " + std::to_string(y.cols()) + " columns");
  }
  if (x.cols() < 2) throw ContractError("DatasetPair: need N >= 2 samples");
  if (!x.all_finite() || !y.all_finite()) {
    throw ContractError("DatasetPair: non-finite entries");
  }
  const double n = static_cast<double>(x.cols());
  auto check_centered = [&](const Mat& m, const char* which) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (std::fabs(kernels::sum(m.row(i), m.cols())) > 1e-8 * n) {
        throw ContractError(std::string("DatasetPair: ") + which +
                            " flagged centered but a row sum is nonzero");
      }
    }
  };
  if (x_centered) check_centered(x, "X");
  if (y_centered) check_centered(y, "Y");
}

DatasetPair make_centered_pair(Mat x, Mat y) {
  DatasetPair pair{center_columns(x), center_columns(y), true, true};
  pair.validate();
  return pair;
}

Mat center_columns(const Mat& x) {
  Mat out = x;
  if (x.cols() == 0) return out;
  const double inv_n = 1.0 / static_cast<double>(x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const double mean = kernels::sum(x.row(i), x.cols()) * inv_n;
    double* row = out.row(i);
    for (std::size_t j = 0; j < x.cols(); ++j) row[j] -= mean;
  }
  return out;
}

Mat update_s(const Mat& x, const Mat& y_aligned, std::size_t d, double rank_rtol) {
  if (x.cols() != y_aligned.cols()) {
    throw ContractError("update_s: views have different sample counts");
  }
  const std::size_t n = x.cols();
  if (d > n) {
    throw ParamError("update_s: d = " + std::to_string(d) + " exceeds N = " +
                     std::to_string(n));
  }
  const Mat m = add(rowspace_projector(x, rank_rtol).value,
                    rowspace_projector(y_aligned, rank_rtol).value);
  const EigenResult eig = sym_eig(m);
  Mat s(d, n);
  for (std::size_t k = 0; k < d; ++k) {
    for (std::size_t j = 0; j < n; ++j) s(k, j) = eig.vectors(j, k);
  }
  return s;
}

Mat update_u(const Mat& x, const Mat& s, double rank_rtol) {
  if (s.cols() != x.cols()) {
    throw ContractError("update_u: S and X have different sample counts");
  }
  const Mat gram = matmul_nt(x, x);
  const Mat sxt = matmul_nt(s, x);  // d x D
  return matmul(sxt, pinv_gram(gram, rank_rtol).value);
}

Mat update_v(const Mat& y, const Mat& p, const Mat& s, double rank_rtol) {
  if (p.rows() != y.cols() || p.rows() != p.cols()) {
    throw ContractError("update_v: P must be N x N matching Y's columns");
  }
  return update_u(matmul(y, p), s, rank_rtol);
}

CcaModel classical_cca(const DatasetPair& data, std::size_t d, double rank_rtol) {
  data.validate();
  CcaModel model;
  model.d = d;
  model.s = update_s(data.x, data.y, d, rank_rtol);
  model.u = update_u(data.x, model.s, rank_rtol);
  model.v = update_u(data.y, model.s, rank_rtol);
  return model;
}

double cca_objective(const CcaModel& model, const DatasetPair& data) {
  return frob_dist_sq(matmul(model.u, data.x), model.s) +
         frob_dist_sq(matmul(model.v, data.y), model.s);
}

}  // namespace acca
