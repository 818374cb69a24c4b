#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>

#include "acca/errors.hpp"
#include "acca/linalg.hpp"
#include "acca/rng.hpp"
#include "oracles.hpp"

using namespace acca;

namespace {

Mat reconstruct(const EigenResult& eig) {
  const std::size_t n = eig.values.size();
  Mat out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        out(i, j) += eig.values[k] * eig.vectors(i, k) * eig.vectors(j, k);
      }
    }
  }
  return out;
}

}  // namespace

TEST_CASE("sym_eig orders a diagonal spectrum descending") {
  const Mat a = Mat::from_rows({{1, 0, 0}, {0, 3, 0}, {0, 0, 2}});
  const EigenResult eig = sym_eig(a);
  CHECK(eig.values[0] == doctest::Approx(3.0));
  CHECK(eig.values[1] == doctest::Approx(2.0));
  CHECK(eig.values[2] == doctest::Approx(1.0));
  // eigenvectors: e2, e3, e1 (sign-fixed)
  CHECK(eig.vectors(1, 0) == doctest::Approx(1.0));
  CHECK(eig.vectors(2, 1) == doctest::Approx(1.0));
  CHECK(eig.vectors(0, 2) == doctest::Approx(1.0));
}

TEST_CASE("sym_eig degenerate spectrum keeps original index order") {
  const EigenResult eig = sym_eig(Mat::identity(2));
  CHECK(eig.values[0] == doctest::Approx(1.0));
  CHECK(eig.values[1] == doctest::Approx(1.0));
  CHECK(eig.vectors(0, 0) == doctest::Approx(1.0));
  CHECK(eig.vectors(1, 0) == doctest::Approx(0.0));
  CHECK(eig.vectors(1, 1) == doctest::Approx(1.0));
}

TEST_CASE("sym_eig reconstructs a random symmetric matrix") {
  Rng rng(11);
  const Mat a = oracle::random_symmetric(rng, 5);
  const EigenResult eig = sym_eig(a);
  const double residual = std::sqrt(frob_dist_sq(reconstruct(eig), a));
  CHECK(residual <= 1e-8 * std::max(1.0, frob_norm(a)));

  // columns orthonormal
  for (std::size_t j = 0; j < 5; ++j) {
    double norm = 0.0;
    for (std::size_t i = 0; i < 5; ++i) norm += eig.vectors(i, j) * eig.vectors(i, j);
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("sym_eig sign convention: largest-magnitude entry positive") {
  Rng rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const Mat a = oracle::random_symmetric(rng, 6);
    const EigenResult eig = sym_eig(a);
    for (std::size_t j = 0; j < 6; ++j) {
      double best = 0.0;
      std::size_t arg = 0;
      for (std::size_t i = 0; i < 6; ++i) {
        if (std::fabs(eig.vectors(i, j)) > best) {
          best = std::fabs(eig.vectors(i, j));
          arg = i;
        }
      }
      CHECK(eig.vectors(arg, j) > 0.0);
    }
  }
}

TEST_CASE("sym_eig is bit-deterministic") {
  Rng rng(5);
  const Mat a = oracle::random_symmetric(rng, 7);
  const EigenResult first = sym_eig(a);
  const EigenResult second = sym_eig(a);
  REQUIRE(first.values.size() == second.values.size());
  CHECK(std::memcmp(first.values.data(), second.values.data(),
                    first.values.size() * sizeof(double)) == 0);
  CHECK(std::memcmp(first.vectors.data(), second.vectors.data(),
                    first.vectors.size() * sizeof(double)) == 0);
}

TEST_CASE("sym_eig rejects asymmetric and non-square input") {
  CHECK_THROWS_AS(sym_eig(Mat::from_rows({{1, 2, 3}, {4, 5, 6}})), ContractError);
  CHECK_THROWS_AS(sym_eig(Mat::from_rows({{1, 2}, {3, 4}})), ContractError);
}

TEST_CASE("pinv_gram identity and analytic diagonal") {
  const PinvResult id = pinv_gram(Mat::identity(3), 1e-12);
  CHECK(id.rank == 3);
  CHECK(max_abs_diff(id.value, Mat::identity(3)) <= 1e-12);

  const PinvResult diag = pinv_gram(Mat::from_rows({{2, 0}, {0, 0}}), 1e-12);
  CHECK(diag.rank == 1);
  CHECK(diag.value(0, 0) == doctest::Approx(0.5));
  CHECK(diag.value(1, 1) == doctest::Approx(0.0));
}

TEST_CASE("pinv_gram of all-zero input flags rank 0") {
  const PinvResult zero = pinv_gram(Mat(4, 4), 1e-10);
  CHECK(zero.rank == 0);
  CHECK(max_abs(zero.value) == 0.0);
}

TEST_CASE("pinv_gram projector identity on a rank-deficient Gram") {
  Rng rng(3);
  // X = W Z with latent rank 2, D_x = 15
  const Mat w = oracle::random_matrix(rng, 15, 2);
  const Mat z = oracle::random_matrix(rng, 2, 12);
  const Mat x = matmul(w, z);
  const Mat gram = matmul_nt(x, x);
  const PinvResult pinv = pinv_gram(gram, 1e-12);
  CHECK(pinv.rank == 2);

  // X (X^T G^+ X) == X
  const Mat recon = matmul(matmul(gram, pinv.value), x);
  CHECK(max_abs_diff(recon, x) <= 1e-8 * std::max(1.0, max_abs(x)));

  // G G^+ G == G
  const Mat ggg = matmul(matmul(gram, pinv.value), gram);
  CHECK(std::sqrt(frob_dist_sq(ggg, gram)) <= 1e-8 * frob_norm(gram));
}

TEST_CASE("pinv_gram is involution-compatible on PSD input") {
  Rng rng(17);
  const Mat b = oracle::random_matrix(rng, 6, 6);
  const Mat g = matmul_nt(b, b);
  const Mat twice = pinv_gram(pinv_gram(g, 1e-10).value, 1e-10).value;
  CHECK(std::sqrt(frob_dist_sq(twice, g)) <= 1e-6 * frob_norm(g));
}

TEST_CASE("pinv_gram validates inputs") {
  CHECK_THROWS_AS(pinv_gram(Mat::from_rows({{1, 2}, {3, 4}}), 1e-10), ContractError);
  CHECK_THROWS_AS(pinv_gram(Mat::identity(2), 0.0), ContractError);
  CHECK_THROWS_AS(pinv_gram(Mat::identity(2), 1.5), ContractError);
}

TEST_CASE("rowspace_projector trivial cases") {
  const ProjectorResult full = rowspace_projector(Mat::identity(2), 1e-10);
  CHECK(full.rank == 2);
  CHECK(max_abs_diff(full.value, Mat::identity(2)) <= 1e-10);

  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const ProjectorResult rank1 =
      rowspace_projector(Mat::from_rows({{inv_sqrt2, inv_sqrt2}}), 1e-10);
  CHECK(rank1.rank == 1);
  CHECK(rank1.value(0, 0) == doctest::Approx(0.5));
  CHECK(rank1.value(0, 1) == doctest::Approx(0.5));
  CHECK(rank1.value(1, 1) == doctest::Approx(0.5));

  const ProjectorResult zero = rowspace_projector(Mat(3, 4), 1e-10);
  CHECK(zero.rank == 0);
  CHECK(max_abs(zero.value) == 0.0);
  CHECK(zero.value.rows() == 4);
}

TEST_CASE("rowspace_projector is idempotent with {0,1} spectrum") {
  Rng rng(29);
  const Mat x = oracle::random_matrix(rng, 3, 8);
  const ProjectorResult proj = rowspace_projector(x, 1e-10);
  CHECK(std::sqrt(frob_dist_sq(matmul(proj.value, proj.value), proj.value)) <= 1e-8);
  for (double ev : sym_eig(proj.value).values) {
    CHECK(std::min(std::fabs(ev), std::fabs(ev - 1.0)) <= 1e-6);
  }
}

TEST_CASE("rowspace_projector invariant under invertible row mixing") {
  Rng rng(31);
  const std::size_t n = 9;
  const Mat x = oracle::random_matrix(rng, 4, n);
  // well-conditioned invertible A = R + 4I
  Mat a = oracle::random_matrix(rng, 4, 4);
  for (std::size_t i = 0; i < 4; ++i) a(i, i) += 4.0;
  const Mat lhs = rowspace_projector(matmul(a, x), 1e-10).value;
  const Mat rhs = rowspace_projector(x, 1e-10).value;
  CHECK(std::sqrt(frob_dist_sq(lhs, rhs)) <= 1e-6 * static_cast<double>(n));
}
