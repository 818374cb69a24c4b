#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "acca/errors.hpp"
#include "acca/metrics.hpp"
#include "acca/rng.hpp"
#include "oracles.hpp"

using namespace acca;

TEST_CASE("topk_accuracy exact and saturated cases") {
  const Mat truth = oracle::permutation_matrix({2, 0, 3, 1});
  CHECK(topk_accuracy(truth, truth, 1) == doctest::Approx(1.0));

  Rng rng(3);
  Mat relaxed(4, 4);
  for (std::size_t k = 0; k < relaxed.size(); ++k) relaxed.data()[k] = rng.uniform();
  CHECK(topk_accuracy(relaxed, truth, 4) == doctest::Approx(1.0));
}

TEST_CASE("topk_accuracy hand-evaluated 3x3 case") {
  const Mat p = Mat::from_rows({{.5, .4, .1}, {.1, .2, .7}, {.3, .4, .3}});
  CHECK(topk_accuracy(p, Mat::identity(3), 1) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("topk_accuracy is monotone in k") {
  Rng rng(5);
  Mat p(6, 6);
  for (std::size_t k = 0; k < p.size(); ++k) p.data()[k] = rng.uniform();
  const Mat truth = oracle::permutation_matrix(rng.permutation(6));
  double prev = 0.0;
  for (std::size_t k = 1; k <= 6; ++k) {
    const double acc = topk_accuracy(p, truth, k);
    CHECK(acc >= prev);
    prev = acc;
  }
}

TEST_CASE("topk_accuracy invariant under monotone rescaling") {
  Rng rng(7);
  Mat p(5, 5);
  for (std::size_t k = 0; k < p.size(); ++k) p.data()[k] = rng.uniform();
  const Mat truth = oracle::permutation_matrix(rng.permutation(5));

  Mat cubed = p;
  for (std::size_t k = 0; k < cubed.size(); ++k) {
    cubed.data()[k] = std::pow(cubed.data()[k], 3.0);
  }
  for (std::size_t k = 1; k <= 5; ++k) {
    CHECK(topk_accuracy(p, truth, k) == topk_accuracy(cubed, truth, k));
  }
}

TEST_CASE("topk_accuracy of uniform random permutations converges to k/N") {
  Rng rng(11);
  const std::size_t n = 6, draws = 10000;
  const Mat truth = oracle::permutation_matrix(rng.permutation(n));
  for (std::size_t k : {1ul, 2ul, 4ul}) {
    double mean = 0.0;
    for (std::size_t t = 0; t < draws; ++t) {
      mean += topk_accuracy(oracle::permutation_matrix(rng.permutation(n)), truth, k);
    }
    mean /= static_cast<double>(draws);
    CHECK(std::fabs(mean - baseline_accuracy(n, k)) <= 0.02);
  }
}

TEST_CASE("topk_accuracy validates its inputs") {
  const Mat truth = oracle::permutation_matrix({1, 0});
  CHECK_THROWS_AS(topk_accuracy(truth, Mat::from_rows({{0.5, 0.5}, {0.5, 0.5}}), 1),
                  ContractError);
  CHECK_THROWS_AS(topk_accuracy(truth, truth, 0), ParamError);
  CHECK_THROWS_AS(topk_accuracy(truth, truth, 3), ParamError);
}

TEST_CASE("baseline_accuracy formula") {
  CHECK(baseline_accuracy(20, 3) == doctest::Approx(0.15));
  CHECK(baseline_accuracy(20, 1) == doctest::Approx(0.05));
  CHECK(baseline_accuracy(20, 20) == doctest::Approx(1.0));
  CHECK_THROWS_AS(baseline_accuracy(20, 0), ParamError);
}

TEST_CASE("monte_carlo single replicate has zero spread") {
  HyperParams hp;
  hp.d = 3;
  hp.entropy_bound = 0.3;
  const GenConfig config{.n = 8, .dbar = 2, .dx = 6, .dy = 5, .seed = 42};
  const MonteCarloResult mc = monte_carlo(hp, config, 1, {1, 2, 3});
  CHECK(mc.topk.replicates == 1);
  CHECK(mc.aborted == 0);
  for (double s : mc.topk.accuracy_std) CHECK(s == doctest::Approx(0.0));
  for (double s : mc.loss.std_dev) CHECK(s == doctest::Approx(0.0));
  CHECK(mc.topk.baseline[0] == doctest::Approx(1.0 / 8.0));
  CHECK(mc.topk.baseline[2] == doctest::Approx(3.0 / 8.0));
  CHECK_FALSE(mc.first_alignment.empty());
}

TEST_CASE("monte_carlo aggregates padded traces deterministically") {
  HyperParams hp;
  hp.d = 3;
  hp.entropy_bound = 0.3;
  const GenConfig config{.n = 8, .dbar = 2, .dx = 6, .dy = 5, .seed = 7};
  const MonteCarloResult a = monte_carlo(hp, config, 3, {1, 2});
  const MonteCarloResult b = monte_carlo(hp, config, 3, {1, 2}, 3);
  CHECK(a.topk.replicates == 3);
  REQUIRE(a.loss.mean.size() == b.loss.mean.size());
  for (std::size_t t = 0; t < a.loss.mean.size(); ++t) {
    CHECK(a.loss.mean[t] == b.loss.mean[t]);  // thread count must not matter
  }
  CHECK(a.topk.accuracy_mean == b.topk.accuracy_mean);
  CHECK(a.mean_row_entropy == b.mean_row_entropy);

  // traces are non-increasing after padding too
  for (std::size_t t = 1; t < a.loss.mean.size(); ++t) {
    CHECK(a.loss.mean[t] <= a.loss.mean[t - 1] + 1e-6);
  }
}

TEST_CASE("monte_carlo rejects bad arguments") {
  HyperParams hp;
  const GenConfig config{.n = 8, .dbar = 2, .dx = 6, .dy = 5, .seed = 0};
  CHECK_THROWS_AS(monte_carlo(hp, config, 0, {1}), ParamError);
  CHECK_THROWS_AS(monte_carlo(hp, config, 1, {0}), ParamError);
  CHECK_THROWS_AS(monte_carlo(hp, config, 1, {9}), ParamError);
}
