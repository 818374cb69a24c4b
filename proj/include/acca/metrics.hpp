#pragma once

#include <cstddef>
#include <vector>

#include "acca/driver.hpp"
#include "acca/matrix.hpp"
#include "acca/synth.hpp"

namespace acca {

struct TopKReport {
  std::vector<std::size_t> k_values;
  std::vector<double> accuracy_mean;  // per k
  std::vector<double> accuracy_std;   // per k, population std
  std::vector<double> baseline;       // k / N
  std::size_t replicates = 0;
};

// Per-iteration loss statistics across replicates; shorter traces are
// right-padded with their final value.
struct LossStats {
  std::vector<double> mean;
  std::vector<double> std_dev;
};

struct MonteCarloResult {
  TopKReport topk;
  LossStats loss;
  double mean_final_loss = 0.0;
  double mean_row_entropy = 0.0;  // of the final P, averaged over replicates
  std::size_t aborted = 0;        // replicates excluded after numerical aborts
  std::vector<int> iterations_run;
  Mat first_alignment;  // final P of the first surviving replicate
};

// Fraction of rows of P whose k largest entries (ties to the lowest column)
// include the hot column of P_true's same row.
double topk_accuracy(const Mat& p, const Mat& p_true, std::size_t k);

double baseline_accuracy(std::size_t n, std::size_t k);

// Generate / initialize / fit / score, one replicate per seed offset.
MonteCarloResult monte_carlo(const HyperParams& hp, const GenConfig& config,
                             std::size_t replicates,
                             const std::vector<std::size_t>& k_values,
                             unsigned threads = 0);

}  // namespace acca
