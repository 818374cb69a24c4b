#include "acca/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <thread>

#include "acca/errors.hpp"

namespace acca {
namespace {

void require_permutation(const Mat& p, const char* op) {
  if (p.rows() != p.cols()) {
    throw ContractError(std::string(op) + ": permutation must be square");
  }
  const std::size_t n = p.rows();
  std::vector<int> col_hits(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    int row_hits = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const double v = p(i, j);
      if (std::fabs(v - 1.0) <= 1e-12) {
        ++row_hits;
        ++col_hits[j];
      } else if (std::fabs(v) > 1e-12) {
        throw ContractError(std::string(op) + ": entry not in {0, 1}");
      }
    }
    if (row_hits != 1) {
      throw ContractError(std::string(op) + ": row without exactly one 1");
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (col_hits[j] != 1) {
      throw ContractError(std::string(op) + ": column without exactly one 1");
    }
  }
}

double entropy_of_row(const double* p, std::size_t n) {
  double h = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (p[i] > 0.0) h -= p[i] * std::log(p[i]);
  }
  return h;
}

struct ReplicateOutcome {
  std::vector<double> accuracies;
  std::vector<double> loss_trace;
  double row_entropy = 0.0;
  int iterations = 0;
  Mat alignment;
  bool aborted = false;
};

}  // namespace

double topk_accuracy(const Mat& p, const Mat& p_true, std::size_t k) {
  require_permutation(p_true, "topk_accuracy");
  if (!p.same_shape(p_true)) {
    throw ContractError("topk_accuracy: estimate and truth shapes differ");
  }
  const std::size_t n = p.rows();
  if (k < 1 || k > n) throw ParamError("topk_accuracy: k must lie in [1, N]");

  std::size_t hits = 0;
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t truth = 0;
    while (p_true(i, truth) < 0.5) ++truth;

    std::iota(idx.begin(), idx.end(), 0);
    // value descending, ties by lowest column
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t l, std::size_t r) {
      return p(i, l) > p(i, r);
    });
    for (std::size_t t = 0; t < k; ++t) {
      if (idx[t] == truth) {
        ++hits;
        break;
      }
    }
  }
  return static_cast<double>(hits) / static_cast<double>(n);
}

double baseline_accuracy(std::size_t n, std::size_t k) {
  if (k < 1 || k > n) throw ParamError("baseline_accuracy: k must lie in [1, N]");
  return static_cast<double>(k) / static_cast<double>(n);
}

MonteCarloResult monte_carlo(const HyperParams& hp, const GenConfig& config,
                             std::size_t replicates,
                             const std::vector<std::size_t>& k_values,
                             unsigned threads) {
  if (replicates < 1) throw ParamError("monte_carlo: need at least one replicate");
  for (std::size_t k : k_values) {
    if (k < 1 || k > config.n) {
      throw ParamError("monte_carlo: k = " + std::to_string(k) +
                       " outside [1, N]");
    }
  }
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());

  std::vector<ReplicateOutcome> outcomes(replicates);
  parallel_for_index(replicates, threads, [&](std::size_t r) {
    ReplicateOutcome& out = outcomes[r];
    try {
      GenConfig cfg = config;
      cfg.seed = config.seed + r;
      const SyntheticInstance inst = generate(cfg);
      const AlignmentMatrix init = initialize_alignment(
          inst.data, hp.gamma1, hp.gamma2, hp.entropy_bound, hp.rank_rtol,
          InitOptions{.raw_views = false, .settings = hp.init_step});
      const FitResult fit = fit_acca(inst.data, hp, init);

      out.loss_trace = fit.loss_trace;
      out.iterations = fit.iterations_run;
      out.alignment = fit.alignment.p;
      out.row_entropy = 0.0;
      for (std::size_t i = 0; i < cfg.n; ++i) {
        out.row_entropy += entropy_of_row(fit.alignment.p.row(i), cfg.n);
      }
      out.row_entropy /= static_cast<double>(cfg.n);
      out.accuracies.reserve(k_values.size());
      for (std::size_t k : k_values) {
        out.accuracies.push_back(topk_accuracy(fit.alignment.p, inst.p_true, k));
      }
    } catch (const NumericError&) {
      out.aborted = true;
    }
  });

  MonteCarloResult result;
  result.topk.k_values = k_values;
  result.topk.baseline.reserve(k_values.size());
  for (std::size_t k : k_values) {
    result.topk.baseline.push_back(baseline_accuracy(config.n, k));
  }

  std::size_t longest = 0;
  std::size_t survived = 0;
  for (const auto& out : outcomes) {
    if (out.aborted) {
      ++result.aborted;
      continue;
    }
    ++survived;
    longest = std::max(longest, out.loss_trace.size());
    result.iterations_run.push_back(out.iterations);
    if (result.first_alignment.empty()) result.first_alignment = out.alignment;
  }
  result.topk.replicates = survived;
  if (survived == 0) return result;

  const double inv = 1.0 / static_cast<double>(survived);
  for (std::size_t ki = 0; ki < k_values.size(); ++ki) {
    double mean = 0.0, sq = 0.0;
    for (const auto& out : outcomes) {
      if (out.aborted) continue;
      mean += out.accuracies[ki];
      sq += out.accuracies[ki] * out.accuracies[ki];
    }
    mean *= inv;
    result.topk.accuracy_mean.push_back(mean);
    result.topk.accuracy_std.push_back(std::sqrt(std::max(0.0, sq * inv - mean * mean)));
  }

  result.loss.mean.assign(longest, 0.0);
  result.loss.std_dev.assign(longest, 0.0);
  for (std::size_t t = 0; t < longest; ++t) {
    double mean = 0.0, sq = 0.0;
    for (const auto& out : outcomes) {
      if (out.aborted) continue;
      const double v = t < out.loss_trace.size() ? out.loss_trace[t]
                                                 : out.loss_trace.back();
      mean += v;
      sq += v * v;
    }
    mean *= inv;
    result.loss.mean[t] = mean;
    result.loss.std_dev[t] = std::sqrt(std::max(0.0, sq * inv - mean * mean));
  }
  for (const auto& out : outcomes) {
    if (out.aborted) continue;
    result.mean_final_loss += out.loss_trace.back() * inv;
    result.mean_row_entropy += out.row_entropy * inv;
  }
  return result;
}

}  // namespace acca
