#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "acca/align.hpp"
#include "acca/cca.hpp"

namespace acca {

struct HyperParams {
  std::size_t d = 7;
  double gamma1 = 1e-4;
  double gamma2 = 1e-4;
  double entropy_bound = 0.1;  // lambda
  int outer_max_iters = 100;
  double loss_threshold = 1e-8;
  double loss_rel_tol = 1e-6;
  double rank_rtol = 1e-10;
  std::uint64_t seed = 0;
  PStepSettings p_step;
  PStepSettings init_step{.grad_tol = 1e-7, .step_tol = 1e-12, .max_inner_iters = 500};

  // Needs the sample count to bound lambda by ln N.
  void validate(std::size_t n) const;
};

enum class StopReason { threshold, max_iters, stalled };

const char* to_string(StopReason reason);

struct FitResult {
  CcaModel model;
  AlignmentMatrix alignment;
  std::vector<double> loss_trace;  // full objective after each outer iteration
  int iterations_run = 0;
  StopReason stop_reason = StopReason::max_iters;
};

// Full four-term objective: ||UX-S||^2 + ||VYP-S||^2 + penalties.
double acca_loss(const CcaModel& model, const AlignmentMatrix& alignment,
                 const DatasetPair& data, double gamma1, double gamma2);

// Called after every outer iteration when installed (test/diagnostic hook).
using IterationObserver =
    std::function<void(int iteration, const CcaModel&, const AlignmentMatrix&)>;

// Alternating optimization: closed-form S, U, V updates followed by the
// projected-gradient P-step, repeated until the loss threshold, the iteration
// cap, or a stall (relative improvement below loss_rel_tol for 3 consecutive
// iterations).
FitResult fit_acca(const DatasetPair& data, const HyperParams& hp,
                   const AlignmentMatrix& p_init,
                   const IterationObserver& observer = nullptr);

// Runs fn(i) for i in [0, count) on up to `threads` workers; fn writes into
// index-addressed slots so the outcome is independent of scheduling.
void parallel_for_index(std::size_t count, unsigned threads,
                        const std::function<void(std::size_t)>& fn);

}  // namespace acca
