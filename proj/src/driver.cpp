#include "acca/driver.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "acca/errors.hpp"

namespace acca {

void HyperParams::validate(std::size_t n) const {
  if (gamma1 < 0.0 || gamma2 < 0.0) {
    throw ParamError("hyperparameters gamma1 and gamma2 must be nonnegative");
  }
  const double ln_n = std::log(static_cast<double>(n));
  if (!(entropy_bound > 0.0) || entropy_bound > ln_n + 1e-12) {
    throw ParamError("lambda must lie in (0, ln N] = (0, " + std::to_string(ln_n) +
                     "]");
  }
  if (d > n) {
    throw ParamError("d = " + std::to_string(d) + " exceeds N = " + std::to_string(n));
  }
  if (d == 0) throw ParamError("d must be positive");
  if (outer_max_iters < 1) throw ParamError("outer iteration cap must be positive");
  if (!(rank_rtol > 0.0 && rank_rtol < 1.0)) {
    throw ParamError("rank_rtol must lie in (0, 1)");
  }
}

const char* to_string(StopReason reason) {
  switch (reason) {
    case StopReason::threshold: return "threshold";
    case StopReason::max_iters: return "max_iters";
    case StopReason::stalled: return "stalled";
  }
  return "unknown";
}

double acca_loss(const CcaModel& model, const AlignmentMatrix& alignment,
                 const DatasetPair& data, double gamma1, double gamma2) {
  const Mat yp = matmul(data.y, alignment.p);
  double loss = frob_dist_sq(matmul(model.u, data.x), model.s) +
                frob_dist_sq(matmul(model.v, yp), model.s);
  const Mat eye = Mat::identity(alignment.p.rows());
  loss += gamma1 * frob_dist_sq(matmul_nt(alignment.p, alignment.p), eye);
  loss += gamma2 * frob_dist_sq(matmul_tn(alignment.p, alignment.p), eye);
  return loss;
}

FitResult fit_acca(const DatasetPair& data, const HyperParams& hp,
                   const AlignmentMatrix& p_init, const IterationObserver& observer) {
  data.validate();
  if (!data.x_centered || !data.y_centered) {
    throw ContractError("fit_acca: data must be centered");
  }
  hp.validate(data.samples());
  p_init.require_feasible("fit_acca");
  if (p_init.p.rows() != data.samples()) {
    throw ContractError("fit_acca: P_init size does not match sample count");
  }

  FitResult result;
  result.alignment = p_init;
  result.stop_reason = StopReason::max_iters;

  int stall_streak = 0;
  double prev_loss = 0.0;

  for (int iter = 1; iter <= hp.outer_max_iters; ++iter) {
    const Mat yp = matmul(data.y, result.alignment.p);
    result.model.d = hp.d;
    result.model.s = update_s(data.x, yp, hp.d, hp.rank_rtol);
    result.model.u = update_u(data.x, result.model.s, hp.rank_rtol);
    result.model.v = update_v(data.y, result.alignment.p, result.model.s, hp.rank_rtol);

    PStepProblem prob;
    prob.a = matmul(result.model.v, data.y);
    prob.s = result.model.s;
    prob.gamma1 = hp.gamma1;
    prob.gamma2 = hp.gamma2;
    prob.entropy_bound = hp.entropy_bound;
    prob.settings = hp.p_step;
    result.alignment = solve_p_step(result.alignment, prob);

    const double loss =
        acca_loss(result.model, result.alignment, data, hp.gamma1, hp.gamma2);
    if (!std::isfinite(loss)) {
      throw NumericError("fit_acca: non-finite loss at iteration " +
                         std::to_string(iter));
    }
    result.loss_trace.push_back(loss);
    result.iterations_run = iter;
    if (observer) observer(iter, result.model, result.alignment);

    if (loss <= hp.loss_threshold) {
      result.stop_reason = StopReason::threshold;
      break;
    }
    if (iter > 1) {
      const double rel = (prev_loss - loss) / std::max(std::fabs(prev_loss), 1e-12);
      stall_streak = rel < hp.loss_rel_tol ? stall_streak + 1 : 0;
      if (stall_streak >= 3) {
        result.stop_reason = StopReason::stalled;
        break;
      }
    }
    prev_loss = loss;
  }
  return result;
}

void parallel_for_index(std::size_t count, unsigned threads,
                        const std::function<void(std::size_t)>& fn) {
  if (count == 0) return;
  const unsigned workers =
      std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count || failed.load()) return;
      try {
        fn(i);
      } catch (...) {
        std::scoped_lock lock(error_mutex);
        if (!error) error = std::current_exception();
        failed.store(true);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace acca
