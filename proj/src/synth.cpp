#include "acca/synth.hpp"

#include <string>

#include "acca/errors.hpp"
#include "acca/rng.hpp"

namespace acca {

void GenConfig::validate() const {
  if (n < 2) throw ParamError("GenConfig: need N >= 2");
  if (dbar == 0) throw ParamError("GenConfig: latent dimension must be positive");
  if (dbar > dx || dbar > dy) {
    throw ParamError("GenConfig: dbar = " + std::to_string(dbar) +
                     " must not exceed min(dx, dy) = " +
                     std::to_string(std::min(dx, dy)));
  }
  if (noise_sigma < 0.0) throw ParamError("GenConfig: noise level must be >= 0");
}

namespace {

Mat normal_matrix(Rng& rng, std::size_t rows, std::size_t cols) {
  Mat m(rows, cols);
  for (std::size_t k = 0; k < m.size(); ++k) m.data()[k] = rng.normal();
  return m;
}

SyntheticInstance build(const GenConfig& config, bool planted_identity) {
  config.validate();
  Rng rng(config.seed);

  SyntheticInstance inst;
  inst.seed = config.seed;
  inst.z = normal_matrix(rng, config.dbar, config.n);
  inst.w = normal_matrix(rng, config.dx, config.dbar);
  inst.q = normal_matrix(rng, config.dy, config.dbar);

  Mat x = matmul(inst.w, inst.z);
  const Mat y_aligned = matmul(inst.q, inst.z);

  // sigma[j] is the aligned sample stored in shuffled column j of Y, so the
  // restoring permutation has row j hot at column sigma[j]: Y * P_true = QZ.
  std::vector<std::size_t> sigma(config.n);
  if (planted_identity) {
    for (std::size_t j = 0; j < config.n; ++j) sigma[j] = j;
  } else {
    sigma = rng.permutation(config.n);
  }
  Mat y(config.dy, config.n);
  inst.p_true = Mat(config.n, config.n);
  for (std::size_t j = 0; j < config.n; ++j) {
    for (std::size_t i = 0; i < config.dy; ++i) y(i, j) = y_aligned(i, sigma[j]);
    inst.p_true(j, sigma[j]) = 1.0;
  }

  if (config.noise_sigma > 0.0) {
    for (std::size_t k = 0; k < x.size(); ++k) {
      x.data()[k] += config.noise_sigma * rng.normal();
    }
    for (std::size_t k = 0; k < y.size(); ++k) {
      y.data()[k] += config.noise_sigma * rng.normal();
    }
  }

  inst.data = make_centered_pair(std::move(x), std::move(y));
  return inst;
}

}  // namespace

SyntheticInstance generate(const GenConfig& config) { return build(config, false); }

SyntheticInstance plant_identity(const GenConfig& config) {
  return build(config, true);
}

}  // namespace acca
