#pragma once

#include <cstdint>

#include "acca/cca.hpp"
#include "acca/matrix.hpp"

namespace acca {

struct GenConfig {
  std::size_t n = 20;
  std::size_t dbar = 2;  // latent dimension
  std::size_t dx = 15;
  std::size_t dy = 10;
  std::uint64_t seed = 0;
  // Optional additive Gaussian noise on both views (0 reproduces the exact
  // shared-latent construction).
  double noise_sigma = 0.0;

  void validate() const;
};

// A draw of the two-view benchmark: shared latent samples, two random linear
// views, and a planted column correspondence.
//
// P_true is stored as the restoring permutation, the matrix the solver is
// asked to recover: Y_uncentered * P_true equals the aligned view Q*Z, so a
// perfect estimate satisfies P == P_true and row-wise top-k scoring against
// P_true is meaningful.
struct SyntheticInstance {
  Mat z;       // dbar x N
  Mat w;       // dx x dbar
  Mat q;       // dy x dbar
  Mat p_true;  // N x N binary permutation
  DatasetPair data;  // centered views
  std::uint64_t seed = 0;
};

SyntheticInstance generate(const GenConfig& config);

// Same construction with P_true = I (aligned views); regression fixture for
// classical CCA.
SyntheticInstance plant_identity(const GenConfig& config);

}  // namespace acca
