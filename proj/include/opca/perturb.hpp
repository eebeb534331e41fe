#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "opca/matrix.hpp"

namespace opca {

/// Draws N = (G + G^T)/2 with G_ij i.i.d. Normal(0, sigma2). Off-diagonal
/// entries of N then have variance sigma2/2, diagonal entries sigma2.
/// sigma2 = 0 is permitted and yields the zero matrix (noise-free limit).
class GoeSampler {
 public:
  GoeSampler(int dim, double sigma2, std::uint64_t seed);

  SymmetricMatrix sample();

  int dim() const { return dim_; }
  double sigma2() const { return sigma2_; }

 private:
  int dim_;
  double sigma2_;
  std::mt19937_64 rng_;
};

enum class NoiseMode { FixedScaled, Incremental };

/// The per-trial noise matrix in its two equivalent forms: one cached draw
/// scaled by sqrt(t), or a running sum of t independent draws. Marginal
/// per-trial laws coincide; sample paths do not.
class NoiseSchedule {
 public:
  NoiseSchedule(NoiseMode mode, GoeSampler sampler);

  /// FixedScaled: any t >= 1, in any order. Incremental: t must advance as
  /// 1, 2, 3, ... or a usage error is thrown.
  SymmetricMatrix noise_at(int t);

  NoiseMode mode() const { return mode_; }
  double sigma2() const { return sampler_.sigma2(); }

 private:
  NoiseMode mode_;
  GoeSampler sampler_;
  bool have_base_ = false;
  SymmetricMatrix base_;     // FixedScaled: the single draw N
  SymmetricMatrix running_;  // Incremental: sum of draws so far
  int last_t_ = 0;
};

/// T fair coin flips, deterministic under seed.
std::vector<int> sample_skip_mask(std::mt19937_64& rng, int T);

/// Monte Carlo mean of lambda_max over fresh GOE draws. Test/verification
/// helper, not on the per-trial path.
double estimate_max_eigenvalue(int dim, double sigma2, int samples,
                               std::uint64_t seed);

}  // namespace opca
