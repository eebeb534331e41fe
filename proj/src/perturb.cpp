#include "opca/perturb.hpp"

#include <cmath>
#include <stdexcept>

#include "opca/eigen_solve.hpp"

namespace opca {

GoeSampler::GoeSampler(int dim, double sigma2, std::uint64_t seed)
    : dim_(dim), sigma2_(sigma2), rng_(seed) {
  if (dim < 1) throw std::invalid_argument("GoeSampler: dim must be >= 1");
  if (sigma2 < 0.0) throw std::invalid_argument("GoeSampler: sigma2 < 0");
}

SymmetricMatrix GoeSampler::sample() {
  SymmetricMatrix n(dim_);
  if (sigma2_ == 0.0) return n;
  std::normal_distribution<double> gauss(0.0, std::sqrt(sigma2_));
  // Row-major draw of G; (G + G^T)/2 written to both triangles.
  Eigen::MatrixXd g(dim_, dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) g(i, j) = gauss(rng_);
  for (int i = 0; i < dim_; ++i)
    for (int j = i; j < dim_; ++j) n.set(i, j, 0.5 * (g(i, j) + g(j, i)));
  return n;
}

NoiseSchedule::NoiseSchedule(NoiseMode mode, GoeSampler sampler)
    : mode_(mode),
      sampler_(std::move(sampler)),
      base_(sampler_.dim()),
      running_(sampler_.dim()) {}

SymmetricMatrix NoiseSchedule::noise_at(int t) {
  if (t < 1) throw std::invalid_argument("noise_at: t must be >= 1");
  if (mode_ == NoiseMode::FixedScaled) {
    if (!have_base_) {
      base_ = sampler_.sample();
      have_base_ = true;
    }
    SymmetricMatrix zero(base_.dim());
    return add_scaled(zero, std::sqrt(static_cast<double>(t)), base_);
  }
  if (t != last_t_ + 1)
    throw std::logic_error("noise_at: incremental mode requires t = 1,2,3,...");
  running_ = add_scaled(running_, 1.0, sampler_.sample());
  last_t_ = t;
  return running_;
}

std::vector<int> sample_skip_mask(std::mt19937_64& rng, int T) {
  if (T < 1) throw std::invalid_argument("sample_skip_mask: T must be >= 1");
  std::bernoulli_distribution coin(0.5);
  std::vector<int> mask(T);
  for (int t = 0; t < T; ++t) mask[t] = coin(rng) ? 1 : 0;
  return mask;
}

double estimate_max_eigenvalue(int dim, double sigma2, int samples,
                               std::uint64_t seed) {
  if (samples < 1)
    throw std::invalid_argument("estimate_max_eigenvalue: samples must be >= 1");
  GoeSampler sampler(dim, sigma2, seed);
  double sum = 0.0;
  for (int s = 0; s < samples; ++s) {
    const FullDecomposition d = full_decompose(sampler.sample());
    sum += d.eigenvalues(0);
  }
  return sum / samples;
}

}  // namespace opca
