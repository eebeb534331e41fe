#pragma once

#include <memory>
#include <optional>
#include <string>

#include "opca/eigen_solve.hpp"
#include "opca/matrix.hpp"
#include "opca/perturb.hpp"

namespace opca {

/// PSD matrix with trace k and eigenvalues capped at 1 (the MEG parameter).
struct MixtureParameter {
  SymmetricMatrix w;
  int k;

  /// Throws when the parameter-set invariants are violated.
  void validate(double trace_tol = 1e-8, double eig_tol = 1e-8) const;
};

/// Exactly one variant is populated: a rank-k basis (FPL/FTL/Skipping) or a
/// mixture parameter (MEG).
struct Prediction {
  std::optional<ProjectionBasis> basis;
  std::optional<MixtureParameter> mixture;
};

class Learner {
 public:
  virtual ~Learner() = default;

  virtual Prediction predict() = 0;
  virtual void update(const Instance& inst) = 0;

  /// Realized gain for basis predictions, expected gain tr(W X) for
  /// mixtures.
  double score(const Prediction& pred, const Instance& inst) const;

  virtual bool last_converged() const { return true; }

  int n() const { return n_; }
  int k() const { return k_; }

 protected:
  Learner(int n, int k);
  int n_, k_;
};

/// Follow the Perturbed Leader: predict with the top-k eigenvectors of the
/// cumulative data matrix plus scheduled GOE noise. sigma2 = 0 degenerates
/// to Follow the Leader (the noise term is skipped entirely, so FTL and
/// FPL-with-zero-noise share one code path and are pathwise identical under
/// the same seed).
class FplLearner : public Learner {
 public:
  FplLearner(int n, int k, double sigma2, NoiseMode mode,
             const EigenConfig& cfg, std::uint64_t seed);

  Prediction predict() override;
  void update(const Instance& inst) override;
  bool last_converged() const override { return last_converged_; }

  const SymmetricMatrix& cumulative() const { return cumulative_; }
  int trial() const { return trial_; }
  double sigma2() const { return sigma2_; }

 protected:
  /// Fully degenerate spectrum (exact multiple of the identity): every
  /// rank-k basis ties in the argmax. The tie-break is a seeded random
  /// choice of k coordinate axes.
  ProjectionBasis tie_break_basis();
  Prediction predict_from(const SymmetricMatrix& m);
  void advance_trial() { ++trial_; }
  friend class SkippingLearner;

  double sigma2_;
  EigenConfig cfg_;
  SymmetricMatrix cumulative_;
  int trial_ = 1;
  std::optional<NoiseSchedule> schedule_;
  std::mt19937_64 tie_rng_;
  bool last_converged_ = true;
};

/// Follow the Leader: noise-free FPL.
class FtlLearner : public FplLearner {
 public:
  FtlLearner(int n, int k, const EigenConfig& cfg, std::uint64_t seed)
      : FplLearner(n, k, 0.0, NoiseMode::FixedScaled, cfg, seed) {}
};

/// Follow the Skipping Leader: FTL on a Bernoulli(1/2)-subsampled stream.
class SkippingLearner : public Learner {
 public:
  SkippingLearner(int n, int k, const EigenConfig& cfg, std::uint64_t seed);

  Prediction predict() override;
  void update(const Instance& inst) override;
  /// Deterministic-coin variant for tests; alpha must be 0 or 1.
  void update_with_coin(const Instance& inst, int alpha);
  bool last_converged() const override { return inner_.last_converged(); }

  const SymmetricMatrix& filtered_cumulative() const {
    return inner_.cumulative();
  }

 private:
  FtlLearner inner_;  // holds the skip-filtered sum and the tie-break rng
  std::mt19937_64 coin_rng_;
};

/// Matrix Exponentiated Gradient reference baseline. Maintains W in
/// eigendecomposed form; the update is W' = exp(log W + eta X) followed by
/// the eigenvalue-capping projection onto {trace k, eigenvalues <= 1}.
/// Scored by expected gain tr(W X).
class MegLearner : public Learner {
 public:
  MegLearner(int n, int k, double eta);

  Prediction predict() override;
  void update(const Instance& inst) override;

  double eta() const { return eta_; }

  /// Capping projection on the eigenvalue vector: clamp entries that would
  /// exceed 1 and multiplicatively rescale the rest until the vector sums
  /// to k with all entries <= 1. Entries must be nonnegative.
  static Eigen::VectorXd cap_eigenvalues(Eigen::VectorXd d, int k);

 private:
  double eta_;
  Eigen::MatrixXd basis_;  // eigenvectors of W
  Eigen::VectorXd evals_;  // matching eigenvalues
};

struct LearnerParams {
  int n = 0;
  int k = 0;
  double sigma2 = 0.0;
  NoiseMode noise_mode = NoiseMode::FixedScaled;
  EigenConfig eigen_cfg;
  double eta = 0.1;
  std::uint64_t seed = 0;
};

/// id is one of "fpl", "ftl", "skip", "meg".
std::unique_ptr<Learner> make_learner(const std::string& id,
                                      const LearnerParams& p);

}  // namespace opca
