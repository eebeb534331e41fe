#include "opca/learners.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace opca {

void MixtureParameter::validate(double trace_tol, double eig_tol) const {
  if (std::abs(w.trace() - k) > trace_tol)
    throw std::logic_error("MixtureParameter: trace != k");
  const FullDecomposition d = full_decompose(w);
  if (d.eigenvalues(0) > 1.0 + eig_tol)
    throw std::logic_error("MixtureParameter: eigenvalue above 1");
  if (d.eigenvalues(w.dim() - 1) < -1e-9)
    throw std::logic_error("MixtureParameter: not PSD");
}

Learner::Learner(int n, int k) : n_(n), k_(k) {
  if (n < 1 || k < 1 || k > n)
    throw std::invalid_argument("Learner: need 1 <= k <= n");
}

double Learner::score(const Prediction& pred, const Instance& inst) const {
  if (pred.basis) return gain(*pred.basis, inst);
  const MixtureParameter& m = *pred.mixture;
  if (inst.kind() == Instance::Kind::Sparse)
    return inst.vec().dot(m.w.dense() * inst.vec());
  return trace_inner_product(m.w, inst.mat());
}

FplLearner::FplLearner(int n, int k, double sigma2, NoiseMode mode,
                       const EigenConfig& cfg, std::uint64_t seed)
    : Learner(n, k),
      sigma2_(sigma2),
      cfg_(cfg),
      cumulative_(n),
      tie_rng_(seed) {
  if (sigma2 > 0.0)
    schedule_.emplace(mode, GoeSampler(n, sigma2, seed ^ 0x9e3779b97f4a7c15ULL));
}

ProjectionBasis FplLearner::tie_break_basis() {
  std::vector<int> axes(n_);
  std::iota(axes.begin(), axes.end(), 0);
  std::shuffle(axes.begin(), axes.end(), tie_rng_);
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(n_, k_);
  for (int j = 0; j < k_; ++j) u(axes[j], j) = 1.0;
  return ProjectionBasis(std::move(u));
}

Prediction FplLearner::predict_from(const SymmetricMatrix& m) {
  Prediction pred;
  if (m.is_scalar_multiple_of_identity()) {
    pred.basis.emplace(tie_break_basis().columns());
    last_converged_ = true;
    return pred;
  }
  EigenConfig cfg = cfg_;
  cfg.seed = tie_rng_();
  TopKResult r = top_k(m, k_, cfg);
  last_converged_ = r.converged;
  pred.basis.emplace(std::move(r.basis).columns());
  return pred;
}

Prediction FplLearner::predict() {
  if (sigma2_ == 0.0) return predict_from(cumulative_);
  return predict_from(add_scaled(cumulative_, 1.0, schedule_->noise_at(trial_)));
}

void FplLearner::update(const Instance& inst) {
  if (inst.dim() != n_)
    throw std::invalid_argument("FplLearner::update: dimension mismatch");
  if (inst.kind() == Instance::Kind::Sparse)
    cumulative_ = rank_one_update(cumulative_, inst.vec());
  else
    cumulative_ = add_scaled(cumulative_, 1.0, inst.mat());
  ++trial_;
}

SkippingLearner::SkippingLearner(int n, int k, const EigenConfig& cfg,
                                 std::uint64_t seed)
    : Learner(n, k),
      inner_(n, k, cfg, seed),
      coin_rng_(seed ^ 0xc2b2ae3d27d4eb4fULL) {}

Prediction SkippingLearner::predict() { return inner_.predict(); }

void SkippingLearner::update(const Instance& inst) {
  std::bernoulli_distribution coin(0.5);
  update_with_coin(inst, coin(coin_rng_) ? 1 : 0);
}

void SkippingLearner::update_with_coin(const Instance& inst, int alpha) {
  if (alpha != 0 && alpha != 1)
    throw std::invalid_argument("SkippingLearner: alpha must be 0 or 1");
  if (alpha == 1)
    inner_.update(inst);
  else
    inner_.advance_trial();  // trial index moves on, the instance does not
}

MegLearner::MegLearner(int n, int k, double eta)
    : Learner(n, k), eta_(eta) {
  if (eta < 0.0) throw std::invalid_argument("MegLearner: eta must be >= 0");
  basis_ = Eigen::MatrixXd::Identity(n, n);
  evals_ = Eigen::VectorXd::Constant(n, static_cast<double>(k) / n);
}

Prediction MegLearner::predict() {
  Eigen::MatrixXd w = basis_ * evals_.asDiagonal() * basis_.transpose();
  Prediction pred;
  pred.mixture = MixtureParameter{
      SymmetricMatrix::from_dense(0.5 * (w + w.transpose()), 1e-9), k_};
  return pred;
}

Eigen::VectorXd MegLearner::cap_eigenvalues(Eigen::VectorXd d, int k) {
  const int n = static_cast<int>(d.size());
  if (k > n) throw std::invalid_argument("cap_eigenvalues: k > n");
  std::vector<bool> capped(n, false);
  int num_capped = 0;
  for (;;) {
    double uncapped_sum = 0.0;
    for (int i = 0; i < n; ++i)
      if (!capped[i]) uncapped_sum += d(i);
    const double budget = static_cast<double>(k - num_capped);
    if (uncapped_sum > 0.0) {
      const double scale = budget / uncapped_sum;
      for (int i = 0; i < n; ++i)
        if (!capped[i]) d(i) *= scale;
    }
    bool any_new = false;
    for (int i = 0; i < n; ++i) {
      if (!capped[i] && d(i) > 1.0) {
        d(i) = 1.0;
        capped[i] = true;
        ++num_capped;
        any_new = true;
      }
    }
    if (!any_new) break;
  }
  return d;
}

void MegLearner::update(const Instance& inst) {
  if (inst.dim() != n_)
    throw std::invalid_argument("MegLearner::update: dimension mismatch");
  // log W on the cached eigensystem, eigenvalues clamped away from zero.
  Eigen::VectorXd logd(n_);
  for (int i = 0; i < n_; ++i) logd(i) = std::log(std::max(evals_(i), 1e-300));
  Eigen::MatrixXd m = basis_ * logd.asDiagonal() * basis_.transpose();
  m += eta_ * inst.to_matrix().dense();
  const FullDecomposition d =
      full_decompose(SymmetricMatrix::from_dense(0.5 * (m + m.transpose()), 1e-9));
  Eigen::VectorXd expd(n_);
  for (int i = 0; i < n_; ++i) expd(i) = std::exp(d.eigenvalues(i));
  basis_ = d.eigenvectors;
  evals_ = cap_eigenvalues(std::move(expd), k_);
}

std::unique_ptr<Learner> make_learner(const std::string& id,
                                      const LearnerParams& p) {
  if (id == "fpl")
    return std::make_unique<FplLearner>(p.n, p.k, p.sigma2, p.noise_mode,
                                        p.eigen_cfg, p.seed);
  if (id == "ftl")
    return std::make_unique<FtlLearner>(p.n, p.k, p.eigen_cfg, p.seed);
  if (id == "skip")
    return std::make_unique<SkippingLearner>(p.n, p.k, p.eigen_cfg, p.seed);
  if (id == "meg") return std::make_unique<MegLearner>(p.n, p.k, p.eta);
  throw std::invalid_argument("make_learner: unknown id '" + id + "'");
}

}  // namespace opca
