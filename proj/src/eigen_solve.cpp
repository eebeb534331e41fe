#include "opca/eigen_solve.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace opca {

double max_row_abs_sum(const SymmetricMatrix& a) {
  return a.dense().cwiseAbs().rowwise().sum().maxCoeff();
}

FullDecomposition full_decompose(const SymmetricMatrix& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a.dense());
  if (es.info() != Eigen::Success)
    throw std::runtime_error("full_decompose: solver did not converge");
  const int n = a.dim();
  FullDecomposition d;
  d.eigenvalues.resize(n);
  d.eigenvectors.resize(n, n);
  // Eigen sorts ascending; flip to descending.
  for (int i = 0; i < n; ++i) {
    d.eigenvalues(i) = es.eigenvalues()(n - 1 - i);
    d.eigenvectors.col(i) = es.eigenvectors().col(n - 1 - i);
  }
  return d;
}

double top_k_value(const SymmetricMatrix& a, int k) {
  if (k < 1 || k > a.dim())
    throw std::invalid_argument("top_k_value: k out of range");
  const FullDecomposition d = full_decompose(a);
  return d.eigenvalues.head(k).sum();
}

namespace {

Eigen::MatrixXd random_orthonormal_block(int n, int q, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd g(n, q);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < q; ++j) g(i, j) = gauss(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  return qr.householderQ() * Eigen::MatrixXd::Identity(n, q);
}

}  // namespace

TopKResult top_k(const SymmetricMatrix& a, int k, const EigenConfig& cfg) {
  const int n = a.dim();
  if (k < 1 || k > n) throw std::invalid_argument("top_k: k out of range");
  if (cfg.max_iterations < 1)
    throw std::invalid_argument("top_k: max_iterations must be >= 1");

  // Center the spectrum, then shift to PSD. Centering keeps the Gershgorin
  // shift (and with it the convergence ratio) on the scale of the spectral
  // spread rather than the mean eigenvalue.
  const double center = a.trace() / n;
  Eigen::MatrixXd m = a.dense();
  m.diagonal().array() -= center;
  const double shift = m.cwiseAbs().rowwise().sum().maxCoeff();
  m.diagonal().array() += shift;
  // m is now A - center*I + shift*I, PSD, with the same eigenvectors as A.

  const int q = std::min(n, k + 4);  // oversampled block
  Eigen::MatrixXd block = random_orthonormal_block(n, q, cfg.seed);

  // Zero (or exactly scalar) matrix: every basis maximizes; the random
  // start block already is one.
  if (shift == 0.0) {
    ProjectionBasis basis(block.leftCols(k));
    const double val =
        (a.dense() * basis.columns()).cwiseProduct(basis.columns()).sum();
    return TopKResult{std::move(basis), val, true, 0};
  }

  Eigen::MatrixXd ritz_vectors;  // q x q, descending Ritz order
  Eigen::VectorXd ritz_values;
  double prev = std::numeric_limits<double>::quiet_NaN();
  double prev_change = std::numeric_limits<double>::quiet_NaN();
  int streak = 0;
  bool converged = false;
  int it = 0;

  for (it = 1; it <= cfg.max_iterations; ++it) {
    Eigen::MatrixXd z = m * block;
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(z);
    block = qr.householderQ() * Eigen::MatrixXd::Identity(n, q);

    // Rayleigh-Ritz on the current block.
    const Eigen::MatrixXd ab = a.dense() * block;
    const Eigen::MatrixXd s = block.transpose() * ab;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 *
                                                      (s + s.transpose()));
    ritz_values.resize(q);
    ritz_vectors.resize(q, q);
    for (int i = 0; i < q; ++i) {
      ritz_values(i) = es.eigenvalues()(q - 1 - i);
      ritz_vectors.col(i) = es.eigenvectors().col(q - 1 - i);
    }
    const double val = ritz_values.head(k).sum();
    if (it > 1) {
      const double change = std::abs(val - prev);
      // The per-iteration change decays geometrically; extrapolate the
      // remaining error instead of trusting the last step alone, which
      // stops early when the ratio is close to 1.
      double remaining = change;
      if (std::isfinite(prev_change) && change < prev_change) {
        const double rho = change / prev_change;
        remaining = change * rho / (1.0 - rho);
      }
      if (remaining <= cfg.convergence_tol * (1.0 + std::abs(val))) {
        if (++streak >= 2) {
          converged = true;
          prev = val;
          break;
        }
      } else {
        streak = 0;
      }
      prev_change = change;
    }
    prev = val;
  }
  it = std::min(it, cfg.max_iterations);

  Eigen::MatrixXd u = block * ritz_vectors.leftCols(k);
  // The product of two orthonormal maps; re-orthonormalize only to absorb
  // roundoff before the basis invariant check.
  Eigen::HouseholderQR<Eigen::MatrixXd> uqr(u);
  u = uqr.householderQ() * Eigen::MatrixXd::Identity(n, k);
  ProjectionBasis basis(std::move(u));
  const double rayleigh =
      (a.dense() * basis.columns()).cwiseProduct(basis.columns()).sum();
  return TopKResult{std::move(basis), rayleigh, converged, it};
}

}  // namespace opca
