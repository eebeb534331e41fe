#pragma once

#include <cstdint>

#include "opca/matrix.hpp"

namespace opca {

struct EigenConfig {
  int max_iterations = 1000;
  double convergence_tol = 1e-8;  // relative change of the Rayleigh sum
  std::uint64_t seed = 0;         // random start block
};

/// Full spectral decomposition, eigenvalues sorted descending.
struct FullDecomposition {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;  // columns match eigenvalue order

  Eigen::MatrixXd reconstruct() const {
    return eigenvectors * eigenvalues.asDiagonal() * eigenvectors.transpose();
  }
};

struct TopKResult {
  ProjectionBasis basis;
  double rayleigh = 0.0;  // tr(U^T A U) at the returned basis
  bool converged = false;
  int iterations = 0;
};

/// Gershgorin bound max_i sum_j |A_ij|; A + cI with c set to this is PSD.
double max_row_abs_sum(const SymmetricMatrix& a);

/// Dense decomposition oracle. Deterministic given A.
FullDecomposition full_decompose(const SymmetricMatrix& a);

/// Exact sum of the k largest eigenvalues, via full_decompose.
double top_k_value(const SymmetricMatrix& a, int k);

/// Iterative top-k solver: block subspace iteration with QR
/// re-orthonormalization and a Rayleigh-Ritz extraction, run on a shifted
/// copy of A so the target eigenvalues are the largest in magnitude. The
/// shift changes neither the eigenvectors nor the argmax. Non-convergence
/// within the iteration budget returns the best iterate with
/// converged = false.
TopKResult top_k(const SymmetricMatrix& a, int k, const EigenConfig& cfg);

}  // namespace opca
