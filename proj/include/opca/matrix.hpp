#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <utility>

namespace opca {

// Numeric slack used by invariant checks. The math is exact; floating point
// is not, so every check carries an explicit tolerance.
namespace tol {
inline constexpr double unit_norm = 1e-12;
inline constexpr double psd = 1e-9;
inline constexpr double orthonormal = 1e-10;
inline constexpr double projector = 1e-9;
inline constexpr double gain_bound = 1e-9;
}  // namespace tol

/// Dense n x n real symmetric matrix. The full square is stored; all
/// mutation paths write both triangles so entries(i,j) == entries(j,i)
/// holds bit-exactly.
class SymmetricMatrix {
 public:
  explicit SymmetricMatrix(int dim)
      : m_(Eigen::MatrixXd::Zero(check_dim(dim), dim)) {}

  static SymmetricMatrix identity(int dim) {
    SymmetricMatrix a(dim);
    a.m_ = Eigen::MatrixXd::Identity(dim, dim);
    return a;
  }

  /// Wraps a dense matrix, enforcing symmetry. Entries further apart than
  /// sym_tol are rejected; otherwise the average of the two triangles is
  /// stored in both.
  static SymmetricMatrix from_dense(const Eigen::MatrixXd& m,
                                    double sym_tol = 1e-9);

  int dim() const { return static_cast<int>(m_.rows()); }

  double operator()(int i, int j) const { return m_(i, j); }

  /// Writes both (i,j) and (j,i).
  void set(int i, int j, double v) {
    m_(i, j) = v;
    m_(j, i) = v;
  }

  const Eigen::MatrixXd& dense() const { return m_; }

  double trace() const { return m_.trace(); }

  bool is_symmetric_exact() const {
    for (int i = 0; i < dim(); ++i)
      for (int j = i + 1; j < dim(); ++j)
        if (m_(i, j) != m_(j, i)) return false;
    return true;
  }

  /// True when the matrix equals entries(0,0) * I exactly (includes zero).
  bool is_scalar_multiple_of_identity() const {
    const double d0 = dim() > 0 ? m_(0, 0) : 0.0;
    for (int i = 0; i < dim(); ++i)
      for (int j = 0; j < dim(); ++j) {
        if (i == j ? (m_(i, i) != d0) : (m_(i, j) != 0.0)) return false;
      }
    return true;
  }

 private:
  static int check_dim(int dim) {
    if (dim < 1) throw std::invalid_argument("SymmetricMatrix: dim must be >= 1");
    return dim;
  }
  Eigen::MatrixXd m_;
};

/// One trial's data: either a unit vector x (instance matrix x x^T, never
/// materialized) or an explicit PSD matrix with eigenvalues in [0,1].
class Instance {
 public:
  enum class Kind { Sparse, Dense };

  static Instance sparse(Eigen::VectorXd x, double norm_tol = tol::unit_norm);
  static Instance dense(SymmetricMatrix x, double psd_tol = tol::psd);

  Kind kind() const { return kind_; }
  int dim() const { return kind_ == Kind::Sparse ? static_cast<int>(vec_.size()) : mat_.dim(); }

  const Eigen::VectorXd& vec() const {
    if (kind_ != Kind::Sparse) throw std::logic_error("Instance: not sparse");
    return vec_;
  }
  const SymmetricMatrix& mat() const {
    if (kind_ != Kind::Dense) throw std::logic_error("Instance: not dense");
    return mat_;
  }

  double trace() const { return kind_ == Kind::Sparse ? 1.0 : mat_.trace(); }

  /// Materializes the instance matrix (x x^T for sparse).
  SymmetricMatrix to_matrix() const;

 private:
  Instance(Kind kind, Eigen::VectorXd v, SymmetricMatrix m)
      : kind_(kind), vec_(std::move(v)), mat_(std::move(m)) {}
  Kind kind_;
  Eigen::VectorXd vec_;
  SymmetricMatrix mat_;
};

/// n x k orthonormal matrix U representing the rank-k projector P = U U^T.
class ProjectionBasis {
 public:
  explicit ProjectionBasis(Eigen::MatrixXd columns,
                           double ortho_tol = tol::orthonormal);

  int dim() const { return static_cast<int>(u_.rows()); }
  int rank() const { return static_cast<int>(u_.cols()); }
  const Eigen::MatrixXd& columns() const { return u_; }

  SymmetricMatrix projector() const;

 private:
  Eigen::MatrixXd u_;
};

// -- operations ------------------------------------------------------------

/// tr(AB) = sum_ij A_ij B_ij for symmetric A, B.
double trace_inner_product(const SymmetricMatrix& a, const SymmetricMatrix& b);

/// Gain tr(U U^T X). Sparse instances use ||U^T x||^2 without materializing
/// the projector.
double gain(const ProjectionBasis& basis, const Instance& inst);

/// A + c * B.
SymmetricMatrix add_scaled(const SymmetricMatrix& a, double c,
                           const SymmetricMatrix& b);

/// A + x x^T for unit x, in O(n^2).
SymmetricMatrix rank_one_update(const SymmetricMatrix& a,
                                const Eigen::VectorXd& x,
                                double norm_tol = tol::unit_norm);

}  // namespace opca
