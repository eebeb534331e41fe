#include "opca/matrix.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace opca {

SymmetricMatrix SymmetricMatrix::from_dense(const Eigen::MatrixXd& m,
                                            double sym_tol) {
  if (m.rows() != m.cols())
    throw std::invalid_argument("SymmetricMatrix::from_dense: not square");
  SymmetricMatrix a(static_cast<int>(m.rows()));
  for (int i = 0; i < a.dim(); ++i) {
    a.m_(i, i) = m(i, i);
    for (int j = i + 1; j < a.dim(); ++j) {
      if (std::abs(m(i, j) - m(j, i)) > sym_tol)
        throw std::invalid_argument(
            "SymmetricMatrix::from_dense: asymmetry at (" + std::to_string(i) +
            "," + std::to_string(j) + ")");
      const double v = 0.5 * (m(i, j) + m(j, i));
      a.m_(i, j) = v;
      a.m_(j, i) = v;
    }
  }
  return a;
}

Instance Instance::sparse(Eigen::VectorXd x, double norm_tol) {
  if (x.size() < 1) throw std::invalid_argument("Instance::sparse: empty vector");
  if (std::abs(x.norm() - 1.0) > norm_tol)
    throw std::invalid_argument("Instance::sparse: vector not unit norm");
  const int n = static_cast<int>(x.size());
  return Instance(Kind::Sparse, std::move(x), SymmetricMatrix(n));
}

Instance Instance::dense(SymmetricMatrix x, double psd_tol) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(x.dense(),
                                                    Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("Instance::dense: eigenvalue check failed");
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (lo < -psd_tol || hi > 1.0 + psd_tol)
    throw std::invalid_argument(
        "Instance::dense: eigenvalues outside [0,1]: min=" + std::to_string(lo) +
        " max=" + std::to_string(hi));
  return Instance(Kind::Dense, Eigen::VectorXd(), std::move(x));
}

SymmetricMatrix Instance::to_matrix() const {
  if (kind_ == Kind::Dense) return mat_;
  return rank_one_update(SymmetricMatrix(dim()), vec_, 1e-6);
}

ProjectionBasis::ProjectionBasis(Eigen::MatrixXd columns, double ortho_tol)
    : u_(std::move(columns)) {
  const int n = static_cast<int>(u_.rows());
  const int k = static_cast<int>(u_.cols());
  if (k < 1 || k > n)
    throw std::invalid_argument("ProjectionBasis: need 1 <= rank <= dim");
  const Eigen::MatrixXd gram = u_.transpose() * u_;
  const double err =
      (gram - Eigen::MatrixXd::Identity(k, k)).cwiseAbs().maxCoeff();
  if (err > ortho_tol)
    throw std::invalid_argument(
        "ProjectionBasis: columns not orthonormal, max deviation " +
        std::to_string(err));
}

SymmetricMatrix ProjectionBasis::projector() const {
  Eigen::MatrixXd p = u_ * u_.transpose();
  return SymmetricMatrix::from_dense(0.5 * (p + p.transpose()), 1e-12);
}

double trace_inner_product(const SymmetricMatrix& a, const SymmetricMatrix& b) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("trace_inner_product: dimension mismatch");
  return a.dense().cwiseProduct(b.dense()).sum();
}

double gain(const ProjectionBasis& basis, const Instance& inst) {
  if (basis.dim() != inst.dim())
    throw std::invalid_argument("gain: dimension mismatch");
  if (inst.kind() == Instance::Kind::Sparse) {
    return (basis.columns().transpose() * inst.vec()).squaredNorm();
  }
  // tr(U^T X U) = sum_i u_i^T X u_i, O(k n^2).
  const Eigen::MatrixXd xu = inst.mat().dense() * basis.columns();
  return xu.cwiseProduct(basis.columns()).sum();
}

SymmetricMatrix add_scaled(const SymmetricMatrix& a, double c,
                           const SymmetricMatrix& b) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("add_scaled: dimension mismatch");
  SymmetricMatrix r(a.dim());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = i; j < a.dim(); ++j) r.set(i, j, a(i, j) + c * b(i, j));
  return r;
}

SymmetricMatrix rank_one_update(const SymmetricMatrix& a,
                                const Eigen::VectorXd& x, double norm_tol) {
  if (a.dim() != x.size())
    throw std::invalid_argument("rank_one_update: dimension mismatch");
  if (std::abs(x.norm() - 1.0) > norm_tol)
    throw std::invalid_argument("rank_one_update: vector not unit norm");
  SymmetricMatrix r(a.dim());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = i; j < a.dim(); ++j) r.set(i, j, a(i, j) + x(i) * x(j));
  return r;
}

}  // namespace opca
