#include <doctest.h>

#include <random>

#include "opca/eigen_solve.hpp"

using namespace opca;

namespace {

SymmetricMatrix diag(std::initializer_list<double> values) {
  SymmetricMatrix a(static_cast<int>(values.size()));
  int i = 0;
  for (double v : values) {
    a.set(i, i, v);
    ++i;
  }
  return a;
}

SymmetricMatrix random_symmetric(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  SymmetricMatrix a(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) a.set(i, j, gauss(rng));
  return a;
}

double span_distance(const ProjectionBasis& a, const ProjectionBasis& b) {
  const Eigen::MatrixXd pa = a.columns() * a.columns().transpose();
  const Eigen::MatrixXd pb = b.columns() * b.columns().transpose();
  return (pa - pb).norm();
}

}  // namespace

TEST_CASE("full_decompose on the identity") {
  const FullDecomposition d = full_decompose(SymmetricMatrix::identity(3));
  for (int i = 0; i < 3; ++i) CHECK(d.eigenvalues(i) == doctest::Approx(1.0));
}

TEST_CASE("full_decompose analytic 2x2 exchange matrix") {
  SymmetricMatrix a(2);
  a.set(0, 1, 1.0);
  const FullDecomposition d = full_decompose(a);
  CHECK(d.eigenvalues(0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(d.eigenvalues(1) == doctest::Approx(-1.0).epsilon(1e-12));
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(d.eigenvectors(0, 0) * d.eigenvectors(1, 0)) ==
        doctest::Approx(inv_sqrt2 * inv_sqrt2).epsilon(1e-10));
}

TEST_CASE("full_decompose analytic tridiagonal 3x3") {
  // eigenvalues 2, 2 +/- sqrt(2)
  SymmetricMatrix a(3);
  a.set(0, 0, 2.0);
  a.set(1, 1, 2.0);
  a.set(2, 2, 2.0);
  a.set(0, 1, 1.0);
  a.set(1, 2, 1.0);
  const FullDecomposition d = full_decompose(a);
  CHECK(d.eigenvalues(0) == doctest::Approx(2.0 + std::sqrt(2.0)).epsilon(1e-10));
  CHECK(d.eigenvalues(1) == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(d.eigenvalues(2) == doctest::Approx(2.0 - std::sqrt(2.0)).epsilon(1e-10));
}

TEST_CASE("full_decompose reconstruction and orthogonality") {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 10; ++rep) {
    const SymmetricMatrix a = random_symmetric(6, rng);
    const FullDecomposition d = full_decompose(a);
    CHECK((d.reconstruct() - a.dense()).norm() < 1e-10);
    CHECK((d.eigenvectors.transpose() * d.eigenvectors -
           Eigen::MatrixXd::Identity(6, 6))
              .norm() < 1e-9);
    for (int i = 1; i < 6; ++i)
      CHECK(d.eigenvalues(i) <= d.eigenvalues(i - 1));
  }
}

TEST_CASE("top_k_value trivial diagonal cases") {
  const SymmetricMatrix a = diag({5.0, 1.0, 0.0});
  CHECK(top_k_value(a, 1) == doctest::Approx(5.0));
  CHECK(top_k_value(a, 3) == doctest::Approx(6.0));
  CHECK_THROWS_AS(top_k_value(a, 0), std::invalid_argument);
  CHECK_THROWS_AS(top_k_value(a, 4), std::invalid_argument);
}

TEST_CASE("top_k_value is monotone in k on PSD input; dominates Rayleigh values") {
  std::mt19937_64 rng(12);
  const SymmetricMatrix s = random_symmetric(10, rng);
  const SymmetricMatrix psd =
      SymmetricMatrix::from_dense(s.dense() * s.dense().transpose());
  for (int k = 1; k < 10; ++k)
    CHECK(top_k_value(psd, k) <= top_k_value(psd, k + 1) + 1e-9);
  const SymmetricMatrix a = random_symmetric(10, rng);
  // Rayleigh maximization over random orthonormal U never exceeds the value.
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int rep = 0; rep < 50; ++rep) {
    Eigen::MatrixXd g(10, 4);
    for (int i = 0; i < 10; ++i)
      for (int j = 0; j < 4; ++j) g(i, j) = gauss(rng);
    const Eigen::MatrixXd q =
        Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ() *
        Eigen::MatrixXd::Identity(10, 4);
    const double rayleigh = (a.dense() * q).cwiseProduct(q).sum();
    CHECK(rayleigh <= top_k_value(a, 4) + 1e-9);
  }
}

TEST_CASE("top_k on a separated diagonal matrix") {
  const TopKResult r = top_k(diag({3.0, 2.0, 1.0}), 2, EigenConfig{});
  CHECK(r.converged);
  CHECK(r.rayleigh == doctest::Approx(5.0).epsilon(1e-9));
  // span{e1,e2}: bottom row of U must vanish
  CHECK(r.basis.columns().row(2).norm() < 1e-6);
}

TEST_CASE("top_k on the identity returns Rayleigh k exactly") {
  for (int k : {1, 2, 5}) {
    const TopKResult r = top_k(SymmetricMatrix::identity(5), k, EigenConfig{});
    CHECK(r.rayleigh == doctest::Approx(double(k)).epsilon(1e-12));
  }
}

TEST_CASE("top_k matches the dense oracle on random matrices") {
  std::mt19937_64 rng(13);
  for (int rep = 0; rep < 25; ++rep) {
    const SymmetricMatrix a = random_symmetric(8, rng);
    EigenConfig cfg;
    cfg.seed = rng();
    const TopKResult r = top_k(a, 3, cfg);
    CHECK(r.rayleigh == doctest::Approx(top_k_value(a, 3)).epsilon(1e-6));
    CHECK(r.rayleigh <= top_k_value(a, 3) + 1e-9);
  }
}

TEST_CASE("top_k shift invariance of the argmax span") {
  std::mt19937_64 rng(14);
  for (int rep = 0; rep < 10; ++rep) {
    // well-separated spectrum in a random basis
    const int n = 7, k = 2;
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXd g(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) g(i, j) = gauss(rng);
    const Eigen::MatrixXd q =
        Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ() *
        Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd lam(n);
    for (int i = 0; i < n; ++i) lam(i) = 10.0 - 1.5 * i;
    const Eigen::MatrixXd m = q * lam.asDiagonal() * q.transpose();
    const SymmetricMatrix a =
        SymmetricMatrix::from_dense(0.5 * (m + m.transpose()));
    const double c = 17.5;
    const SymmetricMatrix shifted =
        add_scaled(a, c, SymmetricMatrix::identity(n));
    EigenConfig cfg;
    cfg.seed = 42 + rep;
    cfg.convergence_tol = 1e-12;
    const TopKResult r1 = top_k(a, k, cfg);
    const TopKResult r2 = top_k(shifted, k, cfg);
    CHECK(span_distance(r1.basis, r2.basis) < 1e-6);
  }
}

TEST_CASE("top_k reports non-convergence but still returns a basis") {
  std::mt19937_64 rng(15);
  const SymmetricMatrix a = random_symmetric(12, rng);
  EigenConfig cfg;
  cfg.max_iterations = 1;
  cfg.convergence_tol = 0.0;
  const TopKResult r = top_k(a, 3, cfg);
  CHECK_FALSE(r.converged);
  CHECK(r.basis.rank() == 3);
  CHECK(r.iterations == 1);
  CHECK_THROWS_AS(top_k(a, 0, cfg), std::invalid_argument);
  CHECK_THROWS_AS(top_k(a, 13, cfg), std::invalid_argument);
}

TEST_CASE("top_k on the zero matrix returns a seeded basis") {
  EigenConfig cfg;
  cfg.seed = 7;
  const TopKResult a = top_k(SymmetricMatrix(4), 2, cfg);
  const TopKResult b = top_k(SymmetricMatrix(4), 2, cfg);
  CHECK(a.rayleigh == doctest::Approx(0.0));
  CHECK((a.basis.columns() - b.basis.columns()).norm() == 0.0);
}
