#include <doctest.h>

#include <random>

#include "opca/matrix.hpp"

using namespace opca;

namespace {

SymmetricMatrix random_symmetric(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  SymmetricMatrix a(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) a.set(i, j, gauss(rng));
  return a;
}

Eigen::VectorXd random_unit(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x(i) = gauss(rng);
  return x.normalized();
}

}  // namespace

TEST_CASE("trace_inner_product identity and diagonal cases") {
  CHECK(trace_inner_product(SymmetricMatrix::identity(3),
                            SymmetricMatrix::identity(3)) == doctest::Approx(3.0));
  SymmetricMatrix a(2), b(2);
  a.set(0, 0, 1.0);
  a.set(1, 1, 2.0);
  b.set(0, 0, 3.0);
  b.set(1, 1, 4.0);
  CHECK(trace_inner_product(a, b) == doctest::Approx(11.0));
}

TEST_CASE("trace_inner_product matches brute-force tr(AB) and is symmetric") {
  std::mt19937_64 rng(1);
  for (int rep = 0; rep < 20; ++rep) {
    const SymmetricMatrix a = random_symmetric(6, rng);
    const SymmetricMatrix b = random_symmetric(6, rng);
    double brute = 0.0;
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) brute += a(i, j) * b(j, i);
    CHECK(trace_inner_product(a, b) == doctest::Approx(brute).epsilon(1e-12));
    CHECK(trace_inner_product(a, b) == trace_inner_product(b, a));  // exact
  }
}

TEST_CASE("trace_inner_product rejects dimension mismatch") {
  CHECK_THROWS_AS(
      trace_inner_product(SymmetricMatrix(2), SymmetricMatrix(3)),
      std::invalid_argument);
}

TEST_CASE("gain on aligned and orthogonal unit vectors") {
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(3, 1);
  u(0, 0) = 1.0;
  ProjectionBasis basis(u);
  CHECK(gain(basis, Instance::sparse(Eigen::VectorXd::Unit(3, 0))) ==
        doctest::Approx(1.0));
  CHECK(gain(basis, Instance::sparse(Eigen::VectorXd::Unit(3, 1))) ==
        doctest::Approx(0.0));
}

TEST_CASE("sparse gain matches the materialized projector oracle") {
  std::mt19937_64 rng(2);
  for (int rep = 0; rep < 20; ++rep) {
    Eigen::MatrixXd g(5, 2);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 2; ++j) g(i, j) = gauss(rng);
    const Eigen::MatrixXd q =
        Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ() *
        Eigen::MatrixXd::Identity(5, 2);
    ProjectionBasis basis(q);
    const Eigen::VectorXd x = random_unit(5, rng);
    const Eigen::MatrixXd p = q * q.transpose();
    const double oracle = (p * (x * x.transpose())).trace();
    CHECK(gain(basis, Instance::sparse(x)) ==
          doctest::Approx(oracle).epsilon(1e-10));
  }
}

TEST_CASE("gain bounds: dense in [0,k], sparse in [0,1]") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 6, k = 2;
    Eigen::MatrixXd g(n, k);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < k; ++j) g(i, j) = gauss(rng);
    ProjectionBasis basis(Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ() *
                          Eigen::MatrixXd::Identity(n, k));
    // dense instance with eigenvalues in [0,1]
    SymmetricMatrix d(n);
    for (int i = 0; i < n; ++i) d.set(i, i, unif(rng));
    const double gd = gain(basis, Instance::dense(d));
    CHECK(gd >= -tol::gain_bound);
    CHECK(gd <= k + tol::gain_bound);
    const double gs = gain(basis, Instance::sparse(random_unit(n, rng)));
    CHECK(gs >= -tol::gain_bound);
    CHECK(gs <= 1.0 + tol::gain_bound);
  }
}

TEST_CASE("add_scaled basics") {
  std::mt19937_64 rng(4);
  const SymmetricMatrix a = random_symmetric(4, rng);
  const SymmetricMatrix b = random_symmetric(4, rng);
  CHECK((add_scaled(a, 0.0, b).dense() - a.dense()).norm() == 0.0);
  CHECK((add_scaled(SymmetricMatrix(4), 1.0, b).dense() - b.dense()).norm() ==
        0.0);
  CHECK(add_scaled(a, -1.0, a).dense().norm() == 0.0);
  CHECK_THROWS_AS(add_scaled(a, 1.0, SymmetricMatrix(5)),
                  std::invalid_argument);
}

TEST_CASE("rank_one_update basics and outer-product oracle") {
  SymmetricMatrix z(3);
  const SymmetricMatrix r = rank_one_update(z, Eigen::VectorXd::Unit(3, 0));
  CHECK(r(0, 0) == 1.0);
  CHECK(r.dense().sum() == 1.0);

  const SymmetricMatrix i2 =
      rank_one_update(SymmetricMatrix::identity(2), Eigen::VectorXd::Unit(2, 1));
  CHECK(i2(0, 0) == 1.0);
  CHECK(i2(1, 1) == 2.0);

  std::mt19937_64 rng(5);
  const SymmetricMatrix a = random_symmetric(5, rng);
  const Eigen::VectorXd x = random_unit(5, rng);
  SymmetricMatrix outer(5);
  for (int i = 0; i < 5; ++i)
    for (int j = i; j < 5; ++j) outer.set(i, j, x(i) * x(j));
  const SymmetricMatrix via_add = add_scaled(a, 1.0, outer);
  CHECK((rank_one_update(a, x).dense() - via_add.dense()).norm() == 0.0);

  CHECK_THROWS_AS(rank_one_update(a, 2.0 * x), std::invalid_argument);
  CHECK_THROWS_AS(rank_one_update(a, random_unit(4, rng)),
                  std::invalid_argument);
}

TEST_CASE("updates preserve exact symmetry") {
  std::mt19937_64 rng(6);
  SymmetricMatrix a = random_symmetric(7, rng);
  for (int rep = 0; rep < 30; ++rep) {
    if (rep % 2 == 0)
      a = rank_one_update(a, random_unit(7, rng));
    else
      a = add_scaled(a, 0.3, random_symmetric(7, rng));
    CHECK(a.is_symmetric_exact());
  }
}

TEST_CASE("Instance invariants") {
  Eigen::VectorXd bad = Eigen::VectorXd::Unit(3, 0) * 1.001;
  CHECK_THROWS_AS(Instance::sparse(bad), std::invalid_argument);

  SymmetricMatrix too_big(2);
  too_big.set(0, 0, 1.5);
  CHECK_THROWS_AS(Instance::dense(too_big), std::invalid_argument);

  SymmetricMatrix indef(2);
  indef.set(0, 0, -0.5);
  CHECK_THROWS_AS(Instance::dense(indef), std::invalid_argument);

  SymmetricMatrix ok(2);
  ok.set(0, 0, 1.0);
  ok.set(1, 1, 0.25);
  CHECK(Instance::dense(ok).trace() == doctest::Approx(1.25));
}

TEST_CASE("ProjectionBasis invariants") {
  Eigen::MatrixXd skew(3, 1);
  skew << 1.0, 1.0, 0.0;
  CHECK_THROWS_AS((void)ProjectionBasis(skew), std::invalid_argument);

  Eigen::MatrixXd u(3, 2);
  u << 1, 0, 0, 1, 0, 0;
  ProjectionBasis basis(u);
  const SymmetricMatrix p = basis.projector();
  CHECK((p.dense() * p.dense() - p.dense()).norm() < tol::projector);
  CHECK(p.trace() == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("dense gain is never materializing-dependent") {
  // tr(U U^T X) two ways on a dense instance
  std::mt19937_64 rng(7);
  const int n = 5, k = 2;
  Eigen::MatrixXd g(n, k);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < k; ++j) g(i, j) = gauss(rng);
  ProjectionBasis basis(Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ() *
                        Eigen::MatrixXd::Identity(n, k));
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  SymmetricMatrix x(n);
  for (int i = 0; i < n; ++i) x.set(i, i, unif(rng));
  const double via_projector =
      trace_inner_product(basis.projector(), x);
  CHECK(gain(basis, Instance::dense(x)) ==
        doctest::Approx(via_projector).epsilon(1e-10));
}
