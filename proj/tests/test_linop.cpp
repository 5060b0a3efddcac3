#include "doctest.h"

#include "bscount/errors.hpp"
#include "bscount/instances.hpp"
#include "bscount/linop.hpp"
#include "bscount/tridiagonal.hpp"

#include <algorithm>
#include <cmath>

using namespace bscount;

TEST_CASE("non-symmetric input is rejected with its asymmetry") {
  Matrix m(2, 2);
  m << 1.0, 2.0, 2.5, 1.0;
  try {
    SymOperator a(m);
    FAIL("accepted a non-symmetric matrix");
  } catch (const AsymmetryError& e) {
    CHECK(e.max_asymmetry() == doctest::Approx(0.5));
  }
  CHECK(SymOperator::symmetrized(m)(0, 1) == doctest::Approx(2.25));
}

TEST_CASE("spectral_decompose on identity and diagonal") {
  const auto id = spectral_decompose(SymOperator::identity(3));
  for (int i = 0; i < 3; ++i) CHECK(id.eigenvalues[i] == doctest::Approx(1.0));
  CHECK((id.eigenvectors.transpose() * id.eigenvectors - Matrix::Identity(3, 3)).norm() < 1e-12);

  const auto d = spectral_decompose(SymOperator::diagonal(Vector{{-2.0, 0.0, 5.0}}));
  CHECK(d.eigenvalues[0] == doctest::Approx(-2.0));
  CHECK(d.eigenvalues[1] == doctest::Approx(0.0));
  CHECK(d.eigenvalues[2] == doctest::Approx(5.0));
}

TEST_CASE("spectral residual invariants on seeded random matrices") {
  Rng rng(derive_seed(kDefaultSeed, 8));
  for (int trial = 0; trial < 20; ++trial) {
    const SymOperator a = random_symmetric(8, rng, 3.0);
    const auto d = spectral_decompose(a);
    const Matrix& v = d.eigenvectors;
    CHECK((a.matrix() * v - v * d.eigenvalues.asDiagonal()).norm() <= 1e-10 * (1.0 + a.frobenius_norm()));
    CHECK((v.transpose() * v - Matrix::Identity(8, 8)).norm() <= 1e-10);
    for (Index i = 1; i < 8; ++i) CHECK(d.eigenvalues[i - 1] <= d.eigenvalues[i]);
  }
}

TEST_CASE("op_function") {
  Rng rng(derive_seed(kDefaultSeed, 9));
  const SymOperator a = random_symmetric(6, rng);
  CHECK((op_function(a, [](double x) { return x; }).matrix() - a.matrix()).norm() < 1e-10);

  const SymOperator d = op_function(SymOperator::diagonal(Vector{{4.0, 9.0}}), [](double x) { return 1.0 / std::sqrt(x); });
  CHECK(d(0, 0) == doctest::Approx(0.5));
  CHECK(d(1, 1) == doctest::Approx(1.0 / 3.0));
  CHECK(std::abs(d(0, 1)) < 1e-15);

  // Square of the square root reproduces a positive matrix.
  const SymOperator p = SymOperator::symmetrized(a.matrix() * a.matrix()) + SymOperator::identity(6);
  const SymOperator s = op_function(p, [](double x) { return std::sqrt(x); });
  CHECK((s.matrix() * s.matrix() - p.matrix()).norm() < 1e-10 * p.frobenius_norm());

  try {
    op_function(SymOperator::diagonal(Vector{{1.0, -2.0}}), [](double x) { return 1.0 / std::sqrt(x); });
    FAIL("no domain error");
  } catch (const DomainError& e) {
    CHECK(e.eigenvalue() == doctest::Approx(-2.0));
  }
}

TEST_CASE("count_evs examples and relations") {
  const SymOperator d = SymOperator::diagonal(Vector{{-1.0, 0.0, 2.0}});
  CHECK(count_evs(d, Relation::Greater, 1.0) == 1);
  CHECK(count_evs(SymOperator::identity(5), Relation::Greater, 1.0) == 0);
  CHECK(count_evs(SymOperator::identity(5), Relation::GreaterEqual, 1.0) == 5);
  CHECK(count_evs(d, Relation::Less, 0.0) == 1);
  CHECK(count_evs(d, Relation::LessEqual, 0.0) == 2);
  CHECK(parse_relation(">=") == Relation::GreaterEqual);
  CHECK(parse_relation("<") == Relation::Less);
  CHECK_THROWS_AS(parse_relation("=="), std::invalid_argument);
}

TEST_CASE("count_evs agrees with a brute-force scan of sorted eigenvalues") {
  Rng rng(derive_seed(kDefaultSeed, 10));
  for (int trial = 0; trial < 50; ++trial) {
    const SymOperator a = random_symmetric(2 + trial % 12, rng, 2.0);
    Eigen::SelfAdjointEigenSolver<Matrix> es(a.matrix());
    std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + a.dim());
    std::sort(ev.begin(), ev.end());
    const double t = std::uniform_real_distribution<double>(-2.0, 2.0)(rng);
    std::size_t above = 0, below = 0;
    for (const double x : ev) {
      above += x > t;
      below += x < t;
    }
    CHECK(count_evs(a, Relation::Greater, t) == above);
    CHECK(count_evs(a, Relation::Less, t) == below);
  }
}

TEST_CASE("hs_norm") {
  CHECK(hs_norm(SymOperator::zero(3)) == 0.0);
  CHECK(hs_norm(SymOperator::diagonal(Vector{{3.0, 4.0}})) == doctest::Approx(5.0));
  Rng rng(derive_seed(kDefaultSeed, 11));
  for (int trial = 0; trial < 10; ++trial) {
    const SymOperator a = random_symmetric(7, rng);
    CHECK(hs_norm(a) == doctest::Approx(eigenvalues_of(a).norm()).epsilon(1e-12));
  }
}

TEST_CASE("rank_one_projection") {
  const SymOperator p = rank_one_projection(Vector{{1.0, 0.0}});
  CHECK(p(0, 0) == 1.0);
  CHECK(p(1, 1) == 0.0);
  const SymOperator q = rank_one_projection(Vector{{1.0, 1.0}} / std::sqrt(2.0));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK(q(i, j) == doctest::Approx(0.5));
  CHECK((q.matrix() * q.matrix() - q.matrix()).norm() < 1e-15);
  CHECK_THROWS(rank_one_projection(Vector::Zero(3)));
  CHECK_THROWS(rank_one_projection(Vector::Constant(3, 1e-9)));
}

TEST_CASE("tridiagonal Sturm counts match dense eigenvalues") {
  Rng rng(derive_seed(kDefaultSeed, 12));
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 10; ++trial) {
    Tridiagonal t{Vector(30), Vector(29)};
    for (Index i = 0; i < 30; ++i) t.diag[i] = g(rng);
    for (Index i = 0; i < 29; ++i) t.offdiag[i] = g(rng);
    const Vector dense = eigenvalues_of(t.dense());
    const auto dec = tridiagonal_eigen(t);
    CHECK((dec.eigenvalues - dense).norm() < 1e-10);
    CHECK(tridiagonal_min_eigenvalue(t) == doctest::Approx(dense[0]).epsilon(1e-12));
    for (const double x : {-1.0, 0.0, 0.5}) {
      std::size_t below = 0;
      for (Index i = 0; i < 30; ++i) below += dense[i] < x;
      CHECK(sturm_count_below(t, x) == below);
    }
  }
}
