#include "doctest.h"

#include "bscount/bsengine.hpp"
#include "bscount/errors.hpp"
#include "bscount/instances.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

using namespace bscount;

namespace {

SymOperator diag(std::initializer_list<double> d) {
  Vector v(static_cast<Index>(d.size()));
  Index i = 0;
  for (const double x : d) v[i++] = x;
  return SymOperator::diagonal(v);
}

// Eigenvalues of −B x = μ (A+ε) x, solved without forming (A+ε)^{-1/2}.
Vector generalized_oracle(const BsProblem& p) {
  const Matrix shifted = p.A.matrix() + p.epsilon * Matrix::Identity(p.A.dim(), p.A.dim());
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> ges(-p.B.matrix(), shifted);
  return ges.eigenvalues();
}

// Smallest root of det(A + λB) = 0 for 2×2 A, B with λ > 0.
double quadratic_root(const Matrix& a, const Matrix& b) {
  const double c2 = b(0, 0) * b(1, 1) - b(0, 1) * b(1, 0);
  const double c1 = a(0, 0) * b(1, 1) + a(1, 1) * b(0, 0) - a(0, 1) * b(1, 0) - a(1, 0) * b(0, 1);
  const double c0 = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  if (std::abs(c2) < 1e-300) return -c0 / c1;
  const double disc = std::sqrt(c1 * c1 - 4 * c2 * c0);
  double best = INFINITY;
  for (const double r : {(-c1 - disc) / (2 * c2), (-c1 + disc) / (2 * c2)})
    if (r > 0) best = std::min(best, r);
  return best;
}

}  // namespace

TEST_CASE("BsProblem invariants") {
  CHECK_THROWS_AS(BsProblem(SymOperator::identity(2), SymOperator::zero(2), 0.0), PreconditionError);
  CHECK_THROWS_AS(BsProblem(diag({-1.0, 1.0}), SymOperator::zero(2), 1.0), PreconditionError);
  CHECK_THROWS_AS(BsProblem(SymOperator::identity(2), SymOperator::zero(3), 1.0), PreconditionError);
  CHECK_NOTHROW(BsProblem(diag({0.0, 1.0}), SymOperator::zero(2), 1.0));
}

TEST_CASE("bs_operator examples") {
  const SymOperator k1 = bs_operator({SymOperator::identity(2), -SymOperator::identity(2), 1.0});
  CHECK((k1.matrix() - 0.5 * Matrix::Identity(2, 2)).norm() < 1e-14);

  const SymOperator k2 = bs_operator({diag({0.0, 3.0}), -diag({2.0, 2.0}), 1.0});
  CHECK(k2(0, 0) == doctest::Approx(2.0));
  CHECK(k2(1, 1) == doctest::Approx(0.5));
  CHECK(std::abs(k2(0, 1)) < 1e-15);
}

TEST_CASE("bs_operator spectrum matches the generalized eigenproblem") {
  for (std::uint64_t i = 0; i < 40; ++i) {
    InstanceOptions opt;
    opt.indefinite = i % 2 == 1;
    opt.zero_mode = i % 3 == 0;
    const BsProblem p = random_bs_problem(derive_seed(kDefaultSeed, 100 + i), opt);
    const Vector mine = eigenvalues_of(bs_operator(p));
    const Vector oracle = generalized_oracle(p);
    CHECK((mine - oracle).norm() <= 1e-9 * (1.0 + oracle.norm()));
  }
}

TEST_CASE("count_direct examples and brute force") {
  CHECK(count_direct({SymOperator::identity(3), SymOperator::zero(3), 0.5}) == 0);
  CHECK(count_direct({diag({0.0, 0.0}), diag({-3.0, -3.0}), 1.0}) == 2);
  for (std::uint64_t i = 0; i < 40; ++i) {
    const BsProblem p = random_bs_problem(derive_seed(kDefaultSeed, 200 + i), {});
    Eigen::SelfAdjointEigenSolver<Matrix> es(p.A.matrix() + p.B.matrix());
    std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + p.A.dim());
    std::sort(ev.begin(), ev.end());
    const std::size_t brute = std::lower_bound(ev.begin(), ev.end(), -p.epsilon) - ev.begin();
    CHECK(count_direct(p) == brute);
  }
}

TEST_CASE("count_bs examples") {
  const BsProblem p1{SymOperator::identity(2), -SymOperator::identity(2), 1.0};
  CHECK(count_bs(p1) == 0);
  CHECK(count_direct(p1) == 0);
  const BsProblem p2{diag({0.0, 1.0}), diag({-2.0, 0.0}), 0.5};
  CHECK(bs_operator(p2)(0, 0) == doctest::Approx(4.0));
  CHECK(count_bs(p2) == 1);
  CHECK(count_direct(p2) == 1);
}

TEST_CASE("count_bs reports threshold collisions") {
  // A+B has eigenvalue −1 exactly at −ε.
  const BsProblem p{diag({1.0, 2.0}), diag({-2.0, 0.0}), 1.0};
  CHECK_THROWS_AS(count_bs(p), ThresholdCollision);
  const CountPair c = count_with_jitter(p);
  CHECK(c.jitters >= 1);
  CHECK(c.direct == c.bs);
}

TEST_CASE("BS equality and inequality on seeded corpora") {
  for (std::uint64_t i = 0; i < 100; ++i) {
    InstanceOptions opt;
    opt.indefinite = i % 2 == 1;
    const CountPair c = count_with_jitter(random_bs_problem(derive_seed(kDefaultSeed, 300 + i), opt));
    CHECK(c.bs == c.direct);

    InstanceOptions z;
    z.zero_mode = true;
    z.indefinite = i % 2 == 0;
    const CountPair d = count_with_jitter(random_bs_problem(derive_seed(kDefaultSeed, 400 + i), z));
    CHECK(d.bs >= d.direct);
  }
}

TEST_CASE("bounded case at zero shift") {
  for (std::uint64_t i = 0; i < 30; ++i) {
    InstanceOptions opt;
    opt.a_floor = 0.5;
    opt.indefinite = i % 2 == 0;
    const BsProblem p = random_bs_problem(derive_seed(kDefaultSeed, 500 + i), opt);
    const SymOperator k0 = bs_operator_bounded(p.A, p.B);
    CHECK(count_evs(k0, Relation::Greater, 1.0) == count_evs(p.A + p.B, Relation::Less, 0.0));
  }
  CHECK_THROWS_AS(bs_operator_bounded(diag({0.0, 1.0}), diag({-1.0, 0.0})), PreconditionError);
}

TEST_CASE("mu_max examples and monotonicity") {
  const SymOperator i2 = SymOperator::identity(2);
  CHECK(mu_max({i2, -i2, 1.0}) == doctest::Approx(0.5));
  for (const double eps : {0.1, 0.7, 3.0}) CHECK(mu_max({i2, -i2, eps}) == doctest::Approx(1.0 / (1.0 + eps)));
  CHECK(mu_max({diag({0.0, 2.0}), -diag({1.0, 1.0}), 0.25}) == doctest::Approx(4.0));

  for (std::uint64_t i = 0; i < 20; ++i) {
    const BsProblem p = random_bs_problem(derive_seed(kDefaultSeed, 600 + i), {});
    double prev = INFINITY;
    for (double eps = 1e-3; eps < 10.0; eps *= 2.5) {
      const double mu = mu_max({p.A, p.B, eps});
      CHECK(mu < prev);
      prev = mu;
    }
  }
}

TEST_CASE("coupling monotonicity of the bottom of the spectrum") {
  const BsProblem p = random_bs_problem(derive_seed(kDefaultSeed, 650), {});
  double prev = INFINITY;
  for (double lambda = 0.0; lambda < 5.0; lambda += 0.25) {
    const double m = eigenvalues_of(p.A + p.B * lambda)(0);
    CHECK(m <= prev + 1e-12);
    prev = m;
  }
}

TEST_CASE("critical_coupling") {
  const SymOperator i2 = SymOperator::identity(2);
  const auto r1 = critical_coupling(i2, -i2, 1e-10);
  CHECK(r1.lambda_star == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(r1.lo <= r1.lambda_star);
  CHECK(r1.lambda_star <= r1.hi);
  CHECK(r1.hi - r1.lo <= 1e-10);

  const SymOperator a = diag({0.0, 1.0});
  const SymOperator b = SymOperator(-0.5 * Matrix::Ones(2, 2));
  const auto r2 = critical_coupling(a, b, 1e-12);
  // λ* is where the bottom eigenvalue reaches −η, i.e. det(A + ηI + λB) = 0.
  const double eta = guard_band(a);
  const double oracle = quadratic_root(a.matrix() + eta * Matrix::Identity(2, 2), b.matrix());
  CHECK(oracle > 0.0);
  CHECK(std::abs(r2.lambda_star - oracle) <= 1e-12);

  CHECK_THROWS_AS(critical_coupling(i2, i2, 1e-6), NeverBindsError);
  CHECK_THROWS_AS(critical_coupling(i2, SymOperator::zero(2), 1e-6), NeverBindsError);
}

TEST_CASE("critical_coupling 2x2 quadratic oracle on random instances") {
  Rng rng(derive_seed(kDefaultSeed, 700));
  for (int t = 0; t < 20; ++t) {
    const Matrix q = random_orthogonal(2, rng);
    std::uniform_real_distribution<double> u(0.2, 3.0);
    const SymOperator a = SymOperator::symmetrized(q * Vector{{u(rng), u(rng)}}.asDiagonal() * q.transpose());
    const Vector g = random_unit_vector(2, rng) * u(rng);
    const SymOperator b = SymOperator::symmetrized(-g * g.transpose() + 0.1 * random_symmetric(2, rng).matrix());
    if (eigenvalues_of(b)(0) >= 0) continue;
    const double oracle = quadratic_root(a.matrix() + guard_band(a) * Matrix::Identity(2, 2), b.matrix());
    const auto r = critical_coupling(a, b, 1e-12);
    CHECK(r.lambda_star == doctest::Approx(oracle).epsilon(1e-8));
  }
}

TEST_CASE("critical_coupling scaling covariance") {
  for (std::uint64_t i = 0; i < 10; ++i) {
    InstanceOptions opt;
    opt.a_floor = 0.1;
    const BsProblem p = random_bs_problem(derive_seed(kDefaultSeed, 800 + i), opt);
    const double base = critical_coupling(p.A, p.B, 1e-12).lambda_star;
    for (const double c : {0.5, 3.0}) {
      const double scaled = critical_coupling(p.A, p.B * c, 1e-12).lambda_star;
      CHECK(scaled == doctest::Approx(base / c).epsilon(1e-7));
    }
  }
}

TEST_CASE("hs_count_bound_check") {
  const auto r1 = hs_count_bound_check(SymOperator::identity(4), 1.0, Matrix::Identity(4, 4));
  CHECK(r1.holds);
  CHECK(r1.n == 4);
  CHECK(r1.bound == doctest::Approx(4.0));

  const auto r2 = hs_count_bound_check(diag({2.0, 0.1}), 2.0, Matrix::Identity(2, 1));
  CHECK(r2.holds);
  CHECK(r2.n == 1);
  CHECK(r2.bound == doctest::Approx(4.01 / 4.0));

  Matrix skew(2, 2);
  skew << 1.0, 0.1, 0.0, 1.0;
  CHECK_THROWS_AS(hs_count_bound_check(SymOperator::identity(2), 1.0, skew), PreconditionError);
  try {
    hs_count_bound_check(diag({2.0, 0.1}), 1.0, Matrix::Identity(2, 2));
    FAIL("accepted a vector below delta");
  } catch (const PreconditionError& e) {
    CHECK(std::string(e.what()).find("phi_1") != std::string::npos);
  }
}

TEST_CASE("hs bound extremal family: scaled rank-r projections") {
  Rng rng(derive_seed(kDefaultSeed, 900));
  for (int t = 0; t < 20; ++t) {
    const Index n = 4 + t % 8;
    const Index r = 1 + t % n;
    const Matrix q = random_orthogonal(n, rng);
    const Matrix v = q.leftCols(r);
    const double delta = 0.3 + 0.1 * t;
    const SymOperator a = SymOperator::symmetrized(delta * v * v.transpose());
    const auto res = hs_count_bound_check(a, delta, v);
    CHECK(res.holds);
    CHECK(res.n == static_cast<std::size_t>(r));
    CHECK(std::abs(res.bound - static_cast<double>(r)) <= 1e-9);
  }
}

TEST_CASE("rank_one_domination") {
  const Vector e1 = Vector::Unit(3, 0);
  const auto r = rank_one_domination(e1, SymOperator::identity(3), 1.0, 0.5);
  CHECK(r.L == doctest::Approx(4.0));
  // Independent check of f fᵀ − (L/2) I.
  const Matrix m = e1 * e1.transpose() - 0.5 * r.L * Matrix::Identity(3, 3);
  CHECK(Eigen::SelfAdjointEigenSolver<Matrix>(m).eigenvalues().maxCoeff() <= 0.5);

  const auto big = rank_one_domination(e1, SymOperator::identity(3), 1.0, 1.5);
  CHECK(big.max_eig <= 1.5);

  Rng rng(derive_seed(kDefaultSeed, 950));
  for (int t = 0; t < 50; ++t) {
    const BsProblem p = random_bs_problem(derive_seed(kDefaultSeed, 960 + t), {});
    const Vector f = random_unit_vector(p.A.dim(), rng);
    const double c = std::uniform_real_distribution<double>(0.05, 1.0)(rng);
    const double eps0 = std::uniform_real_distribution<double>(0.01, 2.0)(rng);
    const auto d = rank_one_domination(f, p.A, eps0, c);
    const Matrix resolvent = (p.A.matrix() + eps0 * Matrix::Identity(p.A.dim(), p.A.dim())).inverse();
    const Matrix check = f * f.transpose() - d.L * resolvent;
    CHECK(Eigen::SelfAdjointEigenSolver<Matrix>(0.5 * (check + check.transpose())).eigenvalues().maxCoeff() <=
          c + 1e-9);
  }
}
