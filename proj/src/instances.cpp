#include "bscount/instances.hpp"

#include "bscount/errors.hpp"

#include <cmath>

namespace bscount {

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  // splitmix64 finalizer over base + golden-ratio stride
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

Matrix gaussian(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Matrix g(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) g(i, j) = nd(rng);
  return g;
}

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace

Matrix random_orthogonal(Index n, Rng& rng) {
  const Matrix g = gaussian(n, n, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  // Sign fix makes the distribution Haar.
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < n; ++j)
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  return q;
}

Vector random_unit_vector(Index n, Rng& rng) {
  Vector v = gaussian(n, 1, rng).col(0);
  while (v.norm() < 1e-3) v = gaussian(n, 1, rng).col(0);
  return v.normalized();
}

SymOperator random_symmetric(Index n, Rng& rng, double scale) {
  const Matrix g = gaussian(n, n, rng);
  return SymOperator::symmetrized(scale * (g + g.transpose()) / std::sqrt(2.0 * n));
}

BsProblem random_bs_problem(std::uint64_t seed, const InstanceOptions& opt) {
  Rng rng(seed);
  const Index n = std::uniform_int_distribution<Index>(opt.dim_min, opt.dim_max)(rng);

  Vector d(n);
  for (Index i = 0; i < n; ++i) d(i) = uniform(rng, opt.a_floor, 5.0);
  if (opt.zero_mode) d(0) = 0.0;
  const Matrix q = random_orthogonal(n, rng);
  const SymOperator a = SymOperator::symmetrized(q.transpose() * d.asDiagonal() * q);

  const Index r = std::uniform_int_distribution<Index>(1, n)(rng);
  const double s = uniform(rng, 0.3, 1.5);
  const Matrix g = s * gaussian(r, n, rng);
  Matrix b = -(g.transpose() * g);
  if (opt.indefinite) b += random_symmetric(n, rng, uniform(rng, 0.5, 3.0)).matrix();
  const double eps = uniform(rng, 0.05, 2.0);
  return BsProblem(a, SymOperator::symmetrized(b), eps);
}

CountPair count_with_jitter(const BsProblem& p, int max_jitters) {
  CountPair out;
  double eps = p.epsilon;
  for (int attempt = 0;; ++attempt) {
    try {
      const BsProblem q(p.A, p.B, eps);
      out.bs = count_bs(q);
      out.direct = count_direct(q);
      out.epsilon = eps;
      out.jitters = attempt;
      return out;
    } catch (const ThresholdCollision&) {
      if (attempt >= max_jitters) throw;
      eps *= 1.0 + 1e-6;
    }
  }
}

IterbsCase random_iterbs_case(std::uint64_t seed, Index dim, int n_steps) {
  InstanceOptions opt;
  opt.dim_min = opt.dim_max = dim;
  opt.indefinite = (seed & 1) != 0;
  const BsProblem base = random_bs_problem(seed, opt);
  IterbsCase out{bs_operator(base), {}};

  Rng rng(derive_seed(seed, 0x17e5));
  const Matrix id = Matrix::Identity(dim, dim);
  for (int j = 0; j < n_steps; ++j) {
    const Vector phi = random_unit_vector(dim, rng);
    const SymOperator p = rank_one_projection(phi);
    const double mu = uniform(rng, 0.2, 0.8);
    const Matrix q = id - p.matrix();
    const SymOperator s = random_symmetric(dim, rng, 2.0);
    const SymOperator k_part = SymOperator::symmetrized(mu * p.matrix() + q * s.matrix() * q);
    const SymOperator l_part = out.K_total - k_part;
    out.steps.emplace_back(p, mu, k_part, l_part, out.K_total);
  }
  return out;
}

}  // namespace bscount
