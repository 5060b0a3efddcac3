#include "bscount/bsengine.hpp"

#include "bscount/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

namespace bscount {

namespace {

constexpr double kLambdaCap = 1e6;
constexpr double kOrthonormalTol = 1e-10;

std::string num(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

SymOperator inv_sqrt_shifted(const SymOperator& a, double eps, const char* who) {
  const SpectralDecomp d = spectral_decompose(a);
  if (d.eigenvalues(0) + eps <= 0.0) {
    throw DomainError(std::string(who) + ": A+eps not positive definite (min eigenvalue " +
                          num(d.eigenvalues(0) + eps) + ")",
                      d.eigenvalues(0) + eps);
  }
  return op_function(d, [eps](double x) { return 1.0 / std::sqrt(x + eps); });
}

double min_eig(const SymOperator& a) { return eigenvalues_of(a)(0); }

}  // namespace

BsProblem::BsProblem(SymOperator a, SymOperator b, double eps)
    : A(std::move(a)), B(std::move(b)), epsilon(eps) {
  if (A.dim() != B.dim()) throw PreconditionError("BsProblem: A and B differ in dimension");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw PreconditionError("BsProblem: epsilon must be positive, got " + num(epsilon));
  }
  const double lo = min_eig(A);
  if (lo < -guard_band(A)) {
    throw PreconditionError("BsProblem: A is not positive semidefinite (min eigenvalue " +
                            num(lo) + ")");
  }
}

SymOperator bs_operator(const BsProblem& p) {
  const SymOperator s = inv_sqrt_shifted(p.A, p.epsilon, "bs_operator");
  return SymOperator::symmetrized(-(s.matrix() * p.B.matrix() * s.matrix()));
}

SymOperator bs_operator_bounded(const SymOperator& a, const SymOperator& b) {
  if (a.dim() != b.dim()) throw PreconditionError("bs_operator_bounded: dimension mismatch");
  const SpectralDecomp d = spectral_decompose(a);
  if (d.eigenvalues(0) <= guard_band(a)) {
    throw PreconditionError("bs_operator_bounded: A is not bounded below by a positive constant");
  }
  const SymOperator s = op_function(d, [](double x) { return 1.0 / std::sqrt(x); });
  return SymOperator::symmetrized(-(s.matrix() * b.matrix() * s.matrix()));
}

std::size_t count_direct(const BsProblem& p) {
  return count_evs(p.A + p.B, Relation::Less, -p.epsilon);
}

std::size_t count_bs(const BsProblem& p) {
  const SymOperator h = p.A + p.B;
  const double gh = guard_band(h);
  for (const double l : eigenvalues_of(h)) {
    if (std::abs(l + p.epsilon) <= gh) {
      throw ThresholdCollision("count_bs: eigenvalue " + num(l) +
                                   " of A+B lies within the guard band of -epsilon; perturb "
                                   "epsilon",
                               l);
    }
  }
  const SymOperator k = bs_operator(p);
  const Vector kev = eigenvalues_of(k);
  const double gk = guard_band(k);
  for (const double l : kev) {
    if (std::abs(l - 1.0) <= gk) {
      throw ThresholdCollision(
          "count_bs: eigenvalue " + num(l) + " of K lies within the guard band of 1; perturb epsilon",
          l);
    }
  }
  return count_evs(kev, gk, Relation::Greater, 1.0);
}

double mu_max(const BsProblem& p) {
  const Vector ev = eigenvalues_of(bs_operator(p));
  return ev(ev.size() - 1);
}

CriticalCouplingResult critical_coupling(const SymOperator& a, const SymOperator& b, double tol) {
  if (a.dim() != b.dim()) throw PreconditionError("critical_coupling: dimension mismatch");
  if (!(tol > 0.0)) throw PreconditionError("critical_coupling: tol must be positive");
  const double eta = guard_band(a);
  if (min_eig(a) < -eta) throw PreconditionError("critical_coupling: A is not positive semidefinite");
  if (min_eig(b) >= -guard_band(b)) {
    throw NeverBindsError("critical_coupling: B is positive semidefinite, A+lambda*B never binds");
  }
  auto binds = [&](double lambda) { return min_eig(a + b * lambda) < -eta; };

  CriticalCouplingResult r;
  double lo = 0.0;
  double hi = 1.0;
  while (!binds(hi)) {
    lo = hi;
    hi *= 2.0;
    ++r.iterations;
    if (hi > kLambdaCap) {
      throw NeverBindsError("critical_coupling: no binding up to lambda = 1e6");
    }
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (binds(mid)) hi = mid;
    else lo = mid;
    ++r.iterations;
  }
  r.lo = lo;
  r.hi = hi;
  r.lambda_star = 0.5 * (lo + hi);
  r.residual_min_eig = min_eig(a + b * r.lambda_star);
  return r;
}

HsBoundResult hs_count_bound_check(const SymOperator& a, double delta, const Matrix& vectors) {
  if (!(delta > 0.0)) throw PreconditionError("hs_count_bound_check: delta must be positive");
  if (vectors.rows() != a.dim()) {
    throw PreconditionError("hs_count_bound_check: vectors have wrong length");
  }
  const Index n = vectors.cols();
  const Matrix gram = vectors.transpose() * vectors;
  const double dev = (gram - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
  if (n > 0 && dev > kOrthonormalTol) {
    throw PreconditionError("hs_count_bound_check: vectors are not orthonormal (deviation " +
                            num(dev) + ")");
  }
  for (Index i = 0; i < n; ++i) {
    const double e = vectors.col(i).dot(a.matrix() * vectors.col(i));
    if (std::abs(e) < delta * (1.0 - 1e-12)) {
      throw PreconditionError("hs_count_bound_check: |(phi_" + std::to_string(i) +
                              ", A phi_" + std::to_string(i) + ")| = " + num(std::abs(e)) +
                              " is below delta");
    }
  }
  HsBoundResult r;
  r.n = static_cast<std::size_t>(n);
  const double hs = hs_norm(a);
  r.bound = hs * hs / (delta * delta);
  r.holds = static_cast<double>(r.n) <= r.bound * (1.0 + 1e-12);
  return r;
}

RankOneDomination rank_one_domination(const Vector& f, const SymOperator& a, double epsilon0,
                                      double c) {
  if (f.size() != a.dim()) throw PreconditionError("rank_one_domination: dimension mismatch");
  if (!(epsilon0 > 0.0) || !(c > 0.0)) {
    throw PreconditionError("rank_one_domination: epsilon0 and c must be positive");
  }
  const SymOperator proj = rank_one_projection(f);
  const Vector u = f.normalized();
  const SpectralDecomp d = spectral_decompose(a);
  if (d.eigenvalues(0) < -guard_band(a)) {
    throw PreconditionError("rank_one_domination: A is not positive semidefinite");
  }

  // Spectral weights of f; tail[i] = squared norm of f on eigenvalues above index i.
  const Vector w = (d.eigenvectors.transpose() * u).array().square().matrix();
  const Index n = w.size();
  Vector tail(n);
  double acc = 0.0;
  for (Index i = n - 1; i >= 0; --i) {
    tail(i) = acc;
    acc += w(i);
  }

  RankOneDomination r;
  r.k0 = d.eigenvalues(n - 1);
  if (acc < (0.5 * c) * (0.5 * c)) {
    r.k0 = 0.0;  // the whole vector already fits in the c/2 ball
  } else {
    for (Index i = 0; i < n; ++i) {
      // Ties in the spectrum: a cutoff at eigenvalue i includes all equal eigenvalues.
      if (i + 1 < n && d.eigenvalues(i + 1) == d.eigenvalues(i)) continue;
      if (std::sqrt(tail(i)) < 0.5 * c) {
        r.k0 = d.eigenvalues(i);
        break;
      }
    }
  }
  r.L = 2.0 * (std::max(r.k0, 0.0) + epsilon0);

  const SymOperator resolvent =
      op_function(d, [epsilon0](double x) { return 1.0 / (x + epsilon0); });
  const SymOperator diff = proj - resolvent * r.L;
  const Vector ev = eigenvalues_of(diff);
  r.max_eig = ev(ev.size() - 1);
  if (r.max_eig > c + guard_band(diff)) {
    throw InternalError("rank_one_domination: verification failed, max eigenvalue " +
                        num(r.max_eig) + " exceeds c = " + num(c));
  }
  return r;
}

}  // namespace bscount
