#include "bscount/tridiagonal.hpp"

#include "bscount/errors.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace bscount {

SymOperator Tridiagonal::dense() const {
  const Index n = size();
  Matrix m = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) m(i, i) = diag(i);
  for (Index i = 0; i + 1 < n; ++i) m(i, i + 1) = m(i + 1, i) = offdiag(i);
  return SymOperator(std::move(m));
}

std::size_t sturm_count_below(const Tridiagonal& t, double x) {
  // LDLᵀ pivots of T − x; the count of negative pivots is the inertia below x.
  const Index n = t.size();
  const double tiny = std::numeric_limits<double>::min();
  std::size_t count = 0;
  double d = t.diag(0) - x;
  for (Index i = 0;; ++i) {
    if (d == 0.0) d = -tiny;
    if (d < 0.0) ++count;
    if (i + 1 == n) break;
    const double e = t.offdiag(i);
    d = t.diag(i + 1) - x - e * e / d;
  }
  return count;
}

SpectralDecomp tridiagonal_eigen(const Tridiagonal& t, bool vectors) {
  const lapack_int n = static_cast<lapack_int>(t.size());
  if (n < 1) throw PreconditionError("tridiagonal_eigen: empty matrix");
  if (t.offdiag.size() != n - 1) throw PreconditionError("tridiagonal_eigen: offdiag size mismatch");

  std::vector<double> d(t.diag.data(), t.diag.data() + n);
  std::vector<double> e(static_cast<std::size_t>(n), 0.0);
  std::copy(t.offdiag.data(), t.offdiag.data() + (n - 1), e.begin());

  SpectralDecomp out;
  out.eigenvalues.resize(n);
  if (vectors) out.eigenvectors.resize(n, n);
  std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(n));
  lapack_int m = 0;
  lapack_logical tryrac = 1;
  const lapack_int info = LAPACKE_dstemr(
      LAPACK_COL_MAJOR, vectors ? 'V' : 'N', 'A', n, d.data(), e.data(), 0.0, 0.0, 0, 0, &m,
      out.eigenvalues.data(), vectors ? out.eigenvectors.data() : nullptr, vectors ? n : 1, n,
      isuppz.data(), &tryrac);
  if (info != 0) {
    throw ConvergenceError("tridiagonal_eigen: dstemr failed with info=" + std::to_string(info),
                           info);
  }
  if (m != n) throw ConvergenceError("tridiagonal_eigen: dstemr returned too few eigenvalues", m);
  return out;
}

double tridiagonal_min_eigenvalue(const Tridiagonal& t) {
  // Bisection on the Sturm count inside the Gershgorin interval.
  const Index n = t.size();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (Index i = 0; i < n; ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(t.offdiag(i - 1));
    if (i + 1 < n) r += std::abs(t.offdiag(i));
    lo = std::min(lo, t.diag(i) - r);
    hi = std::max(hi, t.diag(i) + r);
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (sturm_count_below(t, mid) >= 1) hi = mid;
    else lo = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace bscount
