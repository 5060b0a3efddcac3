#pragma once

// Symmetric tridiagonal eigen-solvers used by the radial discretization.

#include "bscount/linop.hpp"

#include <cstddef>

namespace bscount {

struct Tridiagonal {
  Vector diag;     // size n
  Vector offdiag;  // size n-1

  Index size() const noexcept { return diag.size(); }
  SymOperator dense() const;
};

/// Number of eigenvalues strictly below x, from the Sturm sequence of T − x.
std::size_t sturm_count_below(const Tridiagonal& t, double x);

/// All eigenvalues (ascending) and, when wanted, orthonormal eigenvectors.
SpectralDecomp tridiagonal_eigen(const Tridiagonal& t, bool vectors = true);

/// Smallest eigenvalue only.
double tridiagonal_min_eigenvalue(const Tridiagonal& t);

}  // namespace bscount
