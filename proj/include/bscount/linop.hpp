#pragma once

// Dense self-adjoint operator algebra on a finite-dimensional state space.

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <string_view>

namespace bscount {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Relative tolerance accepted by SymOperator when checking entries[i][j] == entries[j][i].
inline constexpr double kSymmetryTolerance = 1e-12;

/// Real symmetric matrix standing in for a self-adjoint operator.
///
/// The stored matrix is exactly symmetric: the validating constructor rejects
/// inputs whose asymmetry exceeds kSymmetryTolerance (relative to the largest
/// entry) and then averages away what is left.
class SymOperator {
 public:
  explicit SymOperator(Matrix entries);

  /// Takes (M + Mᵀ)/2 without validation. For products that are symmetric in
  /// exact arithmetic but pick up rounding asymmetry.
  static SymOperator symmetrized(const Matrix& m);
  static SymOperator identity(Index dim);
  static SymOperator zero(Index dim);
  static SymOperator diagonal(const Vector& d);

  Index dim() const noexcept { return m_.rows(); }
  const Matrix& matrix() const noexcept { return m_; }
  double operator()(Index i, Index j) const { return m_(i, j); }
  double frobenius_norm() const { return m_.norm(); }

  SymOperator operator+(const SymOperator& o) const;
  SymOperator operator-(const SymOperator& o) const;
  SymOperator operator-() const;
  SymOperator operator*(double s) const;
  friend SymOperator operator*(double s, const SymOperator& a) { return a * s; }

  /// Congruence S·A·Sᵀ (S need not be square-compatible beyond S.cols() == dim).
  SymOperator congruence(const Matrix& s) const;

 private:
  struct Unchecked {};
  SymOperator(Matrix entries, Unchecked);
  Matrix m_;
};

/// Eigenvalues in ascending order and the matching orthonormal eigenvectors (columns).
struct SpectralDecomp {
  Vector eigenvalues;
  Matrix eigenvectors;
};

SpectralDecomp spectral_decompose(const SymOperator& a);
Vector eigenvalues_of(const SymOperator& a);

/// V·diag(f(λ))·Vᵀ. Throws DomainError if f is not finite at some eigenvalue.
SymOperator op_function(const SymOperator& a, const std::function<double(double)>& f);
SymOperator op_function(const SpectralDecomp& d, const std::function<double(double)>& f);

enum class Relation { Greater, GreaterEqual, Less, LessEqual };

Relation parse_relation(std::string_view symbol);

/// Comparison guard band η = 1e-10·(1 + ‖A‖_F).
double guard_band(const SymOperator& a);

/// Eigenvalues (with multiplicity) related to `threshold`, with the guard band
/// widening non-strict relations and narrowing strict ones:
///   λ > t  ⇔ λ > t + η      λ ≥ t ⇔ λ ≥ t − η
///   λ < t  ⇔ λ < t − η      λ ≤ t ⇔ λ ≤ t + η
std::size_t count_evs(const SymOperator& a, Relation rel, double threshold);
std::size_t count_evs(const Vector& eigenvalues, double guard, Relation rel, double threshold);

/// Frobenius norm.
double hs_norm(const SymOperator& a);

/// f·fᵀ for f normalized internally; rejects ‖f‖ < 1e-8.
SymOperator rank_one_projection(const Vector& f);

}  // namespace bscount
