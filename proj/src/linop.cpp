#include "bscount/linop.hpp"

#include "bscount/errors.hpp"

#include <cmath>
#include <sstream>
#include <string>

namespace bscount {

namespace {

constexpr double kMinProjectionNorm = 1e-8;

std::string describe(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

SymOperator::SymOperator(Matrix entries) : m_(std::move(entries)) {
  if (m_.rows() != m_.cols()) {
    throw PreconditionError("SymOperator: matrix is " + std::to_string(m_.rows()) + "x" +
                            std::to_string(m_.cols()) + ", not square");
  }
  if (m_.rows() < 1) throw PreconditionError("SymOperator: dimension must be >= 1");
  if (!m_.allFinite()) throw PreconditionError("SymOperator: non-finite entry");
  const double scale = std::max(1.0, m_.cwiseAbs().maxCoeff());
  const double asym = (m_ - m_.transpose()).cwiseAbs().maxCoeff();
  if (asym > kSymmetryTolerance * scale) {
    throw AsymmetryError("SymOperator: max asymmetry " + describe(asym) + " exceeds tolerance",
                         asym);
  }
  m_ = 0.5 * (m_ + m_.transpose()).eval();
}

SymOperator::SymOperator(Matrix entries, Unchecked) : m_(std::move(entries)) {}

SymOperator SymOperator::symmetrized(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw PreconditionError("SymOperator::symmetrized: need a non-empty square matrix");
  }
  return SymOperator(Matrix(0.5 * (m + m.transpose())), Unchecked{});
}

SymOperator SymOperator::identity(Index dim) {
  if (dim < 1) throw PreconditionError("SymOperator::identity: dimension must be >= 1");
  return SymOperator(Matrix::Identity(dim, dim), Unchecked{});
}

SymOperator SymOperator::zero(Index dim) {
  if (dim < 1) throw PreconditionError("SymOperator::zero: dimension must be >= 1");
  return SymOperator(Matrix::Zero(dim, dim), Unchecked{});
}

SymOperator SymOperator::diagonal(const Vector& d) {
  if (d.size() < 1) throw PreconditionError("SymOperator::diagonal: empty diagonal");
  return SymOperator(Matrix(d.asDiagonal()), Unchecked{});
}

SymOperator SymOperator::operator+(const SymOperator& o) const {
  return SymOperator(Matrix(m_ + o.m_), Unchecked{});
}
SymOperator SymOperator::operator-(const SymOperator& o) const {
  return SymOperator(Matrix(m_ - o.m_), Unchecked{});
}
SymOperator SymOperator::operator-() const { return SymOperator(Matrix(-m_), Unchecked{}); }
SymOperator SymOperator::operator*(double s) const {
  return SymOperator(Matrix(s * m_), Unchecked{});
}

SymOperator SymOperator::congruence(const Matrix& s) const {
  return symmetrized(s * m_ * s.transpose());
}

SpectralDecomp spectral_decompose(const SymOperator& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.matrix(), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    // Eigen caps the implicit QL sweeps at 30 per eigenvalue.
    const long cap = 30L * a.dim();
    throw ConvergenceError("spectral_decompose: no convergence within " + std::to_string(cap) +
                               " QL iterations",
                           cap);
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

Vector eigenvalues_of(const SymOperator& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.matrix(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    const long cap = 30L * a.dim();
    throw ConvergenceError("eigenvalues_of: no convergence within " + std::to_string(cap) +
                               " QL iterations",
                           cap);
  }
  return solver.eigenvalues();
}

SymOperator op_function(const SpectralDecomp& d, const std::function<double(double)>& f) {
  Vector fl(d.eigenvalues.size());
  for (Index i = 0; i < fl.size(); ++i) {
    const double lambda = d.eigenvalues(i);
    fl(i) = f(lambda);
    if (!std::isfinite(fl(i))) {
      throw DomainError("op_function: function not finite at eigenvalue " + describe(lambda),
                        lambda);
    }
  }
  return SymOperator::symmetrized(d.eigenvectors * fl.asDiagonal() * d.eigenvectors.transpose());
}

SymOperator op_function(const SymOperator& a, const std::function<double(double)>& f) {
  return op_function(spectral_decompose(a), f);
}

Relation parse_relation(std::string_view symbol) {
  if (symbol == ">") return Relation::Greater;
  if (symbol == ">=") return Relation::GreaterEqual;
  if (symbol == "<") return Relation::Less;
  if (symbol == "<=") return Relation::LessEqual;
  throw PreconditionError("unknown relation '" + std::string(symbol) + "'");
}

double guard_band(const SymOperator& a) { return 1e-10 * (1.0 + a.frobenius_norm()); }

std::size_t count_evs(const Vector& eigenvalues, double guard, Relation rel, double threshold) {
  std::size_t n = 0;
  for (const double l : eigenvalues) {
    bool hit = false;
    switch (rel) {
      case Relation::Greater: hit = l > threshold + guard; break;
      case Relation::GreaterEqual: hit = l >= threshold - guard; break;
      case Relation::Less: hit = l < threshold - guard; break;
      case Relation::LessEqual: hit = l <= threshold + guard; break;
    }
    if (hit) ++n;
  }
  return n;
}

std::size_t count_evs(const SymOperator& a, Relation rel, double threshold) {
  return count_evs(eigenvalues_of(a), guard_band(a), rel, threshold);
}

double hs_norm(const SymOperator& a) { return a.frobenius_norm(); }

SymOperator rank_one_projection(const Vector& f) {
  const double norm = f.norm();
  if (!(norm >= kMinProjectionNorm)) {
    throw PreconditionError("rank_one_projection: vector norm " + describe(norm) +
                            " below 1e-8");
  }
  const Vector u = f / norm;
  return SymOperator::symmetrized(u * u.transpose());
}

}  // namespace bscount
