#include "bscount/iterbs.hpp"

#include "bscount/errors.hpp"

#include <cmath>
#include <sstream>
#include <string>

namespace bscount {

namespace {

constexpr double kIdempotentTol = 1e-10;
constexpr double kSpectralTol = 1e-8;
constexpr double kConsistencyTol = 1e-8;

std::string num(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

void check_mu(double mu, const char* who) {
  if (!(mu > 0.0 && mu < 1.0)) {
    throw PreconditionError(std::string(who) + ": mu must lie in (0, 1), got " + num(mu));
  }
}

void check_projection(const SymOperator& p, const char* who) {
  const double dev = (p.matrix() * p.matrix() - p.matrix()).norm();
  if (dev > kIdempotentTol) {
    throw PreconditionError(std::string(who) + ": P is not a projection (|P^2 - P| = " +
                            num(dev) + ")");
  }
}

// Rank of an orthogonal projection is its trace.
bool is_rank_one(const SymOperator& p) { return std::abs(p.matrix().trace() - 1.0) < 1e-6; }

}  // namespace

ProjectionStep::ProjectionStep(SymOperator p, double mu_, SymOperator k_part,
                               SymOperator l_part, const SymOperator& k_total,
                               bool require_spectral)
    : P(std::move(p)), mu(mu_), K_part(std::move(k_part)), L_part(std::move(l_part)) {
  check_mu(mu, "ProjectionStep");
  check_projection(P, "ProjectionStep");
  if (P.matrix().trace() < 0.5) throw PreconditionError("ProjectionStep: P is zero");
  if (K_part.dim() != P.dim() || L_part.dim() != P.dim() || k_total.dim() != P.dim()) {
    throw PreconditionError("ProjectionStep: dimension mismatch");
  }
  const double split = (K_part.matrix() + L_part.matrix() - k_total.matrix()).norm();
  if (split > 1e-10 * (1.0 + k_total.frobenius_norm())) {
    throw PreconditionError("ProjectionStep: K_part + L_part differs from K_total by " +
                            num(split));
  }
  if (require_spectral && r_compatibility_residual() > kSpectralTol) {
    throw PreconditionError("ProjectionStep: P is not a spectral projection of K_part at mu "
                            "(residual " + num(r_compatibility_residual()) + ")");
  }
}

double ProjectionStep::r_compatibility_residual() const {
  return ((K_part.matrix() - mu * P.matrix()) * P.matrix()).norm();
}

SymOperator inv_sqrt_one_minus(const SymOperator& p, double mu) {
  check_mu(mu, "inv_sqrt_one_minus");
  check_projection(p, "inv_sqrt_one_minus");
  if (is_rank_one(p)) {
    const double c = 1.0 / std::sqrt(1.0 - mu) - 1.0;
    return SymOperator::identity(p.dim()) + p * c;
  }
  const SymOperator one_minus = SymOperator::identity(p.dim()) - p * mu;
  return op_function(one_minus, [](double x) { return 1.0 / std::sqrt(x); });
}

SymOperator r_operator(const SymOperator& p, double mu) {
  return inv_sqrt_one_minus(p, mu) - SymOperator::identity(p.dim());
}

SymOperator bs_step(const SymOperator& t, const ProjectionStep& step) {
  if (t.dim() != step.P.dim()) throw PreconditionError("bs_step: dimension mismatch");
  const Matrix s = inv_sqrt_one_minus(step.P, step.mu).matrix();
  return SymOperator::symmetrized(s * (t.matrix() - step.mu * step.P.matrix()) * s);
}

std::vector<IterStage> iterate(const SymOperator& k_total,
                               const std::vector<ProjectionStep>& steps) {
  const Index n = k_total.dim();
  std::vector<IterStage> out;
  out.reserve(steps.size() + 1);

  IterStage s0{0, k_total, Matrix::Zero(n, n), count_evs(k_total, Relation::Greater, 1.0), 0.0,
               0.0};
  out.push_back(s0);

  Matrix subtracted = Matrix::Zero(n, n);  // Σ_{i<k} μ_i P_i
  Matrix m = Matrix::Zero(n, n);
  SymOperator t = k_total;
  for (std::size_t j = 0; j < steps.size(); ++j) {
    const ProjectionStep& st = steps[j];
    if (st.P.dim() != n) throw PreconditionError("iterate: step dimension mismatch");
    const Matrix r = r_operator(st.P, st.mu).matrix();
    const double compat = ((st.K_part.matrix() - st.mu * st.P.matrix()) * r).norm();
    if (compat > kRCompatibilityTol) {
      throw PreconditionError("iterate: projection is not spectral for its subsystem part (step " +
                              std::to_string(j + 1) + ", residual " + num(compat) + ")");
    }
    const Matrix x = st.L_part.matrix() - subtracted;
    const Matrix one_r = Matrix::Identity(n, n) + r;
    m = one_r * m * one_r + r * x * r + r * x + x * r;
    subtracted += st.mu * st.P.matrix();

    t = bs_step(t, st);
    IterStage stage{static_cast<int>(j + 1),
                    t,
                    m,
                    count_evs(t, Relation::Greater, 1.0),
                    m.norm(),
                    (t.matrix() - (k_total.matrix() - subtracted + m)).norm()};
    if (stage.residual > kConsistencyTol * std::max(1.0, t.frobenius_norm())) {
      throw InternalError("iterate: recurrence disagrees with direct conjugation at stage " +
                          std::to_string(stage.k) + " (residual " + num(stage.residual) + ")");
    }
    out.push_back(std::move(stage));
  }
  return out;
}

}  // namespace bscount
