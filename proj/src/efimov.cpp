#include "bscount/efimov.hpp"

#include "bscount/errors.hpp"
#include "bscount/parallel.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/legendre.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace bscount {

namespace {

std::string num(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

// Gauss–Legendre nodes and weights on [−1, 1], ascending.
void gauss_legendre(int n, Vector& x, Vector& w) {
  const std::vector<double> pos = boost::math::legendre_p_zeros<double>(n);
  x.resize(n);
  w.resize(n);
  // legendre_p_zeros returns the nonnegative zeros in ascending order.
  int k = 0;
  for (auto it = pos.rbegin(); it != pos.rend(); ++it) {
    if (*it == 0.0) continue;
    x(k++) = -*it;
  }
  for (const double z : pos) x(k++) = z;
  for (int i = 0; i < n; ++i) {
    const double d = boost::math::legendre_p_prime(n, x(i));
    w(i) = 2.0 / ((1.0 - x(i) * x(i)) * d * d);
  }
}

double tau_tilde(const SeparableModel& m, double z) {
  const double k = std::sqrt(-z);
  const double b = m.beta;
  const double lu = lambda_unitary(b);
  return m.lambda * (b + k) * (b + k) / (b * b * (1.0 - m.lambda / lu) + 2.0 * b * k + k * k);
}

}  // namespace

JacobiCoeffs jacobi_pair_coeffs(const std::vector<double>& masses) {
  if (masses.size() < 3) throw PreconditionError("jacobi_pair_coeffs: need at least 3 masses");
  double M = 0.0;
  for (const double m : masses) {
    if (!(m > 0.0) || !std::isfinite(m)) {
      throw PreconditionError("jacobi_pair_coeffs: masses must be positive, got " + num(m));
    }
    M += m;
  }
  const double m1 = masses[0];
  const double m2 = masses[1];
  const double den = (M - m1) * (M - m2);
  JacobiCoeffs c;
  const double a11 = -std::sqrt(m1 * m2 / den);
  const double a12 = std::sqrt(M * (M - m1 - m2) / den);
  c.a << a11, a12, a12, -a11;
  const double dev = (c.a.transpose() * c.a - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff();
  if (dev > 1e-12) throw InternalError("jacobi_pair_coeffs: matrix not orthogonal (" + num(dev) + ")");
  return c;
}

MomentumMap parse_momentum_map(std::string_view name) {
  if (name == "log") return MomentumMap::Log;
  if (name == "rational") return MomentumMap::Rational;
  throw PreconditionError("unknown momentum map '" + std::string(name) + "'");
}

std::string to_string(MomentumMap map) { return map == MomentumMap::Log ? "log" : "rational"; }

void SeparableModel::validate() const {
  if (!(beta > 0.0) || !(p_max > 0.0)) throw PreconditionError("SeparableModel: beta and p_max must be positive");
  if (n_p < 64) throw PreconditionError("SeparableModel: n_p must be >= 64");
  if (n_x < 4) throw PreconditionError("SeparableModel: n_x must be >= 4");
  if (!(lambda >= 0.0)) throw PreconditionError("SeparableModel: lambda must be >= 0");
  if (map == MomentumMap::Log && !(p_min > 0.0 && p_min < p_max)) {
    throw PreconditionError("SeparableModel: need 0 < p_min < p_max");
  }
  if (masses.size() != 3) throw PreconditionError("SeparableModel: three masses expected");
  for (const double mm : masses) {
    if (std::abs(mm - masses[0]) > 1e-12 * masses[0]) {
      throw PreconditionError("SeparableModel: the boson kernel needs equal masses");
    }
  }
}

double lambda_unitary(double beta) {
  if (!(beta > 0.0)) throw PreconditionError("lambda_unitary: beta must be positive");
  return beta * beta * beta / (std::numbers::pi * std::numbers::pi);
}

double lambda_unitary_quadrature(double beta) {
  if (!(beta > 0.0)) throw PreconditionError("lambda_unitary_quadrature: beta must be positive");
  boost::math::quadrature::exp_sinh<double> integrator;
  auto f = [beta](double q) {
    const double g = 1.0 / (q * q + beta * beta);
    return g * g;
  };
  const double integral = integrator.integrate(f, 0.0, std::numeric_limits<double>::infinity(), 1e-14);
  return 1.0 / (4.0 * std::numbers::pi * integral);
}

double two_body_bubble(double beta, double z) {
  if (z > 0.0) throw PreconditionError("two_body_bubble: z must be <= 0");
  const double k = std::sqrt(-z);
  return std::numbers::pi * std::numbers::pi / (beta * (beta + k) * (beta + k));
}

std::optional<double> dimer_energy(const SeparableModel& m) {
  if (m.lambda <= lambda_unitary(m.beta)) return std::nullopt;
  // λπ²/(β(β+κ)²) = 1
  const double k = std::sqrt(m.lambda * std::numbers::pi * std::numbers::pi / m.beta) - m.beta;
  return -k * k;
}

int two_body_bound_count(const SeparableModel& m) {
  return m.lambda * two_body_bubble(m.beta, 0.0) > 1.0 ? 1 : 0;
}

MomentumGrid momentum_grid(const SeparableModel& m) {
  m.validate();
  Vector t, wt;
  gauss_legendre(m.n_p, t, wt);
  MomentumGrid g;
  g.q.resize(m.n_p);
  g.w.resize(m.n_p);
  if (m.map == MomentumMap::Log) {
    const double lo = std::log(m.p_min);
    const double hi = std::log(m.p_max);
    for (int i = 0; i < m.n_p; ++i) {
      g.q(i) = std::exp(0.5 * (hi - lo) * t(i) + 0.5 * (hi + lo));
      g.w(i) = 0.5 * (hi - lo) * wt(i) * g.q(i);
    }
  } else {
    const double c = m.map_c;
    for (int i = 0; i < m.n_p; ++i) {
      const double u = 0.5 * (t(i) + 1.0);
      const double den = 1.0 + c * (1.0 - u);
      g.q(i) = m.p_max * u / den;
      g.w(i) = 0.5 * wt(i) * m.p_max * (1.0 + c) / (den * den);
    }
  }
  return g;
}

double infrared_ceiling(const SeparableModel& m) {
  const double pmin = m.map == MomentumMap::Log ? m.p_min : m.p_max / (1.0 + m.map_c) / m.n_p;
  return (30.0 * pmin) * (30.0 * pmin);
}

ThreeBosonKernel three_boson_kernel(const SeparableModel& m, double E) {
  return three_boson_kernel(m, momentum_grid(m), E);
}

ThreeBosonKernel three_boson_kernel(const SeparableModel& m, const MomentumGrid& grid, double E) {
  m.validate();
  if (!(E < 0.0)) throw PreconditionError("three_boson_kernel: E must be negative");
  if (const auto ed = dimer_energy(m); ed && E >= *ed) {
    throw PreconditionError("three_boson_kernel: E = " + num(E) +
                            " is not below the dimer threshold " + num(*ed));
  }
  const JacobiCoeffs jc = jacobi_pair_coeffs(m.masses);
  const double a11 = jc.a(0, 0);
  const double a12 = jc.a(0, 1);
  const double b2 = m.beta * m.beta;
  Vector x, wx;
  gauss_legendre(m.n_x, x, wx);

  const Index n = grid.q.size();
  Vector d(n);
  for (Index i = 0; i < n; ++i) {
    const double q = grid.q(i);
    d(i) = std::sqrt(grid.w(i) * q * q * tau_tilde(m, E - q * q));
  }
  const double pref = 4.0 * std::numbers::pi / (a12 * a12 * a12);
  const double inv_a12sq = 1.0 / (a12 * a12);
  Matrix k(n, n);
  for (Index i = 0; i < n; ++i) {
    const double q = grid.q(i);
    for (Index j = 0; j <= i; ++j) {
      const double qp = grid.q(j);
      double z0 = 0.0;
      for (int t = 0; t < m.n_x; ++t) {
        const double cross = 2.0 * a11 * q * qp * x(t);
        // Squared pair momenta of the two spectator-exchanged channels.
        const double p3 = (qp * qp + a11 * a11 * q * q + cross) * inv_a12sq;
        const double p1 = (a11 * a11 * qp * qp + q * q + cross) * inv_a12sq;
        z0 += wx(t) / ((p3 + b2) * (p1 + b2) * (p3 + q * q - E));
      }
      k(i, j) = k(j, i) = pref * d(i) * z0 * d(j);
    }
  }
  ThreeBosonKernel out{SymOperator::symmetrized(k), false};
  const double ir = infrared_ceiling(m);
  const double uv = (m.p_max / 30.0) * (m.p_max / 30.0);
  out.cutoff_warning = -E < ir || -E > uv;
  return out;
}

std::size_t trimer_count(const SeparableModel& m, const MomentumGrid& grid, double E) {
  const Vector ev = eigenvalues_of(three_boson_kernel(m, grid, E).kernel);
  std::size_t c = 0;
  for (const double l : ev)
    if (l > 1.0) ++c;
  return c;
}

TrimerLevels trimer_levels(const SeparableModel& m, double e_floor, double e_ceil, double rel_tol,
                           int jobs) {
  if (!(e_floor < e_ceil && e_ceil < 0.0)) {
    throw PreconditionError("trimer_levels: need E_floor < E_ceil < 0");
  }
  const MomentumGrid grid = momentum_grid(m);
  auto count_at = [&](double lnabs) { return trimer_count(m, grid, -std::exp(lnabs)); };
  const double x_deep = std::log(-e_floor);
  const double x_shallow = std::log(-e_ceil);

  TrimerLevels out;
  // Coarse monotonicity scan, deep to shallow.
  constexpr int kScan = 24;
  const auto scan = parallel_map(kScan + 1, jobs, [&](std::size_t i) {
    return count_at(x_deep + (x_shallow - x_deep) * static_cast<double>(i) / kScan);
  });
  for (std::size_t i = 1; i < scan.size(); ++i)
    if (scan[i] < scan[i - 1]) out.monotone = false;
  out.count_at_floor = static_cast<int>(scan.front());
  const int total = static_cast<int>(scan.back());

  const int first = out.count_at_floor + 1;
  const int n_levels = std::max(0, total - out.count_at_floor);
  out.energies = parallel_map(static_cast<std::size_t>(n_levels), jobs, [&](std::size_t idx) {
    const int level = first + static_cast<int>(idx);
    // count(deep) < level <= count(shallow); start from the coarse scan bracket.
    double deep = x_deep;
    double shallow = x_shallow;
    for (int i = 0; i <= kScan; ++i) {
      const double xi = x_deep + (x_shallow - x_deep) * static_cast<double>(i) / kScan;
      if (static_cast<int>(scan[static_cast<std::size_t>(i)]) < level) deep = xi;
      else {
        shallow = xi;
        break;
      }
    }
    while (deep - shallow > rel_tol) {
      const double mid = 0.5 * (deep + shallow);
      if (static_cast<int>(count_at(mid)) >= level) shallow = mid;
      else deep = mid;
    }
    return -std::exp(0.5 * (deep + shallow));
  });
  return out;
}

std::vector<double> efimov_spectrum(const SeparableModel& m, double e_floor, int jobs) {
  const double lu = lambda_unitary(m.beta);
  if (std::abs(m.lambda - lu) > 1e-8 * lu) {
    throw PreconditionError("efimov_spectrum: lambda must equal lambda_unitary within 1e-8");
  }
  const TrimerLevels lv = trimer_levels(m, e_floor, -infrared_ceiling(m), 1e-10, jobs);
  if (!lv.monotone) {
    throw InternalError("efimov_spectrum: trimer count is not monotone in E along the scan");
  }
  if (lv.energies.size() < 3) {
    throw ConvergenceError("efimov_spectrum: only " + std::to_string(lv.energies.size()) +
                               " levels resolved; increase p_max / n_p or lower p_min",
                           static_cast<long>(lv.energies.size()));
  }
  return lv.energies;
}

S0Result s0_oracle() {
  const double c = 8.0 / std::sqrt(3.0);
  auto f = [c](double s) {
    return s * std::cosh(std::numbers::pi * s / 2.0) - c * std::sinh(std::numbers::pi * s / 6.0);
  };
  double lo = 0.1;
  double hi = 2.0;
  S0Result r;
  r.bracket_lo_residual = f(lo);
  r.bracket_hi_residual = f(hi);
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if ((f(mid) < 0.0) == (r.bracket_lo_residual < 0.0)) lo = mid;
    else hi = mid;
  }
  r.s0 = 0.5 * (lo + hi);
  r.residual = f(r.s0);
  r.ratio = std::exp(2.0 * std::numbers::pi / r.s0);
  return r;
}

}  // namespace bscount
