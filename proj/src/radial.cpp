#include "bscount/radial.hpp"

#include "bscount/errors.hpp"

#include <boost/math/special_functions/bessel.hpp>
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

Vector vminus_cells(const Vector& v) { return (-v).cwiseMax(0.0); }
Vector vplus_cells(const Vector& v) { return v.cwiseMax(0.0); }

Tridiagonal with_diagonal(Tridiagonal t, const Vector& extra) {
  t.diag += extra;
  return t;
}

}  // namespace

GridScheme parse_grid_scheme(std::string_view name) {
  if (name == "uniform_fd2" || name == "uniform") return GridScheme::UniformFd2;
  if (name == "sinh") return GridScheme::Sinh;
  throw PreconditionError("unknown grid scheme '" + std::string(name) + "'");
}

std::string to_string(GridScheme scheme) {
  return scheme == GridScheme::Sinh ? "sinh" : "uniform_fd2";
}

void RadialGrid::validate() const {
  if (ell < 0) throw PreconditionError("RadialGrid: ell must be >= 0");
  if (n < 16) throw PreconditionError("RadialGrid: n must be >= 16");
  if (!(r_max > 0.0) || !std::isfinite(r_max)) throw PreconditionError("RadialGrid: r_max must be positive");
  if (scheme == GridScheme::Sinh && !(r0 > 0.0)) throw PreconditionError("RadialGrid: r0 must be positive");
}

RadialGrid RadialGrid::refined(Index factor) const {
  RadialGrid g = *this;
  g.n *= factor;
  return g;
}

GridGeometry grid_geometry(const RadialGrid& grid) {
  grid.validate();
  const Index n = grid.n;
  GridGeometry g;
  g.nodes.resize(n);
  g.faces.resize(n + 1);
  if (grid.scheme == GridScheme::UniformFd2) {
    const double h = grid.r_max / static_cast<double>(n);
    for (Index j = 0; j <= n; ++j) g.faces(j) = h * static_cast<double>(j);
    for (Index j = 0; j < n; ++j) g.nodes(j) = h * (static_cast<double>(j) + 0.5);
  } else {
    const double hs = std::asinh(grid.r_max / grid.r0) / static_cast<double>(n);
    for (Index j = 0; j <= n; ++j) g.faces(j) = grid.r0 * std::sinh(hs * static_cast<double>(j));
    for (Index j = 0; j < n; ++j) g.nodes(j) = grid.r0 * std::sinh(hs * (static_cast<double>(j) + 0.5));
  }
  g.faces(n) = grid.r_max;
  g.volumes = g.faces.tail(n) - g.faces.head(n);
  // Dirichlet ends through odd reflection: the boundary flux spans node-to-wall.
  g.flux.resize(n + 1);
  g.flux(0) = g.nodes(0);
  for (Index j = 1; j < n; ++j) g.flux(j) = g.nodes(j) - g.nodes(j - 1);
  g.flux(n) = grid.r_max - g.nodes(n - 1);
  return g;
}

std::vector<std::string> grid_warnings(const PotentialSpec& pot, const RadialGrid& grid) {
  std::vector<std::string> out;
  const double range = pot.attractive.kind == ShapeKind::Table ? pot.attractive.table_r.back()
                                                               : pot.attractive.range;
  if (grid.r_max <= 10.0 * range) {
    out.push_back("r_max = " + num(grid.r_max) + " is not beyond 10x the potential range " +
                  num(range));
  }
  return out;
}

Tridiagonal free_hamiltonian(const RadialGrid& grid) {
  const GridGeometry g = grid_geometry(grid);
  const Index n = grid.n;
  Tridiagonal t;
  t.diag.resize(n);
  t.offdiag.resize(n - 1);
  const double l2 = static_cast<double>(grid.ell) * (grid.ell + 1);
  for (Index j = 0; j < n; ++j) {
    t.diag(j) = (1.0 / g.flux(j) + 1.0 / g.flux(j + 1)) / g.volumes(j) +
                l2 / (g.nodes(j) * g.nodes(j));
  }
  for (Index j = 0; j + 1 < n; ++j) {
    t.offdiag(j) = -1.0 / (g.flux(j + 1) * std::sqrt(g.volumes(j) * g.volumes(j + 1)));
  }
  return t;
}

Vector cell_potential(const PotentialSpec& pot, const RadialGrid& grid) {
  pot.validate();
  const GridGeometry g = grid_geometry(grid);
  Vector v(grid.n);
  for (Index j = 0; j < grid.n; ++j) v(j) = pot.cell_value(g.faces(j), g.faces(j + 1), g.nodes(j));
  return v;
}

Tridiagonal reduced_hamiltonian_tridiagonal(const PotentialSpec& pot, const RadialGrid& grid) {
  return with_diagonal(free_hamiltonian(grid), cell_potential(pot, grid));
}

SymOperator reduced_hamiltonian(const PotentialSpec& pot, const RadialGrid& grid) {
  return reduced_hamiltonian_tridiagonal(pot, grid).dense();
}

std::size_t count_bound_states_radial(const PotentialSpec& pot, const RadialGrid& grid,
                                      double epsilon) {
  if (!(epsilon >= 0.0)) throw PreconditionError("count_bound_states_radial: epsilon must be >= 0");
  return sturm_count_below(reduced_hamiltonian_tridiagonal(pot, grid), -epsilon);
}

SymOperator green_kernel(double epsilon, const RadialGrid& grid) {
  if (!(epsilon > 0.0)) throw PreconditionError("green_kernel: epsilon must be positive");
  const GridGeometry g = grid_geometry(grid);
  const Index n = grid.n;
  if (grid.ell == 0) {
    const double k = std::sqrt(epsilon);
    const double denom = 2.0 * k * (-std::expm1(-2.0 * k * grid.r_max));
    Matrix m(n, n);
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j <= i; ++j) {
        const double rl = g.nodes(j);
        const double rg = g.nodes(i);
        // sinh(κr<)sinh(κ(R−r>))/(κ sinh κR) with the growing exponentials factored out.
        const double val = (std::exp(-k * (rg - rl)) - std::exp(-k * (rg + rl))) *
                           (-std::expm1(-2.0 * k * (grid.r_max - rg))) / denom;
        m(i, j) = m(j, i) = val * std::sqrt(g.volumes(i) * g.volumes(j));
      }
    }
    return SymOperator::symmetrized(m);
  }
  const SpectralDecomp d = tridiagonal_eigen(free_hamiltonian(grid));
  return op_function(d, [epsilon](double x) { return 1.0 / (x + epsilon); });
}

double radial_green_continuum(int ell, double kappa, double r, double rp) {
  const double rl = std::min(r, rp);
  const double rg = std::max(r, rp);
  if (ell == 0) return std::exp(-kappa * (rg - rl)) * (-std::expm1(-2.0 * kappa * rl)) / (2.0 * kappa);
  const double nu = ell + 0.5;
  return std::sqrt(r * rp) * boost::math::cyl_bessel_i(nu, kappa * rl) *
         boost::math::cyl_bessel_k(nu, kappa * rg);
}

double green_3d_partial_waves(double epsilon, double r, double rp, double cos_theta, int ell_max) {
  if (!(epsilon > 0.0)) throw PreconditionError("green_3d_partial_waves: epsilon must be positive");
  const double k = std::sqrt(epsilon);
  double sum = 0.0;
  for (int l = 0; l <= ell_max; ++l) {
    sum += (2.0 * l + 1.0) * radial_green_continuum(l, k, r, rp) *
           boost::math::legendre_p(l, cos_theta);
  }
  return sum / (4.0 * std::numbers::pi * r * rp);
}

double green_3d_closed_form(double epsilon, double distance) {
  return std::exp(-std::sqrt(epsilon) * distance) / (4.0 * std::numbers::pi * distance);
}

SymOperator bs_kernel_radial(const PotentialSpec& pot, const RadialGrid& grid, double epsilon,
                             KernelForm form) {
  if (!(epsilon > 0.0)) throw PreconditionError("bs_kernel_radial: epsilon must be positive");
  if (form == KernelForm::Compact) return RadialBsFactory(pot, grid).kernel(epsilon);

  const Vector v = cell_potential(pot, grid);
  const SpectralDecomp d = tridiagonal_eigen(with_diagonal(free_hamiltonian(grid), vplus_cells(v)));
  if (d.eigenvalues(0) + epsilon <= 0.0) {
    throw DomainError("bs_kernel_radial: H0+V+ +eps is not positive", d.eigenvalues(0) + epsilon);
  }
  const SymOperator s = op_function(d, [epsilon](double x) { return 1.0 / std::sqrt(x + epsilon); });
  const Vector vm = vminus_cells(v);
  return SymOperator::symmetrized(s.matrix() * vm.asDiagonal() * s.matrix());
}

RadialBsFactory::RadialBsFactory(const PotentialSpec& pot, const RadialGrid& grid) {
  const Vector v = cell_potential(pot, grid);
  const SpectralDecomp d = tridiagonal_eigen(with_diagonal(free_hamiltonian(grid), vplus_cells(v)));
  if (d.eigenvalues(0) <= 0.0) {
    throw DomainError("RadialBsFactory: H0+V+ is not positive on the grid", d.eigenvalues(0));
  }
  w_ = d.eigenvalues;
  const Vector vm = vminus_cells(v);
  std::vector<Index> rows;
  for (Index j = 0; j < vm.size(); ++j)
    if (vm(j) > 0.0) rows.push_back(j);
  x_.resize(static_cast<Index>(rows.size()), w_.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    x_.row(static_cast<Index>(i)) = std::sqrt(vm(rows[i])) * d.eigenvectors.row(rows[i]);
  }
}

SymOperator RadialBsFactory::kernel(double epsilon) const {
  if (!(epsilon >= 0.0)) throw PreconditionError("RadialBsFactory: epsilon must be >= 0");
  if (x_.rows() == 0) return SymOperator::zero(1);
  const Vector inv = (w_.array() + epsilon).inverse().matrix();
  return SymOperator::symmetrized(x_ * inv.asDiagonal() * x_.transpose());
}

double RadialBsFactory::mu(double epsilon) const {
  const Vector ev = eigenvalues_of(kernel(epsilon));
  return ev(ev.size() - 1);
}

CriticalCouplingResult critical_coupling_on_grid(const PotentialSpec& shape, const RadialGrid& grid,
                                                 double tol) {
  if (!(tol > 0.0)) throw PreconditionError("critical_coupling_on_grid: tol must be positive");
  const Tridiagonal h0 = free_hamiltonian(grid);
  const PotentialSpec unit = shape.with_strength(1.0);
  auto binds = [&](double lambda) {
    return sturm_count_below(with_diagonal(h0, cell_potential(unit.with_strength(lambda), grid)),
                             0.0) >= 1;
  };
  if (binds(0.0)) throw PreconditionError("critical_coupling_on_grid: binds at zero coupling");

  CriticalCouplingResult r;
  double lo = 0.0;
  double hi = 1.0;
  while (!binds(hi)) {
    lo = hi;
    hi *= 2.0;
    ++r.iterations;
    if (hi > 1e6) throw NeverBindsError("critical_coupling_on_grid: no binding up to lambda = 1e6");
  }
  // Bisect well below the requested tolerance so the grid gap dominates.
  const double width = std::min(tol, 1e-6) * 1e-4;
  while (hi - lo > width * hi) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (binds(mid)) hi = mid;
    else lo = mid;
    ++r.iterations;
  }
  r.lo = lo;
  r.hi = hi;
  r.lambda_star = 0.5 * (lo + hi);
  r.residual_min_eig = tridiagonal_min_eigenvalue(
      with_diagonal(h0, cell_potential(unit.with_strength(r.lambda_star), grid)));
  return r;
}

RadialCriticalResult find_critical_coupling_radial(const PotentialSpec& shape,
                                                   const RadialGrid& grid, double tol) {
  RadialCriticalResult out;
  out.coarse = critical_coupling_on_grid(shape, grid, tol);
  out.fine = critical_coupling_on_grid(shape, grid.refined(2), tol);
  out.lambda_star = out.fine.lambda_star;
  out.relative_gap = std::abs(out.fine.lambda_star - out.coarse.lambda_star) / out.fine.lambda_star;
  if (out.relative_gap > 0.5 * tol) {
    throw ConvergenceError("find_critical_coupling_radial: grids disagree, lambda* = " +
                               num(out.coarse.lambda_star) + " (n=" + std::to_string(grid.n) +
                               ") vs " + num(out.fine.lambda_star) + " (n=" +
                               std::to_string(2 * grid.n) + ")",
                           out.coarse.iterations + out.fine.iterations);
  }
  return out;
}

double tune_to_critical(const PotentialSpec& shape, const RadialGrid& grid) {
  const CriticalCouplingResult c = critical_coupling_on_grid(shape, grid, 1e-9);
  auto f = [&](double lambda) { return RadialBsFactory(shape.with_strength(lambda), grid).mu(0.0) - 1.0; };

  double a = c.lo * (1.0 - 1e-7);
  double b = c.hi * (1.0 + 1e-7);
  double fa = f(a);
  double fb = f(b);
  if (!(fa < 0.0 && fb > 0.0)) {
    throw ConvergenceError("tune_to_critical: Sturm bracket does not bracket mu(0) = 1", c.iterations);
  }
  // Illinois regula falsi; exact in one step when μ(0) is linear in λ.
  int side = 0;
  double root = a;
  for (int it = 0; it < 60 && (b - a) > 1e-15 * b; ++it) {
    const double x = (a * fb - b * fa) / (fb - fa);
    const double fx = f(x);
    root = x;
    if (fx == 0.0) break;
    if (fx < 0.0) {
      a = x;
      fa = fx;
      if (side == -1) fb *= 0.5;
      side = -1;
    } else {
      b = x;
      fb = fx;
      if (side == 1) fa *= 0.5;
      side = 1;
    }
    if (std::abs(fx) < 1e-14) break;
  }
  double lambda = root * (1.0 - 1e-12);
  for (int guard = 0; guard < 20 && f(lambda) >= 0.0; ++guard) lambda *= 1.0 - 1e-12;
  return lambda;
}

MuScalingReport mu_scan(const PotentialSpec& pot_at_critical, const RadialGrid& grid,
                        const std::vector<double>& eps_list, double fit_lo, double fit_hi) {
  if (eps_list.empty()) throw PreconditionError("mu_scan: empty epsilon list");
  if (!(fit_lo > 0.0 && fit_hi > fit_lo)) throw PreconditionError("mu_scan: bad fit window");
  std::vector<double> eps = eps_list;
  std::sort(eps.begin(), eps.end());
  if (!(eps.front() > 0.0)) throw PreconditionError("mu_scan: epsilons must be positive");

  const RadialBsFactory factory(pot_at_critical, grid);
  const double mu0 = factory.mu(0.0);
  if (mu0 >= 1.0) throw PreconditionError("mu_scan: supercritical tuning, mu(0) = " + num(mu0));
  if (1.0 - mu0 > 1e-8) {
    throw PreconditionError("mu_scan: potential is not tuned to criticality (1 - mu(0) = " +
                            num(1.0 - mu0) + ")");
  }

  MuScalingReport rep;
  rep.fit_lo = fit_lo;
  rep.fit_hi = fit_hi;
  rep.epsilons = eps;
  for (const double e : eps) {
    const double m = factory.mu(e);
    if (m >= 1.0) throw PreconditionError("mu_scan: mu(" + num(e) + ") = " + num(m) + " >= 1");
    if (!rep.mus.empty() && m > rep.mus.back()) {
      throw InternalError("mu_scan: mu increased with epsilon at " + num(e));
    }
    rep.mus.push_back(m);
  }

  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (eps[i] >= fit_lo * (1.0 - 1e-9) && eps[i] <= fit_hi * (1.0 + 1e-9)) {
      xs.push_back(std::log(eps[i]));
      ys.push_back(std::log(1.0 - rep.mus[i]));
    }
  }
  if (xs.size() < 2) throw PreconditionError("mu_scan: fewer than two points in the fit window");
  const double nx = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i] / nx;
    my += ys[i] / nx;
  }
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  rep.fitted_exponent = sxy / sxx;
  rep.a_mu_estimate = std::exp(my - rep.fitted_exponent * mx);
  for (std::size_t i = 1; i < xs.size(); ++i) {
    rep.local_exponents.push_back((ys[i] - ys[i - 1]) / (xs[i] - xs[i - 1]));
  }
  return rep;
}

}  // namespace bscount
