#pragma once

// Partial-wave reduction of H = −Δ + v on (0, r_max) with Dirichlet ends.
//
// Finite-volume scheme on half-step nodes: the mesh s_j = j·h_s is mapped to
// radii either uniformly (r = s) or through r = r0·sinh(s), which keeps the
// spacing fine near the potential and coarse out to very large r_max. Nodes
// sit at cell midpoints in s, so the centrifugal term never hits r = 0.

#include "bscount/bsengine.hpp"
#include "bscount/linop.hpp"
#include "bscount/potential.hpp"
#include "bscount/tridiagonal.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace bscount {

enum class GridScheme { UniformFd2, Sinh };

GridScheme parse_grid_scheme(std::string_view name);
std::string to_string(GridScheme scheme);

struct RadialGrid {
  int ell = 0;
  double r_max = 20.0;
  Index n = 1000;
  GridScheme scheme = GridScheme::UniformFd2;
  double r0 = 1.0;  // sinh scale length

  void validate() const;
  RadialGrid refined(Index factor = 2) const;
};

struct GridGeometry {
  Vector nodes;    // r_j, size n
  Vector faces;    // f_0 = 0 .. f_n = r_max, size n+1
  Vector volumes;  // f_j − f_{j−1}
  Vector flux;     // node-to-node distances incl. both boundaries, size n+1
};

GridGeometry grid_geometry(const RadialGrid& grid);

/// Advisory messages (e.g. r_max not well beyond the potential range).
std::vector<std::string> grid_warnings(const PotentialSpec& pot, const RadialGrid& grid);

/// Kinetic plus centrifugal part, in the symmetric D^{1/2}-weighted form.
Tridiagonal free_hamiltonian(const RadialGrid& grid);
/// Net potential per cell.
Vector cell_potential(const PotentialSpec& pot, const RadialGrid& grid);

Tridiagonal reduced_hamiltonian_tridiagonal(const PotentialSpec& pot, const RadialGrid& grid);
SymOperator reduced_hamiltonian(const PotentialSpec& pot, const RadialGrid& grid);

/// #(evs(H) < −ε) by Sturm count; ε = 0 counts strictly negative eigenvalues.
std::size_t count_bound_states_radial(const PotentialSpec& pot, const RadialGrid& grid,
                                      double epsilon);

/// Reduced free resolvent (−d²/dr² + ℓ(ℓ+1)/r² + ε)^{-1} in the weighted form
/// D^{1/2} G D^{1/2}. For ℓ = 0 the Dirichlet box kernel
///   G(r,r') = sinh(κr<) sinh(κ(r_max−r>)) / (κ sinh(κ r_max)),
/// otherwise the inverse of the discrete operator.
SymOperator green_kernel(double epsilon, const RadialGrid& grid);

/// Continuum ℓ-wave resolvent kernel κ r r' i_ℓ(κr<) k_ℓ(κr>) on the half line.
double radial_green_continuum(int ell, double kappa, double r, double rp);

/// 3D free resolvent at separation built from partial waves up to ell_max:
/// Σ_ℓ (2ℓ+1)/(4π r r') g_ℓ(r,r') P_ℓ(cos θ).
double green_3d_partial_waves(double epsilon, double r, double rp, double cos_theta, int ell_max);

/// e^{−κR}/(4πR).
double green_3d_closed_form(double epsilon, double distance);

enum class KernelForm { Full, Compact };

/// K(ε) = (H₀+V⁺+ε)^{-1/2} V₋ (H₀+V⁺+ε)^{-1/2} (full, n×n) or the similar
/// √V₋ (H₀+V⁺+ε)^{-1} √V₋ restricted to the support of V₋ (compact). Both
/// share their nonzero spectrum.
SymOperator bs_kernel_radial(const PotentialSpec& pot, const RadialGrid& grid, double epsilon,
                             KernelForm form = KernelForm::Compact);

/// Precomputed eigenbasis of H₀+V⁺ for repeated compact-kernel evaluations.
class RadialBsFactory {
 public:
  RadialBsFactory(const PotentialSpec& pot, const RadialGrid& grid);
  /// Compact kernel at shift ε ≥ 0 (ε = 0 allowed since the box operator is positive).
  SymOperator kernel(double epsilon) const;
  double mu(double epsilon) const;
  Index support_size() const { return x_.rows(); }

 private:
  Vector w_;  // eigenvalues of H₀+V⁺
  Matrix x_;  // √v₋ on support rows times eigenvectors
};

/// λ* for v = −λ·shape on the given grid and on the refined grid; the two must
/// agree within tol/2 relative. Bisection on λ with Sturm counts below 0.
struct RadialCriticalResult {
  CriticalCouplingResult coarse;
  CriticalCouplingResult fine;
  double lambda_star = 0.0;  // fine-grid value
  double relative_gap = 0.0;
};

CriticalCouplingResult critical_coupling_on_grid(const PotentialSpec& shape, const RadialGrid& grid,
                                                 double tol);
RadialCriticalResult find_critical_coupling_radial(const PotentialSpec& shape,
                                                   const RadialGrid& grid, double tol);

/// Strength just below the discrete critical coupling (relative 1e-12), so that
/// μ(0) < 1 with 1 − μ(0) ~ 1e-12.
double tune_to_critical(const PotentialSpec& shape, const RadialGrid& grid);

struct MuScalingReport {
  std::vector<double> epsilons;
  std::vector<double> mus;
  double fitted_exponent = 0.0;
  double fit_lo = 1e-6;
  double fit_hi = 1e-4;
  double a_mu_estimate = 0.0;
  std::vector<double> local_exponents;  // slopes between successive points in the window
};

/// μ(ε) over eps_list and the log–log fit of 1 − μ against ε on [fit_lo, fit_hi].
MuScalingReport mu_scan(const PotentialSpec& pot_at_critical, const RadialGrid& grid,
                        const std::vector<double>& eps_list, double fit_lo = 1e-6,
                        double fit_hi = 1e-4);

}  // namespace bscount
