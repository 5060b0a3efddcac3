#pragma once

// Three identical bosons with a rank-one separable pair force
//   V = −λ|g⟩⟨g|,  g(p) = 1/(p² + β²)
// in units where the two-body kinetic energy is p². The s-wave Faddeev
// reduction gives a one-dimensional kernel Λ(E) in the spectator momentum;
// trimers at energy E correspond to eigenvalues of Λ(E) equal to 1. The
// derivation of the kernel coefficients is in docs/three_boson_kernel.md.

#include "bscount/linop.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bscount {

struct JacobiCoeffs {
  Eigen::Matrix2d a;
};

/// a₁₁ = −[m₁m₂/((M−m₁)(M−m₂))]^{1/2}, a₁₂ = [M(M−m₁−m₂)/((M−m₁)(M−m₂))]^{1/2},
/// a₂₁ = a₁₂, a₂₂ = −a₁₁, with M the total mass of the N ≥ 3 particles.
JacobiCoeffs jacobi_pair_coeffs(const std::vector<double>& masses);

enum class MomentumMap { Log, Rational };

MomentumMap parse_momentum_map(std::string_view name);
std::string to_string(MomentumMap map);

struct SeparableModel {
  double beta = 1.0;
  double lambda = 0.0;
  double p_min = 1e-8;  // lower end of the log map
  double p_max = 100.0;
  int n_p = 512;
  int n_x = 32;  // Gauss–Legendre points for the angle average
  std::vector<double> masses{1.0, 1.0, 1.0};
  MomentumMap map = MomentumMap::Log;
  double map_c = 3.0;  // rational map p = p_max·t/(1 + c(1−t))

  void validate() const;
};

/// Closed form β³/π².
double lambda_unitary(double beta);
/// 1/(4π∫₀^∞ g(q)² dq) by quadrature.
double lambda_unitary_quadrature(double beta);

/// Two-body bubble 4π∫ q² g(q)²/(q² − z) dq = π²/(β(β+κ)²), κ = √(−z), z ≤ 0.
double two_body_bubble(double beta, double z);

/// Dimer energy −κ_d² when λ > λ_u.
std::optional<double> dimer_energy(const SeparableModel& m);

/// Number of two-body bound states (0 or 1).
int two_body_bound_count(const SeparableModel& m);

struct MomentumGrid {
  Vector q;  // nodes
  Vector w;  // weights in dq
};

MomentumGrid momentum_grid(const SeparableModel& m);

struct ThreeBosonKernel {
  SymOperator kernel;
  bool cutoff_warning = false;  // |E| close to the resolution limits of the grid
};

ThreeBosonKernel three_boson_kernel(const SeparableModel& m, double E);
ThreeBosonKernel three_boson_kernel(const SeparableModel& m, const MomentumGrid& grid, double E);

/// #(evs(Λ(E)) > 1): the number of trimers below E.
std::size_t trimer_count(const SeparableModel& m, const MomentumGrid& grid, double E);

/// Largest |E| the grid resolves reliably near threshold: (30·p_min)².
double infrared_ceiling(const SeparableModel& m);

struct TrimerLevels {
  std::vector<double> energies;  // ascending (deepest first)
  int count_at_floor = 0;        // levels below E_floor, not resolved
  bool monotone = true;          // count nondecreasing as E → 0 along the scan
};

/// All crossings in (E_floor, E_ceil), each bisected in ln|E| to rel_tol.
TrimerLevels trimer_levels(const SeparableModel& m, double e_floor, double e_ceil,
                           double rel_tol = 1e-10, int jobs = 1);

/// Levels at unitarity between E_floor and the infrared ceiling. Requires
/// λ = λ_u within 1e-8 relative; throws when fewer than 3 levels are found.
std::vector<double> efimov_spectrum(const SeparableModel& m, double e_floor, int jobs = 1);

struct S0Result {
  double s0 = 0.0;
  double ratio = 0.0;  // e^{2π/s₀}
  double residual = 0.0;
  double bracket_lo_residual = 0.0;
  double bracket_hi_residual = 0.0;
};

/// Root of s·cosh(πs/2) = (8/√3)·sinh(πs/6) in (0, 2) by bisection.
S0Result s0_oracle();

}  // namespace bscount
