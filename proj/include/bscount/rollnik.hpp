#pragma once

// Rollnik-type norms of the attractive part of a radial potential and the
// Schwinger count bound N ≤ (4π)^{−2}‖v₋‖²_R.

#include "bscount/potential.hpp"
#include "bscount/radial.hpp"

#include <cstddef>
#include <vector>

namespace bscount {

/// Squared norm I = ∫∫ v₋(x)v₋(y)/|x−y|^{2−8γ} d³x d³y after the angular
/// reduction 8π² ∫∫ r r' v₋ v₋ F(r,r') dr dr', with
///   F = ln|(r+r')/(r−r')|                       (γ = 0)
///   F = ((r+r')^{8γ} − |r−r'|^{8γ}) / (8γ)       (γ > 0)
/// Integrates out to a cutoff R_c and throws if I(R_c) and I(R_c/2) differ by
/// more than 1e-3 relative.
double rollnik_integral(const PotentialSpec& pot, double gamma = 0.0);

/// √I.
double rollnik_norm(const PotentialSpec& pot, double gamma = 0.0);

struct SchwingerCheck {
  std::vector<std::size_t> counts_per_ell;  // bound states at ℓ = 0, 1, ...
  std::size_t count_total = 0;               // Σ (2ℓ+1) N_ℓ
  double bound = 0.0;                        // (4π)^{−2} I
  bool holds = false;
};

/// Counts negative eigenvalues of the reduced Hamiltonians ℓ = 0, 1, ... on the
/// template grid (its ell field is overridden) until a wave has none; throws
/// if ℓ = 25 still binds.
SchwingerCheck schwinger_bound_check(const PotentialSpec& pot, const RadialGrid& grid_template);

}  // namespace bscount
