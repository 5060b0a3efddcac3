#pragma once

// Birman–Schwinger operators and bound-state counting in finite dimension.
//
// Sign convention: K(ε) = −(A+ε)^{-1/2} B (A+ε)^{-1/2}, so bound states of
// A+B below −ε correspond to eigenvalues of K(ε) above 1.

#include "bscount/linop.hpp"

#include <cstddef>
#include <cstdint>

namespace bscount {

struct BsProblem {
  SymOperator A;
  SymOperator B;
  double epsilon;

  /// Validates A ⪰ 0 (up to the guard band), matching dimensions and ε > 0.
  BsProblem(SymOperator a, SymOperator b, double eps);
};

SymOperator bs_operator(const BsProblem& p);

/// K(0) = −A^{-1/2} B A^{-1/2}; requires A ≻ 0 beyond the guard band.
SymOperator bs_operator_bounded(const SymOperator& a, const SymOperator& b);

/// #(evs(A+B) < −ε).
std::size_t count_direct(const BsProblem& p);

/// #(evs(K(ε)) > 1). Throws ThresholdCollision when A+B has an eigenvalue within
/// the guard band of −ε, or K(ε) one within its guard band of 1.
std::size_t count_bs(const BsProblem& p);

/// sup σ(K(ε)).
double mu_max(const BsProblem& p);

struct CriticalCouplingResult {
  double lambda_star = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  int iterations = 0;
  double residual_min_eig = 0.0;
};

/// λ* = sup{λ ≥ 0 : min eig(A+λB) ≥ −η} with η = guard_band(A), bisected to
/// hi − lo ≤ tol after bracketing by doubling from 1 (capped at 1e6).
CriticalCouplingResult critical_coupling(const SymOperator& a, const SymOperator& b, double tol);

struct HsBoundResult {
  bool holds = false;
  std::size_t n = 0;
  double bound = 0.0;
};

/// Given orthonormal columns φ_i with |(φ_i, Aφ_i)| ≥ δ, checks n ≤ ‖A‖²_HS/δ².
HsBoundResult hs_count_bound_check(const SymOperator& a, double delta, const Matrix& vectors);

struct RankOneDomination {
  double L = 0.0;
  double k0 = 0.0;
  double max_eig = 0.0;  // max eig(ffᵀ − L(A+ε₀)^{-1}), verified ≤ c
};

/// Returns L with ffᵀ − L(A+ε₀)^{-1} ≤ c, built from the spectral cutoff k₀ at
/// which the weight of f above k₀ drops below c/2, and L = 2(k₀+ε₀).
RankOneDomination rank_one_domination(const Vector& f, const SymOperator& a, double epsilon0,
                                      double c);

}  // namespace bscount
