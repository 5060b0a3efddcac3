#pragma once

// Successive BS transforms with projection subtraction:
//   T_k = (1−μ_k P_k)^{-1/2} (T_{k−1} − μ_k P_k) (1−μ_k P_k)^{-1/2},
// and the bookkeeping T_k = K − Σ_{i≤k} μ_i P_i + M_k.

#include "bscount/linop.hpp"

#include <cstddef>
#include <vector>

namespace bscount {

inline constexpr double kRCompatibilityTol = 1e-6;

struct ProjectionStep {
  SymOperator P;
  double mu;
  SymOperator K_part;
  SymOperator L_part;

  /// Checks P² = P, μ ∈ (0,1) and K_part + L_part = K_total. With
  /// require_spectral (the default) also ‖(K_part − μP)P‖_F ≤ 1e-8.
  ProjectionStep(SymOperator p, double mu, SymOperator k_part, SymOperator l_part,
                 const SymOperator& k_total, bool require_spectral = true);

  double r_compatibility_residual() const;
};

/// (1 − μP)^{-1/2} = 1 + (1/√(1−μ) − 1)P for rank-one P; spectral calculus otherwise.
SymOperator inv_sqrt_one_minus(const SymOperator& p, double mu);

/// R = (1−μP)^{-1/2} − 1.
SymOperator r_operator(const SymOperator& p, double mu);

SymOperator bs_step(const SymOperator& t, const ProjectionStep& step);

struct IterStage {
  int k = 0;
  SymOperator T;
  Matrix M;
  std::size_t count = 0;  // #(evs(T_k) > 1)
  double hs_norm_M = 0.0;
  double residual = 0.0;  // ‖T_k − (K − Σ μ_i P_i + M_k)‖_F
};

/// Stages k = 0..steps.size(), stage 0 being K_total itself.
std::vector<IterStage> iterate(const SymOperator& k_total, const std::vector<ProjectionStep>& steps);

}  // namespace bscount
