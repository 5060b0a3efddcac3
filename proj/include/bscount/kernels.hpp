#pragma once

// Integral kernel of (−Δ + ε)^{−p} in three dimensions, p = 1 + 2γ.

namespace bscount {

enum class Substitution {
  LogVariable,  // u = e^x on the real line, Gauss–Kronrod
  PowerVariable // the t = u^p form on (0, ∞), exp-sinh
};

struct ResolventKernelValue {
  double value = 0.0;
  double bound = 0.0;  // C_p R^{−(3−2p)}, the ε = 0 value of the kernel
  bool within_bound = false;
};

/// G_γ(ε;R) = (4π)^{−3/2}[pΓ(p)]^{−1} ∫₀^∞ t^{−3/(2p)} exp(−εt^{1/p} − R²t^{−1/p}/4) dt.
/// Requires γ ≥ 0 with p < 3/2, ε > 0, R > 0.
ResolventKernelValue resolvent_power_kernel(double gamma, double epsilon, double R,
                                            Substitution sub = Substitution::LogVariable);

/// 2^{−2p} Γ(3/2−p) / (π^{3/2} Γ(p)).
double resolvent_power_bound_constant(double p);

}  // namespace bscount
