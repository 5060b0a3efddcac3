#pragma once

// Seeded property corpora over the finite-dimensional engine.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace bscount {

struct VerifyRecord {
  std::string suite;
  std::size_t index = 0;
  std::uint64_t seed = 0;
  long dim = 0;
  double lhs = 0.0;       // suite-specific: e.g. count_bs, n, max eigenvalue
  double rhs = 0.0;       // the value lhs is compared against
  double residual = 0.0;  // numerical residual where one applies
  bool pass = false;
  std::string note;
};

struct SuiteSummary {
  std::string name;
  std::size_t total = 0;
  std::size_t passed = 0;
  double max_residual = 0.0;
  std::string first_failure;  // empty when everything passed

  bool ok() const { return total > 0 && passed == total; }
};

/// count_bs == count_direct, A ≻ 0, B alternating sign-definite/indefinite.
std::vector<VerifyRecord> verify_bs_equality(std::uint64_t seed, std::size_t count, int jobs);
/// count_bs ≥ count_direct with a zero mode in A.
std::vector<VerifyRecord> verify_bs_inequality(std::uint64_t seed, std::size_t count, int jobs);
/// #(evs(K(0)) > 1) == #(evs(A+B) < 0) for A ⪰ αI.
std::vector<VerifyRecord> verify_bs_bounded(std::uint64_t seed, std::size_t count, int jobs);
/// Count invariance and recurrence consistency over 1–3 projection steps.
std::vector<VerifyRecord> verify_iterbs(std::uint64_t seed, std::size_t count, int jobs);
/// n ≤ ‖A‖²_HS/δ² on random instances; every fourth one from the extremal family δ·P.
std::vector<VerifyRecord> verify_hs_bound(std::uint64_t seed, std::size_t count, int jobs);
/// The rank-one domination L verifies max eig(ffᵀ − L(A+ε₀)^{-1}) ≤ c.
std::vector<VerifyRecord> verify_rank_one(std::uint64_t seed, std::size_t count, int jobs);
/// μ(ε) nonincreasing on a 10-point ε grid for B ⪯ 0.
std::vector<VerifyRecord> verify_mu_monotone(std::uint64_t seed, std::size_t count, int jobs);

SuiteSummary summarize(const std::string& name, const std::vector<VerifyRecord>& records);

}  // namespace bscount
