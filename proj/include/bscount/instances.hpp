#pragma once

// Seeded random instance generators for the property corpora.

#include "bscount/bsengine.hpp"
#include "bscount/iterbs.hpp"
#include "bscount/linop.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace bscount {

inline constexpr std::uint64_t kDefaultSeed = 0xB5C0;

using Rng = std::mt19937_64;

/// Independent per-item seed; lets corpora run in any order with identical results.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

Matrix random_orthogonal(Index n, Rng& rng);
Vector random_unit_vector(Index n, Rng& rng);
SymOperator random_symmetric(Index n, Rng& rng, double scale = 1.0);

struct InstanceOptions {
  Index dim_min = 2;
  Index dim_max = 20;
  bool zero_mode = false;   // force a zero eigenvalue of A
  bool indefinite = false;  // add symmetric noise so B takes both signs
  double a_floor = 0.0;     // lower end of A's spectrum (positive for A ≻ αI)
};

/// A = QᵀDQ with D uniform on [a_floor, 5], B = −GᵀG (+ noise when indefinite).
BsProblem random_bs_problem(std::uint64_t seed, const InstanceOptions& opt);

struct CountPair {
  std::size_t direct = 0;
  std::size_t bs = 0;
  double epsilon = 0.0;  // the ε actually used
  int jitters = 0;
};

/// Runs count_direct and count_bs, nudging ε by 1e-6 relative on threshold collisions.
CountPair count_with_jitter(const BsProblem& p, int max_jitters = 20);

struct IterbsCase {
  SymOperator K_total;
  std::vector<ProjectionStep> steps;
};

/// K_total is the BS operator of a random problem. Each step j picks a random unit
/// φ_j and μ_j in [0.2, 0.8], sets K_j = μ_j φφᵀ + (1−φφᵀ)S_j(1−φφᵀ) for random
/// symmetric S_j and L_j = K_total − K_j, so φ_j is an eigenvector of K_j.
IterbsCase random_iterbs_case(std::uint64_t seed, Index dim, int n_steps);

}  // namespace bscount
