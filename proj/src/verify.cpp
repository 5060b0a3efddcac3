#include "bscount/verify.hpp"

#include "bscount/bsengine.hpp"
#include "bscount/errors.hpp"
#include "bscount/instances.hpp"
#include "bscount/iterbs.hpp"
#include "bscount/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace bscount {

namespace {

using InstanceFn = std::function<VerifyRecord(std::uint64_t seed, std::size_t index)>;

std::vector<VerifyRecord> run_suite(const std::string& name, std::uint64_t tag, std::uint64_t seed,
                                    std::size_t count, int jobs, const InstanceFn& fn) {
  const std::uint64_t suite_seed = derive_seed(seed, tag);
  return parallel_map(count, jobs, [&](std::size_t i) {
    const std::uint64_t s = derive_seed(suite_seed, i);
    VerifyRecord r;
    try {
      r = fn(s, i);
    } catch (const std::exception& e) {
      r = VerifyRecord{};
      r.pass = false;
      r.note = e.what();
    }
    r.suite = name;
    r.index = i;
    r.seed = s;
    return r;
  });
}

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace

std::vector<VerifyRecord> verify_bs_equality(std::uint64_t seed, std::size_t count, int jobs) {
  return run_suite("bs_equality", 1, seed, count, jobs, [](std::uint64_t s, std::size_t i) {
    InstanceOptions opt;
    opt.indefinite = (i % 2) == 1;
    const BsProblem p = random_bs_problem(s, opt);
    const CountPair c = count_with_jitter(p);
    VerifyRecord r;
    r.dim = p.A.dim();
    r.lhs = static_cast<double>(c.bs);
    r.rhs = static_cast<double>(c.direct);
    r.pass = c.bs == c.direct;
    if (c.jitters > 0) r.note = "epsilon jittered " + std::to_string(c.jitters) + "x";
    return r;
  });
}

std::vector<VerifyRecord> verify_bs_inequality(std::uint64_t seed, std::size_t count, int jobs) {
  return run_suite("bs_inequality", 2, seed, count, jobs, [](std::uint64_t s, std::size_t i) {
    InstanceOptions opt;
    opt.zero_mode = true;
    opt.indefinite = (i % 2) == 1;
    const BsProblem p = random_bs_problem(s, opt);
    const CountPair c = count_with_jitter(p);
    VerifyRecord r;
    r.dim = p.A.dim();
    r.lhs = static_cast<double>(c.bs);
    r.rhs = static_cast<double>(c.direct);
    r.pass = c.bs >= c.direct;
    if (c.jitters > 0) r.note = "epsilon jittered " + std::to_string(c.jitters) + "x";
    return r;
  });
}

std::vector<VerifyRecord> verify_bs_bounded(std::uint64_t seed, std::size_t count, int jobs) {
  return run_suite("bs_bounded", 3, seed, count, jobs, [](std::uint64_t s, std::size_t i) {
    InstanceOptions opt;
    opt.a_floor = 0.5;
    opt.indefinite = (i % 2) == 1;
    const BsProblem p = random_bs_problem(s, opt);
    const SymOperator k0 = bs_operator_bounded(p.A, p.B);
    VerifyRecord r;
    r.dim = p.A.dim();
    r.lhs = static_cast<double>(count_evs(k0, Relation::Greater, 1.0));
    r.rhs = static_cast<double>(count_evs(p.A + p.B, Relation::Less, 0.0));
    r.pass = r.lhs == r.rhs;
    return r;
  });
}

std::vector<VerifyRecord> verify_iterbs(std::uint64_t seed, std::size_t count, int jobs) {
  return run_suite("iterbs", 4, seed, count, jobs, [](std::uint64_t s, std::size_t i) {
    Rng rng(s);
    const Index dim = std::uniform_int_distribution<Index>(4, 16)(rng);
    const int steps = 1 + static_cast<int>(i % 3);
    const IterbsCase c = random_iterbs_case(s, dim, steps);
    const auto stages = iterate(c.K_total, c.steps);
    VerifyRecord r;
    r.dim = dim;
    r.rhs = static_cast<double>(stages.front().count);
    r.lhs = r.rhs;
    bool invariant = true;
    for (const IterStage& st : stages) {
      r.residual = std::max(r.residual, st.residual);
      if (st.count != stages.front().count) {
        invariant = false;
        r.lhs = static_cast<double>(st.count);
      }
    }
    r.pass = invariant && r.residual <= 1e-8;
    r.note = std::to_string(steps) + " steps";
    return r;
  });
}

std::vector<VerifyRecord> verify_hs_bound(std::uint64_t seed, std::size_t count, int jobs) {
  return run_suite("hs_bound", 5, seed, count, jobs, [](std::uint64_t s, std::size_t i) {
    Rng rng(s);
    const Index n = std::uniform_int_distribution<Index>(2, 20)(rng);
    VerifyRecord r;
    r.dim = n;
    const bool extremal = (i % 4) == 3;
    if (extremal) {
      const Index rank = std::uniform_int_distribution<Index>(1, n)(rng);
      const double delta = uniform(rng, 0.1, 3.0);
      const Matrix q = random_orthogonal(n, rng).leftCols(rank);
      const SymOperator a = SymOperator::symmetrized(delta * q * q.transpose());
      const HsBoundResult h = hs_count_bound_check(a, delta, q);
      r.lhs = static_cast<double>(h.n);
      r.rhs = h.bound;
      r.residual = std::abs(h.bound - static_cast<double>(h.n)) / static_cast<double>(h.n);
      r.pass = h.holds && r.residual <= 1e-9;
      r.note = "extremal";
      return r;
    }
    const SymOperator a = random_symmetric(n, rng, uniform(rng, 0.5, 3.0));
    const SpectralDecomp d = spectral_decompose(a);
    const double top = d.eigenvalues.cwiseAbs().maxCoeff();
    const double delta = uniform(rng, 0.1, 0.9) * top;
    std::vector<Index> keep;
    for (Index j = 0; j < n; ++j)
      if (std::abs(d.eigenvalues(j)) >= delta) keep.push_back(j);
    Matrix v(n, static_cast<Index>(keep.size()));
    for (std::size_t j = 0; j < keep.size(); ++j) v.col(static_cast<Index>(j)) = d.eigenvectors.col(keep[j]);
    const HsBoundResult h = hs_count_bound_check(a, delta, v);
    r.lhs = static_cast<double>(h.n);
    r.rhs = h.bound;
    r.pass = h.holds;
    return r;
  });
}

std::vector<VerifyRecord> verify_rank_one(std::uint64_t seed, std::size_t count, int jobs) {
  return run_suite("rank_one", 6, seed, count, jobs, [](std::uint64_t s, std::size_t i) {
    Rng rng(s);
    const Index n = std::uniform_int_distribution<Index>(2, 20)(rng);
    Vector d(n);
    for (Index j = 0; j < n; ++j) d(j) = uniform(rng, 0.0, 5.0);
    if (i % 2 == 0) d(0) = 0.0;
    const Matrix q = random_orthogonal(n, rng);
    const SymOperator a = SymOperator::symmetrized(q * d.asDiagonal() * q.transpose());
    const Vector f = random_unit_vector(n, rng);
    const double eps0 = uniform(rng, 0.01, 1.0);
    const double c = uniform(rng, 0.05, 1.5);
    const RankOneDomination rd = rank_one_domination(f, a, eps0, c);
    VerifyRecord r;
    r.dim = n;
    r.lhs = rd.max_eig;
    r.rhs = c;
    r.residual = std::max(0.0, rd.max_eig - c);
    r.pass = rd.max_eig <= c + 1e-10 * (1.0 + c);
    return r;
  });
}

std::vector<VerifyRecord> verify_mu_monotone(std::uint64_t seed, std::size_t count, int jobs) {
  return run_suite("mu_monotone", 7, seed, count, jobs, [](std::uint64_t s, std::size_t) {
    InstanceOptions opt;
    opt.indefinite = false;
    const BsProblem p = random_bs_problem(s, opt);
    int violations = 0;
    double prev = 0.0;
    for (int k = 0; k < 10; ++k) {
      const double eps = std::pow(10.0, -3.0 + 4.0 * k / 9.0);
      const double mu = mu_max(BsProblem(p.A, p.B, eps));
      if (k > 0 && !(mu < prev)) ++violations;
      prev = mu;
    }
    VerifyRecord r;
    r.dim = p.A.dim();
    r.lhs = violations;
    r.rhs = 0.0;
    r.pass = violations == 0;
    return r;
  });
}

SuiteSummary summarize(const std::string& name, const std::vector<VerifyRecord>& records) {
  SuiteSummary s;
  s.name = name;
  s.total = records.size();
  for (const VerifyRecord& r : records) {
    if (r.pass) ++s.passed;
    else if (s.first_failure.empty()) {
      s.first_failure = name + "[" + std::to_string(r.index) + "]" + (r.note.empty() ? "" : ": " + r.note);
    }
    if (std::isfinite(r.residual)) s.max_residual = std::max(s.max_residual, r.residual);
  }
  return s;
}

}  // namespace bscount
