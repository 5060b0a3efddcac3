#include "bscount/cli/run.hpp"

#include "bscount/cli/config.hpp"
#include "bscount/cli/report.hpp"
#include "bscount/efimov.hpp"
#include "bscount/errors.hpp"
#include "bscount/instances.hpp"
#include "bscount/iterbs.hpp"
#include "bscount/kernels.hpp"
#include "bscount/parallel.hpp"
#include "bscount/radial.hpp"
#include "bscount/verify.hpp"

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>

#ifndef BSCOUNT_VERSION
#define BSCOUNT_VERSION "0.0.0"
#endif

namespace bscount::cli {

const char* version() { return BSCOUNT_VERSION; }

namespace {

using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

std::shared_ptr<spdlog::logger> logger() {
  static std::shared_ptr<spdlog::logger> lg = [] {
    auto l = spdlog::stderr_color_mt("bscount");
    l->set_pattern("[%l] %v");
    spdlog::level::level_enum level = spdlog::level::info;
    if (const char* env = std::getenv("BSCOUNT_LOG")) {
      const std::string v = env;
      if (v == "error") level = spdlog::level::err;
      else if (v == "debug") level = spdlog::level::debug;
      else if (v != "info") l->warn("BSCOUNT_LOG='{}' not one of error|info|debug; using info", v);
    }
    l->set_level(level);
    return l;
  }();
  return lg;
}

struct Outcome {
  CsvTable csv{{}};
  std::vector<Check> checks;
  json results = json::object();
};

struct Context {
  const Config& cfg;
  std::uint64_t seed;
  int jobs;
};

std::vector<double> logspace(double lo, double hi, int n) {
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(std::pow(10.0, lo + (hi - lo) * i / (n - 1)));
  return v;
}

// Enum-valued keys report their location when the value is not recognised.
template <class Parser>
auto enum_value(const Config& cfg, const std::string& key, const std::string& fallback, Parser parse) {
  const std::string s = cfg.get_string(key, fallback);
  try {
    return parse(s);
  } catch (const std::invalid_argument& e) {
    const auto& v = cfg.entries().at(key);
    throw ParseError(cfg.source(), v.line, v.column, e.what());
  }
}

Shape shape_from(const Config& cfg, const std::string& prefix) {
  const ShapeKind kind = enum_value(cfg, prefix + ".kind", "square_well", parse_shape_kind);
  if (kind == ShapeKind::Table) {
    const std::string path = cfg.get_string(prefix + ".table", "");
    try {
      return Shape::table_from_file(path);
    } catch (const std::invalid_argument&) {
      throw;
    } catch (const std::runtime_error& e) {
      throw IoError(e.what());
    }
  }
  Shape s;
  s.kind = kind;
  s.range = cfg.get_number(prefix + ".range", 1.0);
  return s;
}

PotentialSpec potential_from(const Config& cfg) {
  PotentialSpec p;
  p.attractive = shape_from(cfg, "potential");
  p.strength = cfg.get_number("potential.strength", 1.0);
  if (cfg.has("potential.repulsive.kind")) {
    p.repulsive = shape_from(cfg, "potential.repulsive");
    p.repulsive_strength = cfg.get_number("potential.repulsive.strength", 0.0);
  }
  p.validate();
  return p;
}

RadialGrid grid_from(const Config& cfg, const PotentialSpec& pot) {
  RadialGrid g;
  g.ell = static_cast<int>(cfg.get_int("grid.ell", 0));
  g.scheme = enum_value(cfg, "grid.scheme", "sinh", parse_grid_scheme);
  g.r_max = cfg.get_number("grid.r_max", g.scheme == GridScheme::Sinh ? 1e5 : 40.0);
  g.n = cfg.get_int("grid.n", 2000);
  g.r0 = cfg.get_number("grid.r0", pot.attractive.kind == ShapeKind::Table ? 1.0 : pot.attractive.range);
  g.validate();
  return g;
}

// ---------------------------------------------------------------- verify

Outcome run_verify(const Context& ctx) {
  Outcome out;
  out.csv = CsvTable({"suite", "index", "seed", "dim", "lhs", "rhs", "residual", "pass", "note"});
  struct Suite {
    const char* name;
    long fallback;
    std::vector<VerifyRecord> (*fn)(std::uint64_t, std::size_t, int);
  };
  const Suite suites[] = {
      {"bs_equality", 500, verify_bs_equality},   {"bs_inequality", 500, verify_bs_inequality},
      {"bs_bounded", 200, verify_bs_bounded},     {"iterbs", 200, verify_iterbs},
      {"hs_bound", 200, verify_hs_bound},         {"rank_one", 200, verify_rank_one},
      {"mu_monotone", 100, verify_mu_monotone},
  };
  for (const Suite& s : suites) {
    const long n = ctx.cfg.get_int(std::string("verify.") + s.name, s.fallback);
    if (n <= 0) continue;
    const auto records = s.fn(ctx.seed, static_cast<std::size_t>(n), ctx.jobs);
    for (const VerifyRecord& r : records) {
      out.csv.row()
          .add(r.suite)
          .add(r.index)
          .add(static_cast<unsigned long long>(r.seed))
          .add(static_cast<long long>(r.dim))
          .add(r.lhs)
          .add(r.rhs)
          .add(r.residual)
          .add(r.pass)
          .add(r.note);
    }
    const SuiteSummary sum = summarize(s.name, records);
    logger()->info("{}: {}/{} pass", s.name, sum.passed, sum.total);
    out.checks.push_back({s.name, sum.ok(),
                          std::to_string(sum.passed) + "/" + std::to_string(sum.total) + " pass" +
                              (sum.first_failure.empty() ? "" : "; first failure " + sum.first_failure)});
    out.results[s.name] = {{"passed", sum.passed}, {"total", sum.total}, {"max_residual", sum.max_residual}};
  }
  return out;
}

// ---------------------------------------------------------------- twobody

Outcome run_twobody_counts(const Context& ctx, const PotentialSpec& pot, const RadialGrid& grid) {
  Outcome out;
  out.csv = CsvTable({"strength", "ell", "epsilon", "count_direct", "count_bs", "agree"});
  const auto strengths = ctx.cfg.get_array("scan.strengths", {pot.strength});
  const auto epsilons = ctx.cfg.get_array("scan.epsilons", {1e-3, 1e-2, 1e-1});
  const auto ells = ctx.cfg.get_array("scan.ells", {static_cast<double>(grid.ell)});
  struct Task {
    double lambda;
    int ell;
    double eps;
  };
  std::vector<Task> tasks;
  for (const double l : strengths)
    for (const double e : ells)
      for (const double eps : epsilons) tasks.push_back({l, static_cast<int>(e), eps});
  struct Res {
    std::size_t direct, bs;
  };
  const auto res = parallel_map(tasks.size(), ctx.jobs, [&](std::size_t i) {
    const Task& t = tasks[i];
    RadialGrid g = grid;
    g.ell = t.ell;
    const PotentialSpec p = pot.with_strength(t.lambda);
    const std::size_t direct = count_bound_states_radial(p, g, t.eps);
    const SymOperator k = bs_kernel_radial(p, g, t.eps, KernelForm::Compact);
    return Res{direct, count_evs(k, Relation::Greater, 1.0)};
  });
  std::size_t agree = 0;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const bool ok = res[i].direct == res[i].bs;
    agree += ok;
    out.csv.row().add(tasks[i].lambda).add(tasks[i].ell).add(tasks[i].eps).add(res[i].direct).add(res[i].bs).add(ok);
  }
  out.checks.push_back({"direct_bs_agreement", agree == tasks.size(),
                        std::to_string(agree) + "/" + std::to_string(tasks.size()) + " cases agree"});
  return out;
}

Outcome run_twobody_critical(const Context& ctx, const PotentialSpec& pot, const RadialGrid& grid) {
  Outcome out;
  out.csv = CsvTable({"ell", "n", "lambda_coarse", "lambda_fine", "relative_gap", "lambda_times_range_sq"});
  const double tol = ctx.cfg.get_number("scan.tol", 1e-3);
  const auto ells = ctx.cfg.get_array("scan.ells", {static_cast<double>(grid.ell)});
  const auto res = parallel_map(ells.size(), ctx.jobs, [&](std::size_t i) {
    RadialGrid g = grid;
    g.ell = static_cast<int>(ells[i]);
    return find_critical_coupling_radial(pot, g, tol);
  });
  for (std::size_t i = 0; i < ells.size(); ++i) {
    const double a = pot.attractive.range;
    out.csv.row()
        .add(static_cast<int>(ells[i]))
        .add(static_cast<long long>(grid.n))
        .add(res[i].coarse.lambda_star)
        .add(res[i].fine.lambda_star)
        .add(res[i].relative_gap)
        .add(res[i].lambda_star * a * a);
    out.checks.push_back({"grid_agreement_ell" + std::to_string(static_cast<int>(ells[i])),
                          res[i].relative_gap <= 0.5 * tol,
                          "relative gap " + format_double(res[i].relative_gap)});
  }
  return out;
}

Outcome run_twobody_mu_scan(const Context& ctx, const PotentialSpec& pot, const RadialGrid& grid) {
  Outcome out;
  out.csv = CsvTable({"ell", "n", "lambda", "epsilon", "mu", "one_minus_mu"});
  const auto eps = ctx.cfg.get_array("scan.epsilons", logspace(-6.0, -4.0, 9));
  const auto ells = ctx.cfg.get_array("scan.ells", {0.0, 1.0});
  const double fit_lo = ctx.cfg.get_number("scan.fit_lo", 1e-6);
  const double fit_hi = ctx.cfg.get_number("scan.fit_hi", 1e-4);
  const double agreement = ctx.cfg.get_number("scan.agreement", 0.05);
  struct Res {
    double lambda;
    MuScalingReport rep;
  };
  const std::size_t tasks = 2 * ells.size();
  const auto res = parallel_map(tasks, ctx.jobs, [&](std::size_t i) {
    RadialGrid g = grid.refined(i % 2 == 0 ? 1 : 2);
    g.ell = static_cast<int>(ells[i / 2]);
    const double lambda = tune_to_critical(pot, g);
    return Res{lambda, mu_scan(pot.with_strength(lambda), g, eps, fit_lo, fit_hi)};
  });
  for (std::size_t i = 0; i < tasks; ++i) {
    const int ell = static_cast<int>(ells[i / 2]);
    const long long n = grid.n * (i % 2 == 0 ? 1 : 2);
    for (std::size_t k = 0; k < res[i].rep.epsilons.size(); ++k) {
      out.csv.row().add(ell).add(n).add(res[i].lambda).add(res[i].rep.epsilons[k]).add(res[i].rep.mus[k]).add(1.0 - res[i].rep.mus[k]);
    }
  }
  for (std::size_t j = 0; j < ells.size(); ++j) {
    const int ell = static_cast<int>(ells[j]);
    const double e1 = res[2 * j].rep.fitted_exponent;
    const double e2 = res[2 * j + 1].rep.fitted_exponent;
    out.results["ell" + std::to_string(ell)] = {{"exponent_n", e1},
                                                 {"exponent_2n", e2},
                                                 {"a_mu", res[2 * j + 1].rep.a_mu_estimate},
                                                 {"lambda_star", res[2 * j + 1].lambda}};
    out.checks.push_back({"grid_agreement_ell" + std::to_string(ell), std::abs(e1 - e2) <= agreement,
                          "exponents " + format_double(e1) + " and " + format_double(e2)});
  }
  return out;
}

Outcome run_twobody(const Context& ctx) {
  const PotentialSpec pot = potential_from(ctx.cfg);
  const RadialGrid grid = grid_from(ctx.cfg, pot);
  for (const auto& w : grid_warnings(pot, grid)) logger()->warn("{}", w);
  const std::string mode = ctx.cfg.get_string("twobody.mode", "counts");
  if (mode == "counts") return run_twobody_counts(ctx, pot, grid);
  if (mode == "critical") return run_twobody_critical(ctx, pot, grid);
  if (mode == "mu_scan") return run_twobody_mu_scan(ctx, pot, grid);
  const auto& v = ctx.cfg.entries().at("twobody.mode");
  throw ParseError(ctx.cfg.source(), v.line, v.column, "unknown twobody mode '" + mode + "'");
}

// ---------------------------------------------------------------- kernelcheck

Outcome run_kernelcheck(const Context& ctx) {
  Outcome out;
  out.csv = CsvTable({"gamma", "epsilon", "R", "value", "value_alt", "closed_form", "bound", "within_bound"});
  const auto gammas = ctx.cfg.get_array("kernel.gammas", {0.0, 0.1, 0.2});
  const auto epsilons = ctx.cfg.get_array("kernel.epsilons", logspace(-2.0, 2.0, 10));
  const auto radii = ctx.cfg.get_array("kernel.radii", logspace(-1.0, 1.0, 10));
  struct Task {
    double g, e, r;
  };
  std::vector<Task> tasks;
  for (const double g : gammas)
    for (const double e : epsilons)
      for (const double r : radii) tasks.push_back({g, e, r});
  struct Res {
    ResolventKernelValue a, b;
  };
  const auto res = parallel_map(tasks.size(), ctx.jobs, [&](std::size_t i) {
    const Task& t = tasks[i];
    return Res{resolvent_power_kernel(t.g, t.e, t.r, Substitution::LogVariable),
               resolvent_power_kernel(t.g, t.e, t.r, Substitution::PowerVariable)};
  });
  double worst_closed = 0.0, worst_sub = 0.0;
  std::size_t bound_ok = 0;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const Task& t = tasks[i];
    double closed = std::nan("");
    if (t.g == 0.0) {
      closed = std::exp(-std::sqrt(t.e) * t.r) / (4.0 * M_PI * t.r);
      worst_closed = std::max(worst_closed, std::abs(res[i].a.value - closed) / closed);
    }
    worst_sub = std::max(worst_sub, std::abs(res[i].a.value - res[i].b.value) / res[i].a.value);
    const bool within = res[i].a.within_bound && res[i].b.within_bound;
    bound_ok += within;
    out.csv.row().add(t.g).add(t.e).add(t.r).add(res[i].a.value).add(res[i].b.value).add(closed).add(res[i].a.bound).add(within);
  }
  out.checks.push_back({"closed_form_gamma0", worst_closed <= 1e-6, "max relative error " + format_double(worst_closed)});
  out.checks.push_back({"upper_bound", bound_ok == tasks.size(),
                        std::to_string(bound_ok) + "/" + std::to_string(tasks.size()) + " within bound"});
  out.checks.push_back({"substitution_agreement", worst_sub <= 1e-8, "max relative difference " + format_double(worst_sub)});
  return out;
}

// ---------------------------------------------------------------- iterbs-demo

Outcome run_iterbs_demo(const Context& ctx) {
  Outcome out;
  out.csv = CsvTable({"k", "count", "hs_norm_Mk", "consistency_residual"});
  const long dim = ctx.cfg.get_int("iterbs.dim", 12);
  const long steps = ctx.cfg.get_int("iterbs.steps", 3);
  const IterbsCase c = random_iterbs_case(derive_seed(ctx.seed, 0), dim, static_cast<int>(steps));
  const auto stages = iterate(c.K_total, c.steps);
  bool invariant = true;
  double worst = 0.0;
  for (const IterStage& s : stages) {
    out.csv.row().add(s.k).add(s.count).add(s.hs_norm_M).add(s.residual);
    invariant = invariant && s.count == stages.front().count;
    worst = std::max(worst, s.residual);
  }
  out.checks.push_back({"count_invariance", invariant, "base count " + std::to_string(stages.front().count)});
  out.checks.push_back({"recurrence_consistency", worst <= 1e-8, "max residual " + format_double(worst)});
  return out;
}

// ---------------------------------------------------------------- efimov

SeparableModel model_from(const Config& cfg) {
  SeparableModel m;
  m.beta = cfg.get_number("model.beta", 1.0);
  m.lambda = cfg.get_number("model.lambda_ratio", 1.0) * lambda_unitary(m.beta);
  m.p_min = cfg.get_number("model.p_min", 1e-8);
  m.p_max = cfg.get_number("model.p_max", 100.0);
  m.n_p = static_cast<int>(cfg.get_int("model.n_p", 512));
  m.n_x = static_cast<int>(cfg.get_int("model.n_x", 32));
  m.map = enum_value(cfg, "model.map", "log", parse_momentum_map);
  m.map_c = cfg.get_number("model.map_c", 3.0);
  m.masses = cfg.get_array("model.masses", {1.0, 1.0, 1.0});
  m.validate();
  return m;
}

std::vector<double> levels_for(const SeparableModel& m, double floor, int jobs) {
  return trimer_levels(m, floor, -infrared_ceiling(m), 1e-10, jobs).energies;
}

Outcome run_efimov(const Context& ctx) {
  Outcome out;
  out.csv = CsvTable({"n", "energy", "ratio", "cutoff_stable"});
  const SeparableModel m = model_from(ctx.cfg);
  const double floor = ctx.cfg.get_number("efimov.e_floor", -1.0);
  const bool cutoff_check = ctx.cfg.get_bool("efimov.cutoff_check", true);
  const bool unitary = std::abs(m.lambda - lambda_unitary(m.beta)) <= 1e-8 * lambda_unitary(m.beta);

  const std::vector<double> e = unitary ? efimov_spectrum(m, floor, ctx.jobs) : levels_for(m, floor, ctx.jobs);
  std::vector<double> e2;
  if (cutoff_check) {
    SeparableModel m2 = m;
    m2.p_max *= 2.0;
    e2 = levels_for(m2, floor, ctx.jobs);
  }
  std::vector<double> ratios;
  for (std::size_t i = 0; i < e.size(); ++i) {
    const double ratio = i + 1 < e.size() ? e[i] / e[i + 1] : std::nan("");
    if (i + 1 < e.size()) ratios.push_back(ratio);
    bool stable = false;
    for (const double x : e2) stable = stable || std::abs(x - e[i]) < 0.02 * std::abs(e[i]);
    out.csv.row().add(i).add(e[i]).add(ratio).add(cutoff_check ? stable : false);
  }
  out.results["levels"] = e.size();
  out.results["lambda_over_lambda_u"] = m.lambda / lambda_unitary(m.beta);
  const S0Result s0 = s0_oracle();
  out.results["s0"] = s0.s0;
  out.results["s0_ratio"] = s0.ratio;
  if (unitary) {
    bool geometric = ratios.size() >= 3;
    if (geometric) {
      const std::size_t k = ratios.size();
      const double a = ratios[k - 3], b = ratios[k - 2], c = ratios[k - 1];
      const double hi = std::max({a, b, c}), lo = std::min({a, b, c});
      geometric = (hi - lo) / lo <= 0.05;
    }
    out.checks.push_back({"geometric_ratios", geometric, std::to_string(ratios.size()) + " ratios"});
    const double lim = ratios.empty() ? 0.0 : ratios.back();
    out.checks.push_back({"limiting_ratio", std::abs(lim - s0.ratio) <= 0.1 * s0.ratio,
                          "ratio " + format_double(lim) + " vs " + format_double(s0.ratio)});
  } else {
    SeparableModel m3 = m;
    m3.p_min *= 1e-2;
    const std::size_t deeper = levels_for(m3, floor, ctx.jobs).size();
    out.checks.push_back({"finite_spectrum", deeper == e.size(),
                          std::to_string(e.size()) + " levels, " + std::to_string(deeper) + " with p_min/100"});
  }
  return out;
}

json echo(const Config& cfg, std::uint64_t seed) {
  json j = json::object();
  for (const auto& [k, v] : cfg.entries()) {
    if (k == "seed") continue;
    std::visit([&](const auto& x) { j[k] = x; }, v.value);
  }
  j["seed"] = seed;
  return j;
}

}  // namespace

int run(const CliOptions& opts) {
  const auto t0 = Clock::now();
  Config cfg;
  std::uint64_t seed = kDefaultSeed;
  std::string command;
  try {
    cfg = opts.config_text ? parse_config(*opts.config_text, "<inline>") : load_config(opts.config_path);
    validate_schema(cfg);
    command = cfg.get_string("command", "");
    if (const auto s = cfg.get_u64("seed")) seed = *s;
  } catch (const ParseError& e) {
    logger()->error("parse error: {}", e.what());
    return kParseError;
  } catch (const IoError& e) {
    logger()->error("{}", e.what());
    return kIoError;
  }
  if (opts.seed) seed = *opts.seed;
  const int jobs = opts.jobs.value_or(default_jobs());
  const std::string name = cfg.get_string("output.name", command);

  std::function<Outcome(const Context&)> pipeline;
  if (command == "verify") pipeline = run_verify;
  else if (command == "twobody") pipeline = run_twobody;
  else if (command == "kernelcheck") pipeline = run_kernelcheck;
  else if (command == "iterbs-demo") pipeline = run_iterbs_demo;
  else if (command == "efimov") pipeline = run_efimov;
  else {
    const auto& v = cfg.entries().at("command");
    logger()->error("parse error: {}:{}:{}: unknown command '{}'", cfg.source(), v.line, v.column, command);
    return kParseError;
  }

  logger()->info("{} (seed {}, {} jobs)", command, seed, jobs);
  const Context ctx{cfg, seed, jobs};
  Outcome outcome;
  std::string error;
  try {
    outcome = pipeline(ctx);
  } catch (const ParseError& e) {
    logger()->error("parse error: {}", e.what());
    return kParseError;
  } catch (const IoError& e) {
    logger()->error("{}", e.what());
    return kIoError;
  } catch (const std::invalid_argument& e) {
    logger()->error("invalid configuration: {}", e.what());
    return kParseError;
  } catch (const std::exception& e) {
    error = e.what();
    logger()->error("{} failed: {}", command, error);
  }

  std::string first_failure = error.empty() ? "" : command + ": " + error;
  json checks = json::array();
  for (const Check& c : outcome.checks) {
    checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    if (!c.pass && first_failure.empty()) first_failure = c.name + ": " + c.detail;
  }
  const bool ok = first_failure.empty();
  json summary;
  summary["command"] = command;
  summary["version"] = version();
  summary["seed"] = seed;
  summary["config"] = echo(cfg, seed);
  summary["checks"] = checks;
  summary["results"] = outcome.results;
  summary["status"] = ok ? kOk : kCheckFailed;
  if (!ok) summary["first_failure"] = first_failure;
  summary["timing"] = {{"total_seconds", std::chrono::duration<double>(Clock::now() - t0).count()},
                       {"jobs", jobs}};
  try {
    write_outputs(opts.out_dir, name, outcome.csv, summary);
  } catch (const IoError& e) {
    logger()->error("{}", e.what());
    return kIoError;
  }
  if (!ok) {
    logger()->error("check failed: {}", first_failure);
    return kCheckFailed;
  }
  logger()->info("all checks passed; wrote {}/{}.csv", opts.out_dir, name);
  return kOk;
}

int main_entry(int argc, char** argv) {
  CLI::App app{"Birman-Schwinger bound-state counting toolkit"};
  CliOptions opts;
  std::string seed_text;
  int jobs = 0;
  app.add_option("-c,--config", opts.config_path, "Run configuration file")->required();
  app.add_option("-j,--jobs", jobs, "Worker threads (default: logical cores)")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed_text, "Override the config seed (decimal or 0x hex)");
  app.add_option("-o,--out", opts.out_dir, "Output directory");
  app.set_version_flag("--version", std::string(version()));
  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kParseError;
  }
  if (jobs > 0) opts.jobs = jobs;
  if (!seed_text.empty()) {
    const auto s = parse_u64(seed_text);
    if (!s) {
      std::cerr << "--seed: not an unsigned 64-bit integer: " << seed_text << "\n";
      return kParseError;
    }
    opts.seed = *s;
  }
  return run(opts);
}

}  // namespace bscount::cli
