#include "doctest.h"

#include "bscount/cli/config.hpp"
#include "bscount/cli/report.hpp"
#include "bscount/cli/run.hpp"
#include "bscount/instances.hpp"
#include "bscount/parallel.hpp"
#include "bscount/verify.hpp"

#include "json.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

using namespace bscount;
using namespace bscount::cli;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("bscount_cli_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int run_text(const std::string& text, const fs::path& out, std::optional<int> jobs = std::nullopt) {
  CliOptions o;
  o.config_text = text;
  o.out_dir = out.string();
  o.jobs = jobs;
  return run(o);
}

void expect_parse_error(const std::string& text, int line, int column) {
  try {
    parse_config(text, "t.cfg");
    FAIL("no parse error for: " << text);
  } catch (const ParseError& e) {
    CHECK(e.line() == line);
    CHECK(e.column() == column);
    CHECK(std::string(e.what()).rfind("t.cfg:" + std::to_string(line) + ":", 0) == 0);
  }
}

}  // namespace

TEST_CASE("config parsing") {
  const Config c = parse_config(
      "# header\n"
      "command = \"twobody\"   # trailing comment\n"
      "seed = 0xB5C0\n"
      "potential.strength = 2.5e0\n"
      "efimov.cutoff_check = false\n"
      "scan.epsilons = [1e-6, 1e-5,1e-4]\n"
      "output.name = \"a \\\"quoted\\\" name\"\n");
  CHECK(c.get_string("command", "") == "twobody");
  CHECK(*c.get_u64("seed") == 0xB5C0);
  CHECK(c.get_number("potential.strength", 0.0) == 2.5);
  CHECK_FALSE(c.get_bool("efimov.cutoff_check", true));
  CHECK(c.get_array("scan.epsilons", {}) == std::vector<double>{1e-6, 1e-5, 1e-4});
  CHECK(c.get_string("output.name", "") == "a \"quoted\" name");
  CHECK(c.get_number("grid.r_max", 7.0) == 7.0);
  CHECK(c.entries().at("seed").line == 3);
  CHECK_NOTHROW(validate_schema(c));
  CHECK_THROWS_AS(c.get_string("potential.strength", ""), ParseError);
}

TEST_CASE("config parse errors carry line and column") {
  expect_parse_error("command = \"verify\"\n  bogus line\n", 2, 9);
  expect_parse_error("command = \"verify\"\ncommand = \"verify\"\n", 2, 1);
  expect_parse_error("a = \"unterminated\n", 1, 18);
  expect_parse_error("x = [1, 2\n", 1, 10);
  expect_parse_error("x = 1.5.3\n", 1, 5);

  const Config unknown = parse_config("command = \"verify\"\npotential.knd = \"yukawa\"\n", "t.cfg");
  try {
    validate_schema(unknown);
    FAIL("unknown key accepted");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()).find("potential.knd") != std::string::npos);
  }
  CHECK_THROWS_AS(validate_schema(parse_config("seed = 1\n")), ParseError);
  CHECK_THROWS_AS(validate_schema(parse_config("command = \"verify\"\ngrid.n = \"many\"\n")), ParseError);
  CHECK_THROWS_AS(load_config("/nonexistent/run.cfg"), IoError);
}

TEST_CASE("u64 parsing") {
  CHECK(*parse_u64("0") == 0);
  CHECK(*parse_u64("18446744073709551615") == UINT64_MAX);
  CHECK(*parse_u64("0xffffffffffffffff") == UINT64_MAX);
  CHECK_FALSE(parse_u64("18446744073709551616").has_value());
  CHECK_FALSE(parse_u64("-1").has_value());
  CHECK_FALSE(parse_u64("12abc").has_value());
  CHECK_FALSE(parse_u64("").has_value());
}

TEST_CASE("CSV rendering") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(std::nan("")) == "nan");
  CHECK(format_double(-INFINITY) == "-inf");
  CsvTable t({"a", "b"});
  t.row().add(1).add("x,y");
  CHECK(t.render() == "# schema=1\na,b\n1,\"x,y\"\n");
}

TEST_CASE("parallel_map keeps order and rethrows") {
  const auto v = parallel_map(100, 4, [](std::size_t i) { return i * i; });
  for (std::size_t i = 0; i < v.size(); ++i) CHECK(v[i] == i * i);
  CHECK_THROWS_AS(parallel_map(10, 3, [](std::size_t i) -> int {
                    if (i == 7) throw std::runtime_error("boom");
                    return 0;
                  }),
                  std::runtime_error);
}

TEST_CASE("verify suites are seed-deterministic and independent of jobs") {
  const auto a = verify_bs_equality(kDefaultSeed, 30, 1);
  const auto b = verify_bs_equality(kDefaultSeed, 30, 3);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].seed == b[i].seed);
    CHECK(a[i].lhs == b[i].lhs);
    CHECK(a[i].pass);
  }
  const SuiteSummary s = summarize("bs_equality", a);
  CHECK(s.ok());
  CHECK(s.total == 30);
}

TEST_CASE("run: strict parsing writes nothing") {
  const fs::path out = fresh_dir("strict");
  CHECK(run_text("command = \"verify\"\nverify.bs_equality = 5\nverify.typo = 1\n", out) == kParseError);
  CHECK_FALSE(fs::exists(out / "verify.csv"));
  CHECK_FALSE(fs::exists(out / "verify.summary.json"));
  CHECK(run_text("command = \"dance\"\n", out) == kParseError);
  CHECK(run_text("command = \"twobody\"\npotential.kind = \"coulomb\"\n", out) == kParseError);
  CHECK_FALSE(fs::exists(out));
}

TEST_CASE("run: verify summary") {
  const fs::path out = fresh_dir("verify");
  const std::string cfg =
      "command = \"verify\"\n"
      "verify.bs_equality = 40\nverify.bs_inequality = 20\nverify.bs_bounded = 10\n"
      "verify.iterbs = 10\nverify.hs_bound = 10\nverify.rank_one = 10\nverify.mu_monotone = 5\n";
  REQUIRE(run_text(cfg, out) == kOk);
  const auto j = nlohmann::json::parse(slurp(out / "verify.summary.json"));
  CHECK(j["status"] == 0);
  CHECK(j["seed"] == 0xB5C0);
  CHECK(j["version"] == version());
  CHECK(j["checks"][0]["name"] == "bs_equality");
  CHECK(j["checks"][0]["detail"].get<std::string>().rfind("40/40 pass", 0) == 0);
  CHECK(j.contains("timing"));
  CHECK(j["config"]["verify.bs_equality"] == 40);
  const std::string csv = slurp(out / "verify.csv");
  CHECK(csv.rfind("# schema=1\nsuite,index,seed,dim,lhs,rhs,residual,pass,note\n", 0) == 0);
}

TEST_CASE("run: twobody subcritical well has no bound states") {
  const fs::path out = fresh_dir("twobody");
  const std::string cfg =
      "command = \"twobody\"\n"
      "twobody.mode = \"counts\"\n"
      "potential.kind = \"square_well\"\npotential.range = 1.0\n"
      "scan.strengths = [2.0]\nscan.ells = [0, 1, 2]\nscan.epsilons = [1e-4, 1e-2]\n"
      "grid.n = 800\n";
  REQUIRE(run_text(cfg, out) == kOk);
  std::istringstream csv(slurp(out / "twobody.csv"));
  std::string line;
  std::getline(csv, line);
  std::getline(csv, line);
  CHECK(line == "strength,ell,epsilon,count_direct,count_bs,agree");
  int rows = 0;
  while (std::getline(csv, line)) {
    ++rows;
    CHECK(line.find(",0,0,true") != std::string::npos);
  }
  CHECK(rows == 6);
}

TEST_CASE("run: numerical check failure exits 1 and names it") {
  const fs::path out = fresh_dir("fail");
  // A coarse uniform box cannot certify a 1e-9 two-grid agreement.
  const std::string cfg =
      "command = \"twobody\"\ntwobody.mode = \"critical\"\npotential.kind = \"yukawa\"\n"
      "grid.scheme = \"uniform_fd2\"\ngrid.n = 64\ngrid.r_max = 30\nscan.tol = 1e-9\n";
  CHECK(run_text(cfg, out) == kCheckFailed);
  const auto j = nlohmann::json::parse(slurp(out / "twobody.summary.json"));
  CHECK(j["status"] == 1);
  CHECK_FALSE(j["first_failure"].get<std::string>().empty());
}

TEST_CASE("run: IO errors exit 3") {
  const fs::path blocker = fresh_dir("blocker");
  { std::ofstream(blocker.string()) << "not a directory"; }
  CHECK(run_text("command = \"iterbs-demo\"\n", blocker / "sub") == kIoError);
  fs::remove(blocker);
  CliOptions o;
  o.config_path = "/nonexistent/run.cfg";
  CHECK(run(o) == kIoError);
}

TEST_CASE("run: seed override and byte-identical CSV across job counts") {
  const std::string cfg = "command = \"verify\"\nverify.bs_equality = 30\nverify.iterbs = 10\nverify.hs_bound = 8\n";
  const fs::path a = fresh_dir("det_a"), b = fresh_dir("det_b");
  REQUIRE(run_text(cfg, a, 1) == kOk);
  REQUIRE(run_text(cfg, b, 4) == kOk);
  CHECK(slurp(a / "verify.csv") == slurp(b / "verify.csv"));

  CliOptions o;
  o.config_text = cfg;
  o.out_dir = fresh_dir("det_c").string();
  o.seed = 42;
  REQUIRE(run(o) == kOk);
  CHECK(slurp(fs::path(o.out_dir) / "verify.csv") != slurp(a / "verify.csv"));
  CHECK(nlohmann::json::parse(slurp(fs::path(o.out_dir) / "verify.summary.json"))["seed"] == 42);
}

TEST_CASE("main_entry flags") {
  const fs::path out = fresh_dir("argv");
  const fs::path cfg = fs::temp_directory_path() / "bscount_cli_argv.cfg";
  { std::ofstream(cfg) << "command = \"iterbs-demo\"\niterbs.dim = 8\n"; }
  std::string a0 = "bscount", a1 = "--config", a2 = cfg.string(), a3 = "--out", a4 = out.string(), a5 = "--seed",
              a6 = "0x10", a7 = "--jobs", a8 = "2";
  char* argv[] = {a0.data(), a1.data(), a2.data(), a3.data(), a4.data(), a5.data(), a6.data(), a7.data(), a8.data()};
  CHECK(main_entry(9, argv) == kOk);
  CHECK(nlohmann::json::parse(slurp(out / "iterbs-demo.summary.json"))["seed"] == 16);

  std::string bad = "nope";
  char* argv_bad[] = {a0.data(), a1.data(), a2.data(), a5.data(), bad.data()};
  CHECK(main_entry(5, argv_bad) == kParseError);
  char* argv_missing[] = {a0.data()};
  CHECK(main_entry(1, argv_missing) == kParseError);
  fs::remove(cfg);
}
