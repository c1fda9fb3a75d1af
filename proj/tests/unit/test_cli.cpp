#include <fstream>
#include <sstream>

#include "adaptctl.hpp"
#include "doctest.h"
#include "fuzzyadapt/rules.hpp"
#include "support.hpp"

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = adaptctl::run(args, out, err);
  return {code, out.str(), err.str()};
}

Result with_scenario(std::vector<std::string> args) {
  args.insert(args.begin(), {"--scenario", testing::scenario_path().string()});
  return cli(std::move(args));
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("validate") {
  const auto r = with_scenario({"validate"});
  CHECK(r.code == 0);
  CHECK(r.out.find("0 errors") != std::string::npos);
  CHECK(cli({"--scenario", "/nonexistent/s.json", "validate"}).code == 2);
}

TEST_CASE("fuzzify") {
  const auto r = with_scenario({"fuzzify", "--var", "BandwidthRate", "--value", "400"});
  CHECK(r.code == 0);
  CHECK(r.out == "LBandwidth 0.000000000, MBandwidth 0.400000000, HBandwidth 0.500000000\n");
  const auto alias = with_scenario({"fuzzify", "--var", "DataSize", "--value", "350"});
  CHECK(alias.out == "SSize 0.000000000, MSize 0.500000000, LSize 0.250000000\n");
  const auto clamped = with_scenario({"fuzzify", "--var", "BandwidthRate", "--value", "900"});
  CHECK(clamped.code == 0);
  CHECK(clamped.err.find("clamped") != std::string::npos);
  CHECK(with_scenario({"fuzzify", "--var", "Bandwidth", "--value", "1"}).code == 1);
  CHECK(with_scenario({"fuzzify", "--var", "BandwidthRate"}).code == 2);
}

TEST_CASE("infer") {
  const auto r = with_scenario({"infer", "--context", "ac1=450,ac2=10,ac3=900,ac4=300"});
  CHECK(r.code == 0);
  CHECK((r.out.find("-> GPS") != std::string::npos || r.out.find("-> Network") != std::string::npos));
  CHECK(r.out.find("desired satisfaction") != std::string::npos);
  const auto named = with_scenario({"infer", "--context", "BandwidthRate=450,NetworkDelay=10,DumpEnergy=900,ac4=300"});
  CHECK(named.out == r.out);
  CHECK(with_scenario({"infer", "--context", "ac1=450,ac2=10"}).code == 1);
  CHECK(with_scenario({"infer", "--context", "ac1"}).code == 2);
}

TEST_CASE("simulate") {
  const auto dir = testing::scratch("cli_sim");
  CHECK(with_scenario({"simulate", "--steps", "0", "--out", (dir / "x").string()}).code == 2);
  const auto a = with_scenario({"simulate", "--steps", "30", "--out", (dir / "a").string()});
  const auto b = with_scenario({"simulate", "--steps", "30", "--out", (dir / "b").string()});
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  const std::string csv = slurp(dir / "a" / "trace.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 31);
  CHECK(csv == slurp(dir / "b" / "trace.csv"));
  CHECK(std::filesystem::exists(dir / "a" / "summary.txt"));
  CHECK(std::filesystem::exists(dir / "a" / "plots"));
  CHECK(a.out.find("readaptation_rate=") != std::string::npos);

  const auto seeds = with_scenario({"simulate", "--steps", "5", "--seeds", "1..2", "--out", (dir / "m").string()});
  CHECK(seeds.code == 0);
  CHECK(std::filesystem::exists(dir / "m" / "seed_1" / "trace.csv"));
  CHECK(std::filesystem::exists(dir / "m" / "seed_2" / "trace.csv"));
}

TEST_CASE("missing rule file is an I/O error") {
  const auto dir = testing::scratch("cli_norules");
  std::filesystem::copy_file(testing::scenario_path(), dir / "scenario.json");
  CHECK(cli({"--scenario", (dir / "scenario.json").string(), "validate"}).code == 2);
}

TEST_CASE("rules subcommands") {
  const auto count = with_scenario({"rules", "count"});
  CHECK(count.code == 0);
  CHECK(count.out.find("324") != std::string::npos);
  CHECK(count.out.find("81") != std::string::npos);
  const auto bare = cli({"rules", "count", "--inputs", "3,3,3", "--outputs", "3"});
  CHECK(bare.code == 0);
  CHECK(bare.out.find("rule space 324") != std::string::npos);

  const auto en = with_scenario({"rules", "enumerate", "--kind", "COR", "--target", "sg3"});
  REQUIRE(en.code == 0);
  std::istringstream lines(en.out);
  std::string line;
  int n = 0;
  while (std::getline(lines, line)) {
    if (line.empty() || line[0] == '#') continue;
    CHECK_NOTHROW(fuzzyadapt::parse_rule(line, testing::bundled().model.registry));
    ++n;
  }
  CHECK(n == 27);  // 9 antecedents x 3 consequent terms

  CHECK(with_scenario({"rules", "check"}).code == 0);
}

TEST_CASE("usage errors") {
  CHECK(cli({}).code == 2);
  CHECK(cli({"frobnicate"}).code == 2);
  CHECK(cli({"--help"}).code == 0);
}
