#include <fstream>
#include <sstream>

#include "doctest.h"
#include "fuzzyadapt/scenario.hpp"
#include "support.hpp"
#include "json.hpp"

using namespace fuzzyadapt;
using json = nlohmann::json;

namespace {

std::string read(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json bundled_json() { return json::parse(read(testing::scenario_path())); }

Scenario parse(const json& doc) { return parse_scenario(doc.dump(), testing::scenario_dir()); }

}  // namespace

TEST_CASE("bundled scenario loads and validates") {
  const Scenario& sc = testing::bundled();
  CHECK(sc.name == "push_ambient_notification");
  const auto report = validate_scenario(sc);
  CHECK(report.ok());
  CHECK(report.error_count() == 0);
  CHECK(sc.model.registry.contexts().size() == 4);
  CHECK(sc.model.registry.softgoals().size() == 3);
  CHECK(sc.settings.mode == TriggerMode::Individual);
  CHECK(sc.settings.xi == 0.1);
  CHECK(sc.trajectories.steps == 200);
  CHECK(sc.trajectories.seed == 42);
  CHECK(sc.model.fallback == NoRuleFiredPolicy::Midpoint);
  for (const auto& s : sc.model.registry.softgoals()) CHECK(s.weight == doctest::Approx(1.0 / 3));
  CHECK(sc.model.registry.id_of_variable("DataSize") == "t3");
}

TEST_CASE("digest is stable and content-sensitive") {
  const Scenario a = load_scenario(testing::scenario_path());
  CHECK(a.digest == testing::bundled().digest);
  CHECK(a.digest.size() == 16);
  json doc = bundled_json();
  doc["name"] = "renamed";
  CHECK(parse(doc).digest != a.digest);
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
}

TEST_CASE("a COR edge from a context is reported") {
  json doc = bundled_json();
  doc["edges"].push_back({{"kind", "COR"}, {"sources", {"ac1"}}, {"target", "sg1"}});
  const Scenario sc = parse(doc);
  const auto report = validate_scenario(sc);
  CHECK_FALSE(report.ok());
  CHECK(report.has("edge-kind"));
}

TEST_CASE("format and I/O failures") {
  CHECK_THROWS_AS(parse_scenario("{ not json", testing::scenario_dir()), ScenarioFormatError);
  CHECK_THROWS_AS(parse_scenario("[1, 2]", testing::scenario_dir()), ScenarioFormatError);
  CHECK_THROWS_AS(load_scenario("/nonexistent/scenario.json"), IoError);

  json doc = bundled_json();
  doc.erase("variables");
  CHECK_THROWS_AS(parse(doc), ScenarioFormatError);

  doc = bundled_json();
  doc["rules"]["upd"] = "missing.rules";
  CHECK_THROWS_AS(parse(doc), IoError);

  doc = bundled_json();
  doc["readaptation"]["mode"] = "sometimes";
  CHECK_THROWS_AS(parse(doc), ScenarioFormatError);
}

TEST_CASE("bad rule files surface as parse errors with a position") {
  const auto dir = testing::scratch("scenario_badrule");
  for (const char* f : {"ena.rules", "cor.rules"})
    std::filesystem::copy_file(testing::scenario_dir() / f, dir / f);
  std::ofstream(dir / "upd.rules") << "# broken\nIf (BandwidthRate is LBandwidth then (HighTimeEfficiency is LSat) (1)\n";
  try {
    parse_scenario(bundled_json().dump(), dir);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()).find("upd.rules") != std::string::npos);
  }
}

TEST_CASE("conflicting rules are errors or warnings by policy") {
  const auto dir = testing::scratch("scenario_conflict");
  for (const char* f : {"upd.rules", "ena.rules", "cor.rules"})
    std::filesystem::copy_file(testing::scenario_dir() / f, dir / f);
  std::ofstream(dir / "cor.rules", std::ios::app)
      << "If (LocatingOption is GPS) and (ReceivedDataSize is MSize) and (UpdateTimeInterval is MTime) then "
         "(HighEnergyEfficiency is HSat) (1)\n";
  json doc = bundled_json();
  CHECK(validate_scenario(parse_scenario(doc.dump(), dir)).has("rule-conflict"));
  CHECK_FALSE(validate_scenario(parse_scenario(doc.dump(), dir)).ok());
  doc["rules"]["on_conflict"] = "warning";
  const auto report = validate_scenario(parse_scenario(doc.dump(), dir));
  CHECK(report.ok());
  CHECK(report.has("rule-conflict"));
}
