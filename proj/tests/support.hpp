#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "fuzzyadapt/scenario.hpp"

namespace testing {

inline std::filesystem::path scenario_dir() { return SCENARIO_DIR; }
inline std::filesystem::path scenario_path() { return scenario_dir() / "scenario.json"; }

/// The bundled scenario, loaded once per process.
inline const fuzzyadapt::Scenario& bundled() {
  static const fuzzyadapt::Scenario sc = fuzzyadapt::load_scenario(scenario_path());
  return sc;
}

/// Three evenly spaced triangles (Low/Mid/High, shoulders at the ends) over [lo, hi].
inline fuzzyadapt::LinguisticVariable three_terms(const std::string& name, double lo, double hi,
                                                   std::vector<std::string> names = {"Low", "Mid", "High"}) {
  using fuzzyadapt::MembershipFunction;
  const double m = 0.5 * (lo + hi);
  return {name,
          {lo, hi},
          {{names[0], MembershipFunction::triangular(lo, lo, m)},
           {names[1], MembershipFunction::triangular(lo, m, hi)},
           {names[2], MembershipFunction::triangular(m, hi, hi)}}};
}

struct SampleRule {
  fuzzyadapt::RelationKind kind;
  const char* line;
};

/// Sample lines of the three bundled rule sets, with their line numbers.
inline const std::vector<SampleRule>& sample_rules() {
  using fuzzyadapt::RelationKind;
  static const std::vector<SampleRule> rules{
    {RelationKind::Upd, "7. If (BandwidthRate is LBandwidth) and (NetworkDelay is Hdelay) and (DumpEnergy is LEnergy) then (HighTimeEfficiency is LSat) (1)"},
    {RelationKind::Upd, "8. If (BandwidthRate is LBandwidth) and (NetworkDelay is Hdelay) and (DumpEnergy is MEnergy) then (HighTimeEfficiency is MSat) (1)"},
    {RelationKind::Upd, "9. If (BandwidthRate is LBandwidth) and (NetworkDelay is Hdelay) and (DumpEnergy is HEnergy) then (HighTimeEfficiency is MSat) (1)"},
    {RelationKind::Upd, "10. If (BandwidthRate is MBandwidth) and (NetworkDelay is Ldelay) and (DumpEnergy is LEnergy) then (HighTimeEfficiency is LSat) (1)"},
    {RelationKind::Ena, "43. If (NetworkDelay is Mdelay) and (DumpEnergy is HEnergy) and (AvailableMemory is SMemory) then (ReceivedDataSize is SSize) (1)"},
    {RelationKind::Ena, "44. If (NetworkDelay is Mdelay) and (DumpEnergy is HEnergy) and (AvailableMemory is MMemory) then (ReceivedDataSize is MSize) (1)"},
    {RelationKind::Ena, "45. If (NetworkDelay is Mdelay) and (DumpEnergy is HEnergy) and (AvailableMemory is LMemory) then (ReceivedDataSize is LSize) (1)"},
    {RelationKind::Ena, "46. If (NetworkDelay is Hdelay) and (DumpEnergy is LEnergy) and (AvailableMemory is SMemory) then (ReceivedDataSize is SSize) (1)"},
    {RelationKind::Cor, "31. If (LocatingOption is GPS) and (ReceivedDataSize is MSize) and (UpdateTimeInterval is STime) then (HighEnergyEfficiency is LSat) (1)"},
    {RelationKind::Cor, "32. If (LocatingOption is GPS) and (ReceivedDataSize is MSize) and (UpdateTimeInterval is MTime) then (HighEnergyEfficiency is MSat) (1)"},
    {RelationKind::Cor, "33. If (LocatingOption is GPS) and (ReceivedDataSize is MSize) and (UpdateTimeInterval is LTime) then (HighEnergyEfficiency is MSat) (1)"},
    {RelationKind::Cor, "34. If (LocatingOption is GPS) and (ReceivedDataSize is LSize) and (UpdateTimeInterval is STime) then (HighEnergyEfficiency is LSat) (1)"},
  };
  return rules;
}

/// Unique scratch directory under the system temp dir.
inline std::filesystem::path scratch(const std::string& tag) {
  auto dir = std::filesystem::temp_directory_path() / ("fuzzyadapt_" + tag);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testing
