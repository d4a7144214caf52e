// include/jgrscan/poc.hpp
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "jgrscan/detector.hpp"
#include "jgrscan/simulator.hpp"

namespace jgrscan {

/// Parameter synthesis rules for generated attack scripts.
struct ParamRules {
  /// Lower-case name fragment -> pool of values, e.g. `uid` -> {"10001", ...}.
  std::map<std::string, std::vector<std::string>> name_presets;
  /// Type fqname -> preset value for singleton-like types.
  std::map<std::string, std::string> type_presets;
  std::map<std::string, std::string> primitive_defaults;
  /// `class.method` or `service.method` entries that are never scripted.
  std::set<std::string> blacklist;

  static ParamRules defaults();
};

/// Synthesizes a Simple attack on `entry`. Each parameter is bound, in
/// order of preference, from a name preset, a type preset, a primitive
/// default, the IPC stub of its type, or a fresh instance of a concrete
/// corpus class. Throws UnconstructibleParam otherwise.
AttackScript generate_poc(const ProgramDb& db, const EntryPoint& entry, const ParamRules& rules,
                          int64_t budget = 1, uint64_t seed = 0);

struct Verification {
  LeakFinding finding;
  bool verified = false;
  std::optional<OutcomeKind> outcome;
  /// Why the finding stayed unverified; empty when verified.
  std::string reason;
};

/// Runs a generated Simple attack with `config.jgr_capacity` calls for each
/// finding; a finding is verified iff the run ends in a reboot.
std::vector<Verification> verify(const ProgramDb& db, const std::vector<LeakFinding>& findings,
                                 const SimConfig& config,
                                 const ParamRules& rules = ParamRules::defaults());

}  // namespace jgrscan
