// src/poc.cpp
#include "jgrscan/poc.hpp"

#include <algorithm>
#include <cctype>
#include <random>

#include "jgrscan/error.hpp"
#include "jgrscan/hierarchy.hpp"

namespace jgrscan {

ParamRules ParamRules::defaults() {
  ParamRules r;
  r.name_presets["package"] = {"com.example.poc", "com.example.poc.helper"};
  r.name_presets["pkg"] = r.name_presets["package"];
  r.name_presets["uid"] = {"10001", "10002", "10003"};
  r.type_presets["android.os.Looper"] = "Looper.getMainLooper()";
  r.type_presets["android.content.Context"] = "context";
  r.type_presets["java.lang.String"] = "\"poc\"";
  r.type_presets["android.os.IBinder"] = "new:android.os.Binder";
  for (const char* t : {"byte", "short", "int", "long"}) r.primitive_defaults[t] = "0";
  r.primitive_defaults["float"] = "0.0";
  r.primitive_defaults["double"] = "0.0";
  r.primitive_defaults["boolean"] = "false";
  r.primitive_defaults["char"] = "'a'";
  return r;
}

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace

AttackScript generate_poc(const ProgramDb& db, const EntryPoint& entry, const ParamRules& rules,
                          int64_t budget, uint64_t seed) {
  if (rules.blacklist.contains(entry.ref().str()) ||
      rules.blacklist.contains(entry.interface_name())) {
    throw UnconstructibleParam("<entry>", entry.interface_name());
  }
  const ManagedMethod* method = db.find_method(entry.ref());
  if (!method) throw Error("unknown entry method " + entry.ref().str());

  ClassHierarchy h = build_hierarchy(db);
  std::mt19937_64 rng(seed);
  AttackScript script;
  script.strategy = Strategy::Simple;
  script.iface = entry.interface_name();
  script.budget = budget;

  for (const auto& p : method->params) {
    std::optional<std::string> value;
    std::string name = lower(p.name);
    for (const auto& [key, pool] : rules.name_presets) {
      if (!pool.empty() && name.find(key) != std::string::npos) {
        value = pool[std::uniform_int_distribution<size_t>(0, pool.size() - 1)(rng)];
        if (key == "uid") script.app_uid = std::stoi(*value);
        break;
      }
    }
    if (!value) {
      if (auto it = rules.type_presets.find(p.type); it != rules.type_presets.end()) {
        value = it->second;
      } else if (auto it2 = rules.primitive_defaults.find(p.type);
                 it2 != rules.primitive_defaults.end()) {
        value = it2->second;
      }
    }
    if (!value) {
      for (const auto& super : h.all_supertypes(p.type)) {
        if (auto stub = db.stub_bindings.find(super); stub != db.stub_bindings.end()) {
          value = "stub:" + stub->second;
          break;
        }
      }
    }
    if (!value) {
      const ManagedClass* cls = db.find_class(p.type);
      if (cls && !cls->is_interface()) value = "new:" + p.type;
    }
    if (!value) throw UnconstructibleParam(p.name, p.type);
    script.params[p.name] = *value;
  }
  return script;
}

std::vector<Verification> verify(const ProgramDb& db, const std::vector<LeakFinding>& findings,
                                 const SimConfig& config, const ParamRules& rules) {
  InterfaceCatalog catalog = catalog_from_findings(findings);
  std::vector<Verification> out;
  for (const auto& f : findings) {
    Verification v{f, false, std::nullopt, ""};
    try {
      AttackScript script = generate_poc(db, f.entry, rules, config.jgr_capacity, config.rng_seed);
      RunResult r = run(catalog, config, script);
      v.outcome = r.outcome.kind;
      v.verified = r.outcome.kind == OutcomeKind::Reboot;
      if (!v.verified) v.reason = "attack ended with " + std::string(to_string(r.outcome.kind));
    } catch (const UnconstructibleParam& e) {
      v.reason = e.what();
    }
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace jgrscan
