// tests/unit/poc_test.cpp
#include <algorithm>

#include "doctest.h"
#include "fixtures.hpp"
#include "jgrscan/error.hpp"
#include "jgrscan/poc.hpp"

using namespace jgrscan;
using namespace jgrscan::testing;

namespace {

EntryPoint poc_entry(const std::string& method) {
  return {"poc", EntryKind::SystemService, "demo.PocService", method, Visibility::Public, std::nullopt};
}

std::vector<LeakFinding> audio_findings(const ProgramDb& db) {
  AnalysisContext ctx(db);
  return detect(ctx, db.config);
}

}  // namespace

TEST_SUITE("poc") {

TEST_CASE("callback parameters are bound to their stub proxy") {
  ProgramDb db = load_fixtures({"poc.jir"});
  auto s = generate_poc(db, poc_entry("startWatchingRoutes"), ParamRules::defaults(), 10);
  CHECK(s.iface == "poc.startWatchingRoutes");
  CHECK(s.budget == 10);
  CHECK(s.strategy == Strategy::Simple);
  CHECK(s.params.at("observer") == "stub:android.media.IAudioRoutesObserver$Stub$Proxy");
}

TEST_CASE("name, type and primitive presets") {
  ProgramDb db = load_fixtures({"poc.jir"});
  auto s = generate_poc(db, poc_entry("setUidMode"), ParamRules::defaults());
  CHECK(s.params.at("looper") == "Looper.getMainLooper()");
  const ParamRules rules = ParamRules::defaults();
  const auto& uids = rules.name_presets.at("uid");
  CHECK(std::find(uids.begin(), uids.end(), s.params.at("uid")) != uids.end());
  CHECK(s.app_uid == std::stoi(s.params.at("uid")));
  CHECK(s.params.at("packageName").starts_with("com.example.poc"));
}

TEST_CASE("generation is deterministic for a seed") {
  ProgramDb db = load_fixtures({"poc.jir"});
  for (uint64_t seed : {0u, 1u, 99u}) {
    CHECK(generate_poc(db, poc_entry("setUidMode"), ParamRules::defaults(), 1, seed) ==
          generate_poc(db, poc_entry("setUidMode"), ParamRules::defaults(), 1, seed));
  }
}

TEST_CASE("concrete corpus classes are constructed") {
  ProgramDb db = load_fixtures({"poc.jir"});
  auto s = generate_poc(db, poc_entry("withToken"), ParamRules::defaults());
  CHECK(s.params.at("t") == "new:demo.PrivateToken");
}

TEST_CASE("interfaces without a stub cannot be synthesized") {
  ProgramDb db = load_fixtures({"poc.jir"});
  try {
    generate_poc(db, poc_entry("restricted"), ParamRules::defaults());
    FAIL("expected UnconstructibleParam");
  } catch (const UnconstructibleParam& e) {
    CHECK(e.name() == "p");
    CHECK(e.type() == "demo.ISecret");
  }
}

TEST_CASE("blacklisted entries are refused") {
  ProgramDb db = load_fixtures({"poc.jir"});
  ParamRules rules = ParamRules::defaults();
  rules.blacklist.insert("poc.withToken");
  CHECK_THROWS_AS(generate_poc(db, poc_entry("withToken"), rules), UnconstructibleParam);
}

TEST_CASE("audio finding verifies without a defense") {
  ProgramDb db = load_fixtures({"audio.jir", "audio_boot.jir"});
  auto findings = audio_findings(db);
  REQUIRE(findings.size() == 1);
  SimConfig config;
  config.jgr_capacity = 200;
  auto v = verify(db, findings, config);
  REQUIRE(v.size() == 1);
  CHECK(v[0].verified);
  CHECK(v[0].outcome == OutcomeKind::Reboot);
  CHECK(v[0].reason.empty());
}

TEST_CASE("purger keeps the audio finding unverified") {
  ProgramDb db = load_fixtures({"audio.jir", "audio_boot.jir"});
  SimConfig config;
  config.jgr_capacity = 200;
  config.policy = Purger{50};
  auto v = verify(db, audio_findings(db), config);
  REQUIRE(v.size() == 1);
  CHECK_FALSE(v[0].verified);
  CHECK(v[0].outcome == OutcomeKind::Blocked);
  CHECK(v[0].reason.find("Blocked") != std::string::npos);
}

TEST_CASE("unconstructible parameters leave a reason") {
  ProgramDb db = load_fixtures({"audio.jir", "audio_boot.jir"});
  ParamRules rules = ParamRules::defaults();
  rules.type_presets.erase("android.os.IBinder");
  auto v = verify(db, audio_findings(db), SimConfig{}, rules);
  REQUIRE(v.size() == 1);
  CHECK_FALSE(v[0].verified);
  CHECK_FALSE(v[0].outcome.has_value());
  CHECK(v[0].reason.find("observer") != std::string::npos);
}

}  // TEST_SUITE
