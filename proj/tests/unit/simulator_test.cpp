// tests/unit/simulator_test.cpp
#include <algorithm>

#include "doctest.h"
#include "fixtures.hpp"
#include "jgrscan/error.hpp"
#include "jgrscan/simulator.hpp"
#include "json.hpp"
#include "sim_oracle.hpp"

using namespace jgrscan;
using namespace jgrscan::testing;

namespace {

const InterfaceCatalog kCatalog{{"audio.startWatchingRoutes", true}, {"audio.getStreamVolume", false}};
const std::string kIface = "audio.startWatchingRoutes";

SimConfig config_with(int64_t capacity, DefensePolicy policy) {
  SimConfig c;
  c.jgr_capacity = capacity;
  c.policy = std::move(policy);
  return c;
}

AttackScript attack(Strategy s, int64_t budget) {
  AttackScript a;
  a.strategy = s;
  a.iface = kIface;
  a.budget = budget;
  return a;
}

Action call(int uid = 10001) { return {Action::Kind::Call, uid, kIface, false, 1}; }

size_t count(const std::vector<SimEvent>& trace, EventKind kind) {
  return static_cast<size_t>(std::count_if(trace.begin(), trace.end(),
                                           [&](const SimEvent& e) { return e.kind == kind; }));
}

}  // namespace

TEST_SUITE("simulator") {

TEST_CASE("hundredth creation reboots a table of one hundred") {
  auto r = run(kCatalog, config_with(100, NoDefense{}), attack(Strategy::Simple, 100));
  CHECK(r.outcome.kind == OutcomeKind::Reboot);
  CHECK(count(r.trace, EventKind::JgrCreated) == 100);
  CHECK(r.trace.back().kind == EventKind::SystemReboot);
  CHECK(r.trace.back().jgr_total == 100);
  auto short_run = run(kCatalog, config_with(100, NoDefense{}), attack(Strategy::Simple, 99));
  CHECK(short_run.outcome.kind == OutcomeKind::BudgetExhausted);
}

TEST_CASE("buggy proxy limit leaves the negative counter behind") {
  SimConfig c = config_with(50000, BinderProxyLimit{6000, true});
  SimState s;
  s.apps[10001].proxy_count = 6000;
  auto out = step(s, c, kCatalog, call());
  CHECK(out.events.back().kind == EventKind::AppKilled);
  CHECK(out.state.app(10001).proxy_count == -2147467005);
  CHECK(out.state.app(10001).proxy_count == kBuggyResetValue);
  CHECK_FALSE(out.state.app(10001).alive);
}

TEST_CASE("purger denies creation at its threshold") {
  SimConfig c = config_with(50000, Purger{6000});
  SimState s;
  s.apps[10001].jgr_count = 6000;
  s.apps[10001].iface_jgrs[kIface] = 6000;
  s.jgr_total = 6000;
  auto out = step(s, c, kCatalog, call());
  CHECK(out.events.back().kind == EventKind::JgrDenied);
  CHECK(out.state.jgr_total == 6000);
  CHECK(out.state.app(10001).jgr_count == 6000);
}

TEST_CASE("non-buggy proxy limit kills the simple attack at call 51") {
  auto r = run(kCatalog, config_with(100, BinderProxyLimit{50, false}), attack(Strategy::Simple, 200));
  CHECK(r.outcome.kind == OutcomeKind::AppKilled);
  CHECK(count(r.trace, EventKind::CallInvoked) == 51);
  CHECK(count(r.trace, EventKind::SystemReboot) == 0);
  CHECK(r.outcome.final_state.jgr_total == 0);
}

TEST_CASE("service based attack overflows before the buggy counter recovers") {
  auto r = run(kCatalog, config_with(100, BinderProxyLimit{50, true}), attack(Strategy::ServiceBased, 200));
  CHECK(r.outcome.kind == OutcomeKind::Reboot);
  CHECK(count(r.trace, EventKind::AppRestarted) == 1);
  CHECK(count(r.trace, EventKind::AppKilled) == 1);
}

TEST_CASE("one binder attack keeps the proxy counter at one") {
  auto r = run(kCatalog, config_with(100, BinderProxyLimit{50, false}), attack(Strategy::OneBinder, 100));
  CHECK(r.outcome.kind == OutcomeKind::Reboot);
  CHECK(r.outcome.final_state.app(10001).proxy_count == 1);
  CHECK(count(r.trace, EventKind::ProxyCreated) == 1);
}

TEST_CASE("per-interface limit blocks past its threshold") {
  auto r = run(kCatalog, config_with(100, PerInterfaceLimit{{{kIface, 50}}}), attack(Strategy::Simple, 100));
  CHECK(r.outcome.kind == OutcomeKind::Blocked);
  CHECK(r.outcome.final_state.jgr_total == 50);
}

TEST_CASE("non-retaining interface never creates references") {
  AttackScript a = attack(Strategy::Simple, 500);
  a.iface = "audio.getStreamVolume";
  auto r = run(kCatalog, config_with(100, NoDefense{}), a);
  CHECK(r.outcome.kind == OutcomeKind::BudgetExhausted);
  CHECK(r.outcome.final_state.jgr_total == 0);
}

TEST_CASE("invalid actions") {
  SimConfig c = config_with(100, NoDefense{});
  SimState s;
  CHECK_THROWS_AS(step(s, c, kCatalog, {Action::Kind::Call, 1, "nope.nope", false, 1}), InvalidAction);
  CHECK_THROWS_AS(step(s, c, kCatalog, {Action::Kind::Restart, 1, "", false, 1}), InvalidAction);
  s.apps[1].alive = false;
  CHECK_THROWS_AS(step(s, c, kCatalog, call(1)), InvalidAction);
  CHECK_NOTHROW(step(s, c, kCatalog, {Action::Kind::Restart, 1, "", false, 1}));
  CHECK_THROWS_AS(run(kCatalog, c, AttackScript{Strategy::Simple, "x.y", 1, 1, {}}), InvalidAction);
}

TEST_CASE("release gives references back") {
  SimConfig c = config_with(100, NoDefense{});
  SimState s;
  std::vector<SimEvent> ev;
  for (int i = 0; i < 5; ++i) apply(s, c, kCatalog, call(), ev);
  apply(s, c, kCatalog, {Action::Kind::Release, 10001, kIface, false, 3}, ev);
  CHECK(s.jgr_total == 2);
  CHECK(s.app(10001).jgr_count == 2);
  apply(s, c, kCatalog, {Action::Kind::Release, 10001, kIface, false, 10}, ev);
  CHECK(s.jgr_total == 0);
}

TEST_CASE("standard matrix at capacity 100 and threshold 50") {
  auto m = outcome_matrix(kCatalog, standard_policies(kIface, 50), standard_attacks(kIface, 100), 100);
  using O = OutcomeKind;
  REQUIRE(m.rows.size() == 5);
  CHECK(m.rows[0].outcomes == std::vector<O>{O::Reboot, O::Reboot, O::Reboot});
  CHECK(m.rows[1].outcomes[0] == O::Blocked);
  CHECK(m.rows[2].outcomes == std::vector<O>{O::AppKilled, O::AppKilled, O::Reboot});
  CHECK(m.rows[3].outcomes[1] == O::Reboot);
  CHECK(m.rows[4].outcomes == std::vector<O>{O::Blocked, O::Blocked, O::Blocked});
}

TEST_CASE("matrix agrees with reference stepping") {
  const RefPolicy ref[] = {RefPolicy::None, RefPolicy::PerInterface, RefPolicy::ProxyLimit,
                           RefPolicy::ProxyLimitBuggy, RefPolicy::Purger};
  const RefAttack attacks[] = {RefAttack::Simple, RefAttack::ServiceBased, RefAttack::OneBinder};
  for (int64_t t : {int64_t{1}, int64_t{7}, int64_t{50}}) {
    for (int64_t cap : {t + 1, 2 * t + 3, int64_t{100}}) {
      auto m = outcome_matrix(kCatalog, standard_policies(kIface, t), standard_attacks(kIface, cap), cap);
      for (size_t p = 0; p < 5; ++p) {
        for (size_t a = 0; a < 3; ++a) {
          CAPTURE(t);
          CAPTURE(cap);
          CAPTURE(p);
          CAPTURE(a);
          CHECK(to_string(m.rows[p].outcomes[a]) == reference_run(ref[p], t, cap, attacks[a], cap).kind);
        }
      }
    }
  }
}

TEST_CASE("render matrix formats") {
  auto m = outcome_matrix(kCatalog, standard_policies(kIface, 50), standard_attacks(kIface, 100), 100);
  auto j = nlohmann::json::parse(render_matrix(m, "json"));
  CHECK(j.at("rows").size() == 5);
  CHECK(j.at("rows").at(0).at("outcomes").at("one_binder") == "Reboot");
  std::string csv = render_matrix(m, "csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);
  CHECK(render_matrix(m, "table").find("Purger") != std::string::npos);
  CHECK_THROWS_AS(render_matrix(m, "yaml"), UnknownFormat);
}

TEST_CASE("policy specs round-trip") {
  for (const char* spec : {"none", "per-interface:audio.startWatchingRoutes=50,wifi.acquireWiFiLock=1",
                           "binder-proxy:6000", "binder-proxy:6000:buggy", "purger:6000", "purger:1"}) {
    CAPTURE(spec);
    DefensePolicy p = parse_policy(spec);
    CHECK(parse_policy(format_policy(p)) == p);
  }
  CHECK(parse_policy("purger") == DefensePolicy{Purger{6000}});
  CHECK(std::get<BinderProxyLimit>(parse_policy("binder-proxy:2500:buggy")).reset_value ==
        kBuggyResetValue);
  CHECK_THROWS_AS(parse_policy("purger:0"), Error);
  CHECK_THROWS_AS(parse_policy("firewall"), Error);
  CHECK_THROWS_AS(parse_policy("binder-proxy:x"), Error);
}

TEST_CASE("scenario json round-trips") {
  Scenario s;
  s.config = config_with(120, BinderProxyLimit{50, true});
  s.config.rng_seed = 7;
  s.script = attack(Strategy::ServiceBased, 80);
  s.script.params["uid"] = "10002";
  Scenario back = parse_scenario(scenario_to_json(s));
  CHECK(back.config == s.config);
  CHECK(back.script == s.script);
  CHECK_THROWS_AS(parse_scenario("{}"), Error);
  CHECK_THROWS_AS(parse_scenario("{\"config\":{\"jgr_capacity\":0},\"script\":{\"iface\":\"a.b\"}}"), Error);
}

TEST_CASE("traces serialize one event per line") {
  auto r = run(kCatalog, config_with(10, NoDefense{}), attack(Strategy::Simple, 10));
  std::string jsonl = trace_to_jsonl(r.trace);
  CHECK(static_cast<size_t>(std::count(jsonl.begin(), jsonl.end(), '\n')) == r.trace.size());
  auto first = nlohmann::json::parse(jsonl.substr(0, jsonl.find('\n')));
  CHECK(first.at("event") == "CallInvoked");
  CHECK(first.at("seq") == 0);
}

TEST_CASE("run on a db builds the catalog from its findings") {
  ProgramDb db = load_fixtures({"audio.jir", "audio_boot.jir"});
  auto r = run(db, config_with(20, NoDefense{}), attack(Strategy::Simple, 20));
  CHECK(r.outcome.kind == OutcomeKind::Reboot);
}

}  // TEST_SUITE
