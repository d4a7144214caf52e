// tests/acceptance.cpp
//
// Runs every acceptance criterion and prints one PASS/FAIL line per
// criterion. Exit status is the number of failed criteria.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "agreement.hpp"
#include "corpus_gen.hpp"
#include "fixtures.hpp"
#include "fuzz.hpp"
#include "jgrscan/bench.hpp"
#include "jgrscan/detector.hpp"
#include "jgrscan/error.hpp"
#include "jgrscan/simulator.hpp"
#include "sim_invariants.hpp"
#include "sim_oracle.hpp"

using namespace jgrscan;
using namespace jgrscan::testing;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Verdict {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

Verdict golden_mini_corpus() {
  Verdict v;
  std::ifstream in(corpus_dir() / "mini" / "expected_findings.tsv");
  if (!in) {
    v.fail("missing expected_findings.tsv");
    return v;
  }
  std::set<std::vector<std::string>> expected;
  std::set<std::string> services;
  size_t known_fp = 0;
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cols;
    std::istringstream ls(line);
    for (std::string c; std::getline(ls, c, '\t');) cols.push_back(c);
    if (cols.size() != 5) {
      v.fail("malformed golden row: " + line);
      return v;
    }
    services.insert(cols[0]);
    if (cols[4] == "known_fp") ++known_fp;
    cols.pop_back();
    expected.insert(cols);
  }

  auto start = Clock::now();
  ProgramDb db = load_mini_corpus();
  AnalysisContext ctx(db);
  auto findings = detect(ctx, db.config);
  double elapsed = seconds_since(start);

  std::set<std::vector<std::string>> actual;
  std::set<std::string> flagged;
  for (const auto& f : findings) {
    actual.insert({f.entry.service_name, f.entry.ref().str(), std::string(to_string(f.entry.kind)),
                   std::string(to_string(f.exploitability))});
    flagged.insert(f.entry.ref().str());
  }
  size_t decoys = 0;
  for (const auto& e : extract_entry_points(ctx)) decoys += !flagged.contains(e.ref().str());

  std::ostringstream d;
  d << findings.size() << " findings over " << services.size() << " services, " << known_fp
    << " known FPs, " << decoys << " clean entries, " << elapsed << " s";
  v.detail = d.str();
  if (actual != expected) v.fail("findings differ from the golden set");
  if (services.size() < 12 || expected.size() < 20) v.fail("golden set too small");
  if (known_fp != 2) v.fail("expected exactly 2 known FP patterns");
  if (decoys < 5) v.fail("fewer than 5 benign decoy entries");
  if (elapsed >= 5.0) v.fail("runtime " + std::to_string(elapsed) + " s");
  return v;
}

Verdict brute_force_equivalence() {
  Verdict v;
  auto start = Clock::now();
  size_t with_findings = 0;
  for (uint64_t seed = 0; seed < 200; ++seed) {
    if (auto bad = check_detection_agreement(seed)) v.fail(*bad);
    with_findings += !analyzer_findings(parse_text(generate_corpus(seed)), kUnboundedDepth).empty();
  }
  double elapsed = seconds_since(start);
  if (v.pass) {
    v.detail = "200 corpora, " + std::to_string(with_findings) + " with findings, " +
               std::to_string(elapsed) + " s";
  }
  if (elapsed >= 60.0) v.fail("runtime " + std::to_string(elapsed) + " s");
  return v;
}

Verdict outcome_matrix_exact() {
  Verdict v;
  const std::string iface = "audio.startWatchingRoutes";
  const InterfaceCatalog catalog{{iface, true}};
  using O = OutcomeKind;
  const std::vector<std::vector<O>> expected{
      {O::Reboot, O::Reboot, O::Reboot},
      {O::Blocked, O::Blocked, O::Blocked},
      {O::AppKilled, O::AppKilled, O::Reboot},
      {O::AppKilled, O::Reboot, O::Reboot},
      {O::Blocked, O::Blocked, O::Blocked},
  };
  auto m = outcome_matrix(catalog, standard_policies(iface, 50), standard_attacks(iface, 200), 100);
  for (size_t p = 0; p < expected.size(); ++p) {
    if (m.rows.at(p).outcomes != expected[p]) v.fail("row " + m.rows[p].policy + " differs");
  }

  const RefPolicy ref[] = {RefPolicy::None, RefPolicy::PerInterface, RefPolicy::ProxyLimit,
                           RefPolicy::ProxyLimitBuggy, RefPolicy::Purger};
  const RefAttack attacks[] = {RefAttack::Simple, RefAttack::ServiceBased, RefAttack::OneBinder};
  size_t cells = 0;
  for (int64_t cap = 2; cap <= 64; ++cap) {
    for (int64_t t = 1; t < cap; ++t) {
      int64_t budget = 2 * cap;
      auto policies = standard_policies(iface, t);
      auto scripts = standard_attacks(iface, budget);
      for (size_t p = 0; p < policies.size(); ++p) {
        SimConfig config;
        config.jgr_capacity = cap;
        config.policy = policies[p];
        for (size_t a = 0; a < scripts.size(); ++a) {
          ++cells;
          RunResult r = run(catalog, config, scripts[a]);
          RefOutcome want = reference_run(ref[p], t, cap, attacks[a], budget);
          std::string where = "cap " + std::to_string(cap) + " t " + std::to_string(t) + " " +
                              policy_label(policies[p]) + " " + std::string(to_string(scripts[a].strategy));
          if (to_string(r.outcome.kind) != want.kind) v.fail(where + ": outcome mismatch");
          if (r.outcome.final_state.jgr_total != want.final_total) v.fail(where + ": total mismatch");
          int64_t peak = 0;
          for (const auto& e : r.trace) peak = std::max(peak, e.jgr_count);
          if (peak != want.peak_app_refs) v.fail(where + ": peak mismatch");
          bool purger = std::holds_alternative<Purger>(policies[p]);
          if (purger && (peak > t || r.outcome.kind == O::Reboot)) v.fail(where + ": purger bound");
          bool one_binder_bypass = std::holds_alternative<BinderProxyLimit>(policies[p]) &&
                                   scripts[a].strategy == Strategy::OneBinder;
          if (one_binder_bypass && r.outcome.kind != O::Reboot) v.fail(where + ": bypass expected");
        }
      }
    }
  }
  if (v.pass) v.detail = "matrix exact; " + std::to_string(cells) + " cells match reference stepping";
  return v;
}

Verdict bug_constant() {
  Verdict v;
  SimConfig config;
  config.jgr_capacity = 100;
  config.policy = BinderProxyLimit{50, true};
  AttackScript a;
  a.iface = "audio.startWatchingRoutes";
  a.budget = 60;
  RunResult r = run(InterfaceCatalog{{a.iface, true}}, config, a);
  int64_t counter = r.outcome.final_state.app(a.app_uid).proxy_count;
  v.detail = "post-kill counter " + std::to_string(counter);
  if (r.outcome.kind != OutcomeKind::AppKilled) v.fail("app was not killed");
  if (counter != -2147467005) v.fail(v.detail);
  if (std::get<BinderProxyLimit>(parse_policy("binder-proxy:6000:buggy")).reset_value != -2147467005) {
    v.fail("parsed policy carries a different reset value");
  }
  return v;
}

Verdict purger_overhead() {
  Verdict v;
  auto start = Clock::now();
  auto points = bench_grid(kRequestGrid, 5);
  double elapsed = seconds_since(start);
  std::ostringstream d;
  d.precision(3);
  bool within = true;
  for (const auto& p : points) {
    if (p.n != 10000 && p.n != 48000) continue;
    d << "n=" << p.n << " overhead " << 100 * p.overhead() << "%, ";
    within = within && p.overhead() <= 0.15;
  }
  d << elapsed << " s";
  v.detail = d.str();
  v.pass = within && elapsed < 120.0;
  return v;
}

Verdict simulator_invariants() {
  Verdict v;
  for (uint64_t seed = 0; seed < 1000; ++seed) {
    if (auto bad = check_script_invariants(random_script(seed))) {
      v.fail("seed " + std::to_string(seed) + ": " + *bad);
    }
  }
  if (v.pass) v.detail = "1000 scripts";
  return v;
}

Verdict round_trip_and_fuzz() {
  Verdict v;
  std::vector<std::string> seeds;
  size_t groups = 0;
  for (const auto& group : round_trip_groups()) {
    ++groups;
    try {
      ProgramDb db = parse_corpus(group);
      std::string printed = print_corpus(db);
      if (!(parse_text(printed) == db)) v.fail("round trip differs for " + group.front().name);
      for (const auto& u : group) seeds.push_back(u.text);
    } catch (const std::exception& e) {
      v.fail(group.front().name + ": " + e.what());
    }
  }

  size_t parsed = 0, rejected = 0;
  double slowest = 0;
  for (uint64_t i = 0; i < 10000; ++i) {
    std::string input = fuzz_input(seeds, i);
    auto start = Clock::now();
    try {
      parse_text(input, "fuzz.jir");
      ++parsed;
    } catch (const PositionedError&) {
      ++rejected;
    } catch (const std::exception& e) {
      v.fail("input " + std::to_string(i) + " raised an unpositioned error: " + e.what());
    }
    double t = seconds_since(start);
    slowest = std::max(slowest, t);
    if (t > 1.0) v.fail("input " + std::to_string(i) + " took " + std::to_string(t) + " s");
  }
  if (v.pass) {
    std::ostringstream d;
    d << groups << " groups round-trip; fuzz " << parsed << " parsed, " << rejected
      << " positioned errors, slowest " << slowest * 1000 << " ms";
    v.detail = d.str();
  }
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"1 golden mini corpus", golden_mini_corpus},
      {"2 brute-force equivalence", brute_force_equivalence},
      {"3 outcome matrix", outcome_matrix_exact},
      {"4 bug constant", bug_constant},
      {"5 purger overhead", purger_overhead},
      {"6 simulator invariants", simulator_invariants},
      {"7 round trip and fuzz", round_trip_and_fuzz},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v.fail(std::string("exception: ") + e.what());
    }
    failed += !v.pass;
    std::cout << (v.pass ? "PASS " : "FAIL ") << name << ": " << v.detail << std::endl;
  }
  return failed;
}
