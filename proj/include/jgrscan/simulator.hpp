// include/jgrscan/simulator.hpp
//
// Deterministic model of a system process's global-reference table under
// attack, with the historical defenses as pluggable policies.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "jgrscan/detector.hpp"

namespace jgrscan {

/// Counter value the flawed proxy-limit reset leaves behind.
inline constexpr int64_t kBuggyResetValue = -2147467005;

struct NoDefense {
  friend bool operator==(const NoDefense&, const NoDefense&) = default;
};

/// Per-(app, interface) cap on live global references.
struct PerInterfaceLimit {
  std::map<std::string, int64_t> limits;
  friend bool operator==(const PerInterfaceLimit&, const PerInterfaceLimit&) = default;
};

/// Kills an app whose proxy count exceeds the threshold.
struct BinderProxyLimit {
  int64_t threshold = 6000;
  bool buggy_reset = false;
  int64_t reset_value = kBuggyResetValue;
  friend bool operator==(const BinderProxyLimit&, const BinderProxyLimit&) = default;
};

/// Denies creation once an app holds `threshold` global references.
struct Purger {
  int64_t threshold = 6000;
  friend bool operator==(const Purger&, const Purger&) = default;
};

using DefensePolicy = std::variant<NoDefense, PerInterfaceLimit, BinderProxyLimit, Purger>;

/// `none`, `per-interface:IFACE=N[,IFACE=N...]`, `binder-proxy:N[:buggy]`,
/// `purger[:N]`. Throws Error on malformed input.
DefensePolicy parse_policy(std::string_view spec);
std::string format_policy(const DefensePolicy& policy);
/// Row label used in outcome tables.
std::string policy_label(const DefensePolicy& policy);

struct SimConfig {
  int64_t jgr_capacity = 50000;
  DefensePolicy policy = NoDefense{};
  uint64_t rng_seed = 0;
  int64_t max_steps = 10'000'000;
  friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

enum class Strategy { Simple, ServiceBased, OneBinder };
std::string_view to_string(Strategy s);
Strategy parse_strategy(std::string_view name);

struct AttackScript {
  Strategy strategy = Strategy::Simple;
  /// `service.method`.
  std::string iface;
  /// Number of calls (Simple, OneBinder) or calls per stage (ServiceBased).
  int64_t budget = 1;
  int app_uid = 10001;
  std::map<std::string, std::string> params;
  friend bool operator==(const AttackScript&, const AttackScript&) = default;
};

struct AppState {
  int64_t proxy_count = 0;
  int64_t jgr_count = 0;
  bool alive = true;
  bool has_proxy = false;
  /// Live global references per interface.
  std::map<std::string, int64_t> iface_jgrs;
  friend bool operator==(const AppState&, const AppState&) = default;
};

struct SimState {
  std::map<int, AppState> apps;
  int64_t jgr_total = 0;
  int64_t step = 0;
  int64_t next_seq = 0;
  bool rebooted = false;
  friend bool operator==(const SimState&, const SimState&) = default;

  const AppState& app(int uid) const;
};

enum class EventKind {
  CallInvoked,
  ProxyCreated,
  JgrCreated,
  JgrDeleted,
  JgrDenied,
  AppKilled,
  AppRestarted,
  SystemReboot,
  Blocked,
};
std::string_view to_string(EventKind kind);

struct SimEvent {
  int64_t seq = 0;
  int64_t step = 0;
  EventKind kind = EventKind::CallInvoked;
  int uid = 0;
  std::string iface;
  int64_t proxy_count = 0;
  int64_t jgr_count = 0;
  int64_t jgr_total = 0;
  friend bool operator==(const SimEvent&, const SimEvent&) = default;
};

struct Action {
  enum class Kind { Call, Release, Restart };
  Kind kind = Kind::Call;
  int uid = 0;
  std::string iface;
  /// Call: reuse the app's existing proxy instead of constructing one.
  bool reuse_proxy = false;
  /// Release: number of references the app gives back on `iface`.
  int64_t count = 1;
};

/// Interface name -> whether a call pins a new global reference.
using InterfaceCatalog = std::map<std::string, bool>;

/// Every entry point of the findings marked as retaining.
InterfaceCatalog catalog_from_findings(const std::vector<LeakFinding>& findings);

struct StepResult {
  SimState state;
  std::vector<SimEvent> events;
};

/// Applies one action. Throws InvalidAction for unknown interfaces, for
/// calls from a dead app, for restarting a live app and after a reboot.
StepResult step(const SimState& state, const SimConfig& config, const InterfaceCatalog& catalog,
                const Action& action);

/// In-place variant of `step`; appends to `events`.
void apply(SimState& state, const SimConfig& config, const InterfaceCatalog& catalog,
           const Action& action, std::vector<SimEvent>& events);

enum class OutcomeKind { Reboot, AppKilled, Blocked, BudgetExhausted };
std::string_view to_string(OutcomeKind kind);

struct SimOutcome {
  OutcomeKind kind = OutcomeKind::BudgetExhausted;
  SimState final_state;
};

struct RunResult {
  std::vector<SimEvent> trace;
  SimOutcome outcome;
};

RunResult run(const InterfaceCatalog& catalog, const SimConfig& config, const AttackScript& script);
/// Builds the catalog by analysing `db` with its own configuration.
RunResult run(const ProgramDb& db, const SimConfig& config, const AttackScript& script);

std::string trace_to_jsonl(const std::vector<SimEvent>& trace);

struct Scenario {
  SimConfig config;
  AttackScript script;
};
Scenario parse_scenario(std::string_view json_text);
std::string scenario_to_json(const Scenario& scenario);

struct MatrixRow {
  std::string policy;
  std::vector<OutcomeKind> outcomes;
};
struct OutcomeMatrix {
  std::vector<Strategy> attacks;
  std::vector<MatrixRow> rows;
};

/// Runs every attack under every policy against `iface`.
OutcomeMatrix outcome_matrix(const InterfaceCatalog& catalog, const std::vector<DefensePolicy>& policies,
                             const std::vector<AttackScript>& attacks, int64_t capacity);

/// No defense followed by the four defense generations, all at `threshold`.
std::vector<DefensePolicy> standard_policies(const std::string& iface, int64_t threshold);
/// The three attacks on `iface`, each with `budget` calls (per stage).
std::vector<AttackScript> standard_attacks(const std::string& iface, int64_t budget);

std::string render_matrix(const OutcomeMatrix& matrix, std::string_view format);

}  // namespace jgrscan
