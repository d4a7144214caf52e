// src/simulator.cpp
#include "jgrscan/simulator.hpp"

#include <charconv>
#include <sstream>

#include "jgrscan/error.hpp"
#include "json.hpp"

namespace jgrscan {

namespace {

int64_t parse_count(std::string_view text, std::string_view what) {
  int64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || value < 1) {
    throw Error("invalid " + std::string(what) + " '" + std::string(text) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  size_t start = 0;
  while (true) {
    size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

DefensePolicy parse_policy(std::string_view spec) {
  auto parts = split(spec, ':');
  const auto kind = parts[0];
  if (kind == "none" && parts.size() == 1) return NoDefense{};
  if (kind == "per-interface" && parts.size() == 2) {
    PerInterfaceLimit p;
    for (auto item : split(parts[1], ',')) {
      auto eq = item.find('=');
      if (eq == std::string_view::npos || eq == 0) {
        throw Error("expected IFACE=N in policy '" + std::string(spec) + "'");
      }
      p.limits[std::string(item.substr(0, eq))] = parse_count(item.substr(eq + 1), "threshold");
    }
    return p;
  }
  if (kind == "binder-proxy" && (parts.size() == 2 || parts.size() == 3)) {
    BinderProxyLimit p;
    p.threshold = parse_count(parts[1], "threshold");
    if (parts.size() == 3) {
      if (parts[2] != "buggy") throw Error("unknown binder-proxy option '" + std::string(parts[2]) + "'");
      p.buggy_reset = true;
    }
    return p;
  }
  if (kind == "purger" && parts.size() <= 2) {
    Purger p;
    if (parts.size() == 2) p.threshold = parse_count(parts[1], "threshold");
    return p;
  }
  throw Error("unknown policy '" + std::string(spec) + "'");
}

std::string format_policy(const DefensePolicy& policy) {
  return std::visit(
      [](const auto& p) -> std::string {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, NoDefense>) {
          return "none";
        } else if constexpr (std::is_same_v<T, PerInterfaceLimit>) {
          std::string out = "per-interface:";
          bool first = true;
          for (const auto& [iface, n] : p.limits) {
            out += (first ? "" : ",") + iface + "=" + std::to_string(n);
            first = false;
          }
          return out;
        } else if constexpr (std::is_same_v<T, BinderProxyLimit>) {
          return "binder-proxy:" + std::to_string(p.threshold) + (p.buggy_reset ? ":buggy" : "");
        } else {
          return "purger:" + std::to_string(p.threshold);
        }
      },
      policy);
}

std::string policy_label(const DefensePolicy& policy) {
  return std::visit(
      [](const auto& p) -> std::string {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, NoDefense>) {
          return "None";
        } else if constexpr (std::is_same_v<T, PerInterfaceLimit>) {
          std::set<int64_t> values;
          for (const auto& [iface, n] : p.limits) values.insert(n);
          if (values.size() == 1) return "PerInterfaceLimit(" + std::to_string(*values.begin()) + ")";
          return "PerInterfaceLimit(" + format_policy(p).substr(14) + ")";
        } else if constexpr (std::is_same_v<T, BinderProxyLimit>) {
          return "BinderProxyLimit(" + std::to_string(p.threshold) +
                 (p.buggy_reset ? ", buggy" : "") + ")";
        } else {
          return "Purger(" + std::to_string(p.threshold) + ")";
        }
      },
      policy);
}

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::Simple: return "simple";
    case Strategy::ServiceBased: return "service_based";
    case Strategy::OneBinder: return "one_binder";
  }
  return "?";
}

Strategy parse_strategy(std::string_view name) {
  for (auto s : {Strategy::Simple, Strategy::ServiceBased, Strategy::OneBinder}) {
    if (to_string(s) == name) return s;
  }
  throw Error("unknown attack strategy '" + std::string(name) + "'");
}

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::CallInvoked: return "CallInvoked";
    case EventKind::ProxyCreated: return "ProxyCreated";
    case EventKind::JgrCreated: return "JgrCreated";
    case EventKind::JgrDeleted: return "JgrDeleted";
    case EventKind::JgrDenied: return "JgrDenied";
    case EventKind::AppKilled: return "AppKilled";
    case EventKind::AppRestarted: return "AppRestarted";
    case EventKind::SystemReboot: return "SystemReboot";
    case EventKind::Blocked: return "Blocked";
  }
  return "?";
}

std::string_view to_string(OutcomeKind kind) {
  switch (kind) {
    case OutcomeKind::Reboot: return "Reboot";
    case OutcomeKind::AppKilled: return "AppKilled";
    case OutcomeKind::Blocked: return "Blocked";
    case OutcomeKind::BudgetExhausted: return "BudgetExhausted";
  }
  return "?";
}

const AppState& SimState::app(int uid) const {
  static const AppState kFresh;
  auto it = apps.find(uid);
  return it == apps.end() ? kFresh : it->second;
}

InterfaceCatalog catalog_from_findings(const std::vector<LeakFinding>& findings) {
  InterfaceCatalog out;
  for (const auto& f : findings) out[f.entry.interface_name()] = true;
  return out;
}

void apply(SimState& state, const SimConfig& config, const InterfaceCatalog& catalog,
           const Action& action, std::vector<SimEvent>& events) {
  if (state.rebooted) throw InvalidAction("the system process has rebooted");
  bool retains = false;
  if (action.kind != Action::Kind::Restart) {
    auto it = catalog.find(action.iface);
    if (it == catalog.end()) throw InvalidAction("unknown interface '" + action.iface + "'");
    retains = it->second;
  }
  AppState& app = state.apps[action.uid];
  if (action.kind == Action::Kind::Restart ? app.alive : !app.alive) {
    throw InvalidAction("app " + std::to_string(action.uid) +
                        (app.alive ? " is already running" : " is not running"));
  }

  ++state.step;
  auto emit = [&](EventKind kind) {
    events.push_back({state.next_seq++, state.step, kind, action.uid, action.iface,
                      app.proxy_count, app.jgr_count, state.jgr_total});
  };

  if (action.kind == Action::Kind::Restart) {
    app.alive = true;
    emit(EventKind::AppRestarted);
    return;
  }
  if (action.kind == Action::Kind::Release) {
    auto& live = app.iface_jgrs[action.iface];
    int64_t n = std::min(std::max<int64_t>(action.count, 0), live);
    live -= n;
    app.jgr_count -= n;
    state.jgr_total -= n;
    emit(EventKind::JgrDeleted);
    return;
  }

  emit(EventKind::CallInvoked);
  if (const auto* limit = std::get_if<PerInterfaceLimit>(&config.policy)) {
    auto it = limit->limits.find(action.iface);
    if (it != limit->limits.end() && app.iface_jgrs[action.iface] >= it->second) {
      emit(EventKind::Blocked);
      return;
    }
  }
  if (!(action.reuse_proxy && app.has_proxy)) {
    ++app.proxy_count;
    app.has_proxy = true;
    emit(EventKind::ProxyCreated);
  }
  if (const auto* bpl = std::get_if<BinderProxyLimit>(&config.policy);
      bpl && app.proxy_count > bpl->threshold) {
    state.jgr_total -= app.jgr_count;
    app.jgr_count = 0;
    app.iface_jgrs.clear();
    app.proxy_count = bpl->buggy_reset ? bpl->reset_value : 0;
    app.has_proxy = false;
    app.alive = false;
    emit(EventKind::AppKilled);
    return;
  }
  if (!retains) return;
  if (const auto* purger = std::get_if<Purger>(&config.policy);
      purger && app.jgr_count >= purger->threshold) {
    emit(EventKind::JgrDenied);
    return;
  }
  ++app.jgr_count;
  ++app.iface_jgrs[action.iface];
  ++state.jgr_total;
  emit(EventKind::JgrCreated);
  if (state.jgr_total >= config.jgr_capacity) {
    state.rebooted = true;
    emit(EventKind::SystemReboot);
  }
}

StepResult step(const SimState& state, const SimConfig& config, const InterfaceCatalog& catalog,
                const Action& action) {
  StepResult out{state, {}};
  apply(out.state, config, catalog, action, out.events);
  return out;
}

RunResult run(const InterfaceCatalog& catalog, const SimConfig& config, const AttackScript& script) {
  if (!catalog.contains(script.iface)) {
    throw InvalidAction("unknown interface '" + script.iface + "'");
  }
  RunResult result;
  SimState& state = result.outcome.final_state;
  auto& trace = result.trace;
  const Action call{Action::Kind::Call, script.app_uid, script.iface,
                    script.strategy == Strategy::OneBinder, 1};

  enum class Stop { None, Reboot, Killed, Blocked, Steps };
  auto spam = [&]() -> Stop {
    for (int64_t i = 0; i < script.budget; ++i) {
      if (state.step >= config.max_steps) return Stop::Steps;
      size_t first = trace.size();
      apply(state, config, catalog, call, trace);
      for (size_t e = first; e < trace.size(); ++e) {
        switch (trace[e].kind) {
          case EventKind::SystemReboot: return Stop::Reboot;
          case EventKind::AppKilled: return Stop::Killed;
          case EventKind::Blocked:
          case EventKind::JgrDenied: return Stop::Blocked;
          default: break;
        }
      }
    }
    return Stop::None;
  };
  auto finish = [&](Stop stop) {
    switch (stop) {
      case Stop::Reboot: result.outcome.kind = OutcomeKind::Reboot; break;
      case Stop::Killed: result.outcome.kind = OutcomeKind::AppKilled; break;
      case Stop::Blocked: result.outcome.kind = OutcomeKind::Blocked; break;
      default: result.outcome.kind = OutcomeKind::BudgetExhausted; break;
    }
    return result;
  };

  Stop stop = spam();
  if (script.strategy != Strategy::ServiceBased || stop != Stop::Killed) return finish(stop);
  if (state.step >= config.max_steps) return finish(Stop::Steps);
  apply(state, config, catalog, {Action::Kind::Restart, script.app_uid, script.iface, false, 1},
        trace);
  return finish(spam());
}

RunResult run(const ProgramDb& db, const SimConfig& config, const AttackScript& script) {
  AnalysisContext ctx(db);
  InterfaceCatalog catalog;
  for (const auto& e : extract_entry_points(ctx)) catalog[e.interface_name()] = false;
  for (const auto& [iface, retains] : catalog_from_findings(detect(ctx, db.config))) {
    catalog[iface] = retains;
  }
  return run(catalog, config, script);
}

std::string trace_to_jsonl(const std::vector<SimEvent>& trace) {
  std::string out;
  for (const auto& e : trace) {
    nlohmann::ordered_json j;
    j["seq"] = e.seq;
    j["step"] = e.step;
    j["event"] = to_string(e.kind);
    j["uid"] = e.uid;
    j["iface"] = e.iface;
    j["proxy_count"] = e.proxy_count;
    j["jgr_count"] = e.jgr_count;
    j["jgr_total"] = e.jgr_total;
    out += j.dump();
    out += '\n';
  }
  return out;
}

Scenario parse_scenario(std::string_view json_text) {
  Scenario s;
  try {
    auto j = nlohmann::json::parse(json_text);
    const auto& c = j.at("config");
    s.config.jgr_capacity = c.value("jgr_capacity", s.config.jgr_capacity);
    s.config.policy = parse_policy(c.value("policy", std::string("none")));
    s.config.rng_seed = c.value("rng_seed", s.config.rng_seed);
    s.config.max_steps = c.value("max_steps", s.config.max_steps);
    const auto& a = j.at("script");
    s.script.strategy = parse_strategy(a.value("strategy", std::string("simple")));
    s.script.iface = a.at("iface").get<std::string>();
    s.script.budget = a.value("budget", s.script.budget);
    s.script.app_uid = a.value("app_uid", s.script.app_uid);
    s.script.params = a.value("params", std::map<std::string, std::string>{});
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("invalid scenario: ") + e.what());
  }
  if (s.config.jgr_capacity < 1 || s.config.max_steps < 1 || s.script.budget < 1) {
    throw Error("invalid scenario: capacity, max_steps and budget must be positive");
  }
  return s;
}

std::string scenario_to_json(const Scenario& s) {
  nlohmann::ordered_json j;
  j["config"] = {{"jgr_capacity", s.config.jgr_capacity},
                 {"policy", format_policy(s.config.policy)},
                 {"rng_seed", s.config.rng_seed},
                 {"max_steps", s.config.max_steps}};
  j["script"] = {{"strategy", to_string(s.script.strategy)},
                 {"iface", s.script.iface},
                 {"budget", s.script.budget},
                 {"app_uid", s.script.app_uid},
                 {"params", s.script.params}};
  return j.dump(2) + "\n";
}

std::vector<DefensePolicy> standard_policies(const std::string& iface, int64_t threshold) {
  return {NoDefense{}, PerInterfaceLimit{{{iface, threshold}}}, BinderProxyLimit{threshold, false},
          BinderProxyLimit{threshold, true}, Purger{threshold}};
}

std::vector<AttackScript> standard_attacks(const std::string& iface, int64_t budget) {
  std::vector<AttackScript> out;
  for (auto s : {Strategy::Simple, Strategy::ServiceBased, Strategy::OneBinder}) {
    AttackScript a;
    a.strategy = s;
    a.iface = iface;
    a.budget = budget;
    out.push_back(a);
  }
  return out;
}

OutcomeMatrix outcome_matrix(const InterfaceCatalog& catalog,
                             const std::vector<DefensePolicy>& policies,
                             const std::vector<AttackScript>& attacks, int64_t capacity) {
  OutcomeMatrix m;
  for (const auto& a : attacks) m.attacks.push_back(a.strategy);
  for (const auto& p : policies) {
    SimConfig config;
    config.jgr_capacity = capacity;
    config.policy = p;
    MatrixRow row{policy_label(p), {}};
    for (const auto& a : attacks) row.outcomes.push_back(run(catalog, config, a).outcome.kind);
    m.rows.push_back(std::move(row));
  }
  return m;
}

std::string render_matrix(const OutcomeMatrix& m, std::string_view format) {
  if (format == "json") {
    nlohmann::ordered_json j;
    j["attacks"] = nlohmann::ordered_json::array();
    for (auto a : m.attacks) j["attacks"].push_back(to_string(a));
    j["rows"] = nlohmann::ordered_json::array();
    for (const auto& r : m.rows) {
      nlohmann::ordered_json row;
      row["policy"] = r.policy;
      for (size_t i = 0; i < r.outcomes.size(); ++i) {
        row["outcomes"][std::string(to_string(m.attacks[i]))] = to_string(r.outcomes[i]);
      }
      j["rows"].push_back(row);
    }
    return j.dump(2) + "\n";
  }
  if (format == "csv") {
    std::ostringstream out;
    out << "policy";
    for (auto a : m.attacks) out << ',' << to_string(a);
    out << '\n';
    for (const auto& r : m.rows) {
      out << '"' << r.policy << '"';
      for (auto o : r.outcomes) out << ',' << to_string(o);
      out << '\n';
    }
    return out.str();
  }
  if (format != "table") throw UnknownFormat(std::string(format));

  std::vector<std::string> header{"Policy"};
  for (auto a : m.attacks) header.emplace_back(to_string(a));
  std::vector<size_t> width;
  for (const auto& h : header) width.push_back(h.size());
  for (const auto& r : m.rows) {
    width[0] = std::max(width[0], r.policy.size());
    for (size_t i = 0; i < r.outcomes.size(); ++i) {
      width[i + 1] = std::max(width[i + 1], to_string(r.outcomes[i]).size());
    }
  }
  std::ostringstream out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) {
      out << (i ? "  " : "") << cells[i];
      if (i + 1 < cells.size()) out << std::string(width[i] - cells[i].size(), ' ');
    }
    out << '\n';
  };
  line(header);
  std::vector<std::string> rule;
  for (size_t w : width) rule.emplace_back(w, '-');
  line(rule);
  for (const auto& r : m.rows) {
    std::vector<std::string> cells{r.policy};
    for (auto o : r.outcomes) cells.emplace_back(to_string(o));
    line(cells);
  }
  return out.str();
}

}  // namespace jgrscan
