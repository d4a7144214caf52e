// src/detector.cpp
#include "jgrscan/detector.hpp"

#include <algorithm>
#include <tuple>

#include "jgrscan/validate.hpp"

namespace jgrscan {

std::string_view to_string(Exploitability e) {
  switch (e) {
    case Exploitability::Public: return "public";
    case Exploitability::Greylist: return "greylist";
    case Exploitability::Hidden: return "hidden";
    case Exploitability::PermissionGated: return "permission_gated";
  }
  return "?";
}

std::map<std::string, size_t> Report::per_service() const {
  std::map<std::string, size_t> out;
  for (const auto& f : findings) ++out[f.entry.service_name];
  return out;
}

std::map<std::string, size_t> Report::per_exploitability() const {
  std::map<std::string, size_t> out;
  for (const auto& f : findings) ++out[std::string(to_string(f.exploitability))];
  return out;
}

Exploitability classify_exploitability(const LeakFinding& finding, const AnalysisConfig& config) {
  const EntryPoint& e = finding.entry;
  if (e.permission) return Exploitability::PermissionGated;
  if (e.visibility == Visibility::Greylist || config.greylist.contains(e.ref().str()) ||
      config.greylist.contains(e.interface_name())) {
    return Exploitability::Greylist;
  }
  if (e.visibility == Visibility::Hidden) return Exploitability::Hidden;
  return Exploitability::Public;
}

namespace {

/// Node of `cg` with minimal (depth, name) accepted by `pred`.
template <typename Pred>
std::optional<MethodRef> shallowest(const CallGraph& cg, Pred&& pred) {
  std::optional<std::pair<int, std::string>> best_key;
  std::optional<MethodRef> best;
  for (const auto& [ref, depth] : cg.nodes) {
    if (!pred(ref)) continue;
    std::pair<int, std::string> key{depth, ref.str()};
    if (!best_key || key < *best_key) {
      best_key = key;
      best = ref;
    }
  }
  return best;
}

void append_unique(Diagnostics& out, const Diagnostics& more) {
  for (const auto& d : more) {
    if (std::find(out.begin(), out.end(), d) == out.end()) out.push_back(d);
  }
}

}  // namespace

std::vector<LeakFinding> detect(const AnalysisContext& ctx, const AnalysisConfig& config,
                                Diagnostics* diagnostics) {
  std::map<MethodRef, JgrBinding> jgr;
  for (auto& b : jgr_creating_bindings(ctx.db())) jgr.emplace(b.binding.managed(), std::move(b));

  auto entries = extract_entry_points(ctx, diagnostics);
  std::vector<LeakFinding> out;
  std::map<MethodRef, LeakFinding> vulnerable_services;

  for (const auto& entry : entries) {
    if (entry.kind != EntryKind::SystemService) continue;
    CallGraph cg = build_call_graph(ctx, entry, config);
    if (diagnostics) append_unique(*diagnostics, cg.diagnostics);
    auto jni_node = shallowest(cg, [&](const MethodRef& m) { return jgr.contains(m); });
    if (!jni_node) continue;
    auto escapes = find_escapes(ctx, cg, config);
    auto escape = std::find_if(escapes.begin(), escapes.end(),
                               [](const EscapeSite& e) { return e.binder_related; });
    if (escape == escapes.end()) continue;

    const JgrBinding& binding = jgr.at(*jni_node);
    LeakFinding f{entry, cg.path_to(*jni_node), binding.binding, binding.path, *escape,
                  Exploitability::Public};
    f.exploitability = classify_exploitability(f, config);
    vulnerable_services.emplace(entry.ref(), f);
    out.push_back(std::move(f));
  }

  for (const auto& entry : entries) {
    if (entry.kind != EntryKind::ServiceHelper) continue;
    CallGraph cg = build_call_graph(ctx, entry, config);
    if (diagnostics) append_unique(*diagnostics, cg.diagnostics);
    auto target = shallowest(cg, [&](const MethodRef& m) {
      return m != entry.ref() && vulnerable_services.contains(m);
    });
    if (!target) continue;
    const LeakFinding& service = vulnerable_services.at(*target);
    auto path = cg.path_to(*target);
    path.insert(path.end(), service.managed_path.begin() + 1, service.managed_path.end());
    LeakFinding f{entry, std::move(path), service.jni, service.native_path, service.escape,
                  Exploitability::Public};
    f.exploitability = classify_exploitability(f, config);
    out.push_back(std::move(f));
  }

  std::sort(out.begin(), out.end(), [](const LeakFinding& a, const LeakFinding& b) {
    return std::tie(a.entry.service_name, a.entry.kind, a.entry.cls, a.entry.method) <
           std::tie(b.entry.service_name, b.entry.kind, b.entry.cls, b.entry.method);
  });
  return out;
}

Report analyze(const ProgramDb& db, const AnalysisConfig& config, std::string corpus) {
  Report report;
  report.corpus = std::move(corpus);
  report.diagnostics = validate(db);
  AnalysisContext ctx(db);
  Diagnostics found;
  report.findings = detect(ctx, config, &found);
  append_unique(report.diagnostics, found);
  return report;
}

bool check_witnesses(const ProgramDb& db, const LeakFinding& finding, const AnalysisConfig& config,
                     std::string* why) {
  auto fail = [&](std::string reason) {
    if (why) *why = std::move(reason);
    return false;
  };
  const auto& path = finding.managed_path;
  if (path.empty()) return fail("empty managed path");
  if (path.front() != finding.entry.ref()) return fail("managed path does not start at the entry");
  if (path.back() != finding.jni.managed()) {
    return fail("managed path does not end at the JNI method");
  }

  AnalysisContext ctx(db);
  for (size_t i = 0; i + 1 < path.size(); ++i) {
    const ManagedMethod* caller = db.find_method(path[i]);
    if (!caller) return fail("unknown method " + path[i].str());
    bool linked = false;
    for (const auto& stmt : caller->body) {
      const auto* inv = std::get_if<InvokeStmt>(&stmt.op);
      if (!inv) continue;
      for (const auto& t : invoke_targets(ctx, path[i], *inv, config)) {
        if (t.method == path[i + 1]) linked = true;
      }
    }
    if (!linked) return fail("no call edge " + path[i].str() + " -> " + path[i + 1].str());
  }

  bool bound = false;
  for (const auto& b : extract_jni_bindings(db)) {
    if (b == finding.jni) bound = true;
  }
  if (!bound) return fail("JNI binding not registered");
  const ManagedMethod* jni_method = db.find_method(finding.jni.managed());
  if (!jni_method || !jni_method->is_native) return fail("JNI method is not native");
  if (finding.native_path.frames.empty() ||
      finding.native_path.frames.front() != finding.jni.native_fn) {
    return fail("native path does not start at the bound function");
  }
  if (!is_valid_native_path(db, finding.native_path)) return fail("invalid native path");

  const EscapeSite& e = finding.escape;
  if (!e.binder_related || !ctx.binder_related(e.escaping_type)) {
    return fail("escaping type is not Binder-related");
  }
  const auto& sinks = config.collection_sinks;
  if (std::find(sinks.begin(), sinks.end(), e.sink_method) == sinks.end()) {
    return fail("escape is not at a collection sink");
  }
  const ManagedMethod* holder = db.find_method(e.sink_call.method);
  if (!holder || e.sink_call.index >= holder->body.size()) return fail("escape statement missing");
  const auto* inv = std::get_if<InvokeStmt>(&holder->body[e.sink_call.index].op);
  auto sink_name = split_member(e.sink_method);
  if (!inv || !sink_name || inv->method != sink_name->second) {
    return fail("escape statement is not a sink call");
  }

  AnalysisConfig unbounded = config;
  unbounded.max_depth = kUnboundedDepth;
  bool reachable = false;
  for (const auto& m : path) {
    EntryPoint root = finding.entry;
    root.cls = m.cls;
    root.method = m.name;
    if (build_call_graph(ctx, root, unbounded).nodes.contains(e.sink_call.method)) {
      reachable = true;
      break;
    }
  }
  if (!reachable) return fail("escape site is unreachable from the managed path");
  return true;
}

}  // namespace jgrscan
