// src/native_analysis.cpp
#include "jgrscan/native_analysis.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "jgrscan/error.hpp"

namespace jgrscan {

std::vector<JniBinding> extract_jni_bindings(const ProgramDb& db, Diagnostics* diagnostics) {
  std::vector<JniBinding> out;
  for (const auto& reg : db.jni_registrations) {
    const ManagedClass* cls = db.find_class(reg.managed_class);
    for (const auto& entry : reg.entries) {
      out.push_back({reg.managed_class, entry.managed_method, entry.native_fn});
      if (!diagnostics || !cls) continue;
      const ManagedMethod* m = cls->find_method(entry.managed_method);
      if (!m) {
        diagnostics->push_back({DiagCode::JniMethodMissing,
                                reg.managed_class + " declares no method '" +
                                    entry.managed_method + "'",
                                entry.loc.unit, entry.loc.line});
      } else if (!m->is_native) {
        diagnostics->push_back({DiagCode::JniMethodNotNative,
                                reg.managed_class + "." + entry.managed_method +
                                    " is bound to " + entry.native_fn +
                                    " but not declared native",
                                entry.loc.unit, entry.loc.line});
      }
    }
  }
  return out;
}

std::optional<NativePath> reaches_globalref(const ProgramDb& db, const std::string& entry) {
  if (!db.native_fns.contains(entry)) throw UnknownFunction(entry);

  std::map<std::string, std::string> parent;
  std::set<std::string> visited{entry};
  std::deque<std::string> queue{entry};
  while (!queue.empty()) {
    std::string current = std::move(queue.front());
    queue.pop_front();
    auto it = db.native_fns.find(current);
    if (it == db.native_fns.end()) continue;  // extern: opaque

    std::vector<std::string> callees;
    for (const auto& call : it->second.calls) callees.push_back(call.callee);
    std::sort(callees.begin(), callees.end());
    callees.erase(std::unique(callees.begin(), callees.end()), callees.end());

    for (const auto& callee : callees) {
      if (callee == kGlobalRefSink) {
        NativePath path;
        path.frames.emplace_back(kGlobalRefSink);
        for (std::string f = current;; f = parent.at(f)) {
          path.frames.push_back(f);
          if (f == entry) break;
        }
        std::reverse(path.frames.begin(), path.frames.end());
        return path;
      }
      if (visited.insert(callee).second) {
        parent[callee] = current;
        queue.push_back(callee);
      }
    }
  }
  return std::nullopt;
}

std::vector<JgrBinding> jgr_creating_bindings(const ProgramDb& db) {
  std::vector<JgrBinding> out;
  for (auto& binding : extract_jni_bindings(db)) {
    if (auto path = reaches_globalref(db, binding.native_fn)) {
      out.push_back({std::move(binding), std::move(*path)});
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const JgrBinding& a, const JgrBinding& b) {
    return a.binding.managed().str() < b.binding.managed().str();
  });
  return out;
}

bool is_valid_native_path(const ProgramDb& db, const NativePath& path) {
  const auto& frames = path.frames;
  if (frames.size() < 2 || frames.back() != kGlobalRefSink) return false;
  if (!db.native_fns.contains(frames.front())) return false;
  std::set<std::string> seen;
  for (size_t i = 0; i + 1 < frames.size(); ++i) {
    if (!seen.insert(frames[i]).second) return false;
    auto it = db.native_fns.find(frames[i]);
    if (it == db.native_fns.end()) return false;
    const auto& calls = it->second.calls;
    bool has_edge = std::any_of(calls.begin(), calls.end(), [&](const NativeCall& c) {
      return c.callee == frames[i + 1];
    });
    if (!has_edge) return false;
  }
  return true;
}

}  // namespace jgrscan
