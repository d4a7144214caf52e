// src/validate.cpp
#include "jgrscan/validate.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "jgrscan/error.hpp"
#include "jgrscan/hierarchy.hpp"

namespace jgrscan {

namespace {

void check_bodies(const ProgramDb& db, Diagnostics& out) {
  for (const auto& [name, cls] : db.managed_classes) {
    for (const auto& method : cls.methods) {
      std::set<std::string_view> defined{"this"};
      for (const auto& p : method.params) defined.insert(p.name);
      for (const auto& stmt : method.body) {
        for (auto used : stmt.used_vars()) {
          if (!defined.contains(used)) {
            out.push_back({DiagCode::UseBeforeDef,
                           "variable '" + std::string(used) + "' used before definition in " +
                               cls.fqname + "." + method.name,
                           stmt.loc.unit, stmt.loc.line});
          }
        }
        if (auto def = stmt.defined_var()) defined.insert(*def);

        // Arity is only checkable for static calls into the db.
        const auto* inv = std::get_if<InvokeStmt>(&stmt.op);
        if (!inv || inv->dispatch != Dispatch::Static) continue;
        auto impl = find_implementing_class(db, inv->recv, inv->method);
        if (!impl) continue;
        const ManagedMethod* callee = db.find_method({*impl, inv->method});
        if (callee && callee->params.size() != inv->args.size()) {
          out.push_back({DiagCode::ArityMismatch,
                         inv->recv + "." + inv->method + " expects " +
                             std::to_string(callee->params.size()) + " argument(s), got " +
                             std::to_string(inv->args.size()),
                         stmt.loc.unit, stmt.loc.line});
        }
      }
    }
  }
}

void check_jni(const ProgramDb& db, Diagnostics& out) {
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& reg : db.jni_registrations) {
    const ManagedClass* cls = db.find_class(reg.managed_class);
    for (const auto& entry : reg.entries) {
      if (!seen.insert({reg.managed_class, entry.managed_method}).second) {
        out.push_back({DiagCode::DuplicateJniBinding,
                       reg.managed_class + "." + entry.managed_method + " is registered twice",
                       entry.loc.unit, entry.loc.line});
      }
      if (!cls) continue;  // extern class: nothing to check against
      const ManagedMethod* m = cls->find_method(entry.managed_method);
      if (!m) {
        out.push_back({DiagCode::JniMethodMissing,
                       reg.managed_class + " declares no method '" + entry.managed_method + "'",
                       entry.loc.unit, entry.loc.line});
      } else if (!m->is_native) {
        out.push_back({DiagCode::JniMethodNotNative,
                       reg.managed_class + "." + entry.managed_method + " is not declared native",
                       entry.loc.unit, entry.loc.line});
      }
    }
  }
}

void check_hierarchy(const ProgramDb& db, Diagnostics& out) {
  for (const auto& [name, cls] : db.managed_classes) {
    if (cls.super_class) {
      const ManagedClass* s = db.find_class(*cls.super_class);
      if (s && s->is_interface()) {
        out.push_back({DiagCode::BadParentKind, name + " extends interface " + *cls.super_class,
                       cls.loc.unit, cls.loc.line});
      }
    }
    for (const auto& iface : cls.interfaces) {
      const ManagedClass* i = db.find_class(iface);
      if (i && !i->is_interface()) {
        out.push_back({DiagCode::BadParentKind,
                       name + (cls.is_interface() ? " extends class " : " implements class ") +
                           iface,
                       cls.loc.unit, cls.loc.line});
      }
    }
  }
  for (const auto& [iface, impl] : db.stub_bindings) {
    const ManagedClass* c = db.find_class(impl);
    if (c && c->is_interface()) {
      out.push_back({DiagCode::StubTargetNotClass, "stub target " + impl + " is an interface",
                     c->loc.unit, c->loc.line});
    }
  }

  ClassHierarchy h;
  try {
    h = build_hierarchy(db);
  } catch (const CycleError& e) {
    const ManagedClass* first = db.find_class(e.path().front());
    out.push_back({DiagCode::InheritanceCycle, e.what(), first ? first->loc.unit : "",
                   first ? first->loc.line : 0});
    return;
  }

  // Every concrete class must implement the interface methods it inherits,
  // unless an opaque extern ancestor may supply them.
  for (const auto& [name, cls] : db.managed_classes) {
    if (cls.is_interface()) continue;
    bool has_extern_ancestor = false;
    for (const auto& super : h.all_supertypes(name)) {
      if (db.externs.contains(super)) has_extern_ancestor = true;
    }
    if (has_extern_ancestor) continue;
    for (const auto& super : h.all_supertypes(name)) {
      const ManagedClass* s = db.find_class(super);
      if (!s || !s->is_interface()) continue;
      for (const auto& m : s->methods) {
        if (!h.implementation(name, m.name)) {
          out.push_back({DiagCode::UnresolvedAbstractMethod,
                         name + " does not implement " + super + "." + m.name, cls.loc.unit,
                         cls.loc.line});
        }
      }
    }
  }
}

}  // namespace

Diagnostics validate(const ProgramDb& db) {
  Diagnostics out;
  check_hierarchy(db, out);
  check_jni(db, out);
  check_bodies(db, out);
  std::stable_sort(out.begin(), out.end(), [](const Diagnostic& a, const Diagnostic& b) {
    return std::tie(a.unit, a.line) < std::tie(b.unit, b.line);
  });
  return out;
}

}  // namespace jgrscan
