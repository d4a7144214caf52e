// src/hierarchy.cpp
#include "jgrscan/hierarchy.hpp"

#include <functional>

#include "jgrscan/error.hpp"

namespace jgrscan {

namespace {

const std::set<std::string>& empty_set() {
  static const std::set<std::string> kEmpty;
  return kEmpty;
}

void check_acyclic(const ProgramDb& db) {
  enum class Mark { Unvisited, Active, Done };
  std::map<std::string, Mark> marks;
  std::vector<std::string> stack;

  std::function<void(const std::string&)> visit = [&](const std::string& name) {
    const ManagedClass* cls = db.find_class(name);
    if (!cls) return;
    Mark& mark = marks[name];
    if (mark == Mark::Done) return;
    if (mark == Mark::Active) {
      auto first = std::find(stack.begin(), stack.end(), name);
      std::vector<std::string> path(first, stack.end());
      path.push_back(name);
      throw CycleError(std::move(path));
    }
    mark = Mark::Active;
    stack.push_back(name);
    for (const auto& parent : cls->parents()) visit(parent);
    stack.pop_back();
    marks[name] = Mark::Done;
  };

  for (const auto& [name, cls] : db.managed_classes) visit(name);
}

}  // namespace

const std::set<std::string>& ClassHierarchy::concrete_subtypes(const std::string& type) const {
  auto it = subtypes.find(type);
  return it == subtypes.end() ? empty_set() : it->second;
}

const std::set<std::string>& ClassHierarchy::all_supertypes(const std::string& type) const {
  auto it = supertypes.find(type);
  return it == supertypes.end() ? empty_set() : it->second;
}

bool ClassHierarchy::is_subtype(const std::string& sub, const std::string& super) const {
  if (sub == super) return true;
  return all_supertypes(sub).contains(super);
}

std::optional<MethodRef> ClassHierarchy::implementation(const std::string& concrete_class,
                                                        const std::string& method) const {
  auto it = overrides.find({concrete_class, method});
  if (it == overrides.end()) return std::nullopt;
  return MethodRef{it->second, method};
}

std::optional<std::string> find_implementing_class(const ProgramDb& db, const std::string& cls,
                                                   const std::string& method) {
  std::set<std::string> seen;
  std::optional<std::string> current = cls;
  while (current && seen.insert(*current).second) {
    const ManagedClass* c = db.find_class(*current);
    if (!c || c->is_interface()) return std::nullopt;
    if (c->find_method(method)) return c->fqname;
    current = c->super_class;
  }
  return std::nullopt;
}

ClassHierarchy build_hierarchy(const ProgramDb& db) {
  check_acyclic(db);
  ClassHierarchy h;

  std::function<const std::set<std::string>&(const std::string&)> supers =
      [&](const std::string& name) -> const std::set<std::string>& {
    if (auto it = h.supertypes.find(name); it != h.supertypes.end()) return it->second;
    std::set<std::string> out{name};
    if (const ManagedClass* cls = db.find_class(name)) {
      for (const auto& parent : cls->parents()) {
        const auto& ps = supers(parent);
        out.insert(ps.begin(), ps.end());
      }
    }
    return h.supertypes.emplace(name, std::move(out)).first->second;
  };

  for (const auto& name : db.externs) {
    supers(name);
    h.subtypes[name];
  }
  for (const auto& [name, cls] : db.managed_classes) {
    supers(name);
    h.subtypes[name];
  }

  for (const auto& [name, cls] : db.managed_classes) {
    if (cls.is_interface()) continue;
    for (const auto& super : h.supertypes.at(name)) h.subtypes[super].insert(name);

    std::set<std::string> method_names;
    for (const auto& super : h.supertypes.at(name)) {
      if (const ManagedClass* s = db.find_class(super)) {
        for (const auto& m : s->methods) method_names.insert(m.name);
      }
    }
    for (const auto& method : method_names) {
      if (auto impl = find_implementing_class(db, name, method)) {
        h.overrides[{name, method}] = *impl;
      }
    }
  }
  return h;
}

}  // namespace jgrscan
