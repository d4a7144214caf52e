// src/ir.cpp
#include "jgrscan/ir.hpp"

#include <algorithm>
#include <array>

#include "jgrscan/diagnostic.hpp"

namespace jgrscan {

bool is_primitive_type(std::string_view name) {
  static constexpr std::array<std::string_view, 9> kPrimitives = {
      "boolean", "byte", "char", "short", "int", "long", "float", "double", "void"};
  return std::find(kPrimitives.begin(), kPrimitives.end(), name) != kPrimitives.end();
}

std::string_view to_string(Visibility v) {
  switch (v) {
    case Visibility::Public:
      return "public";
    case Visibility::Hidden:
      return "hidden";
    case Visibility::Greylist:
      return "greylist";
  }
  return "public";
}

std::string_view to_string(Dispatch d) {
  switch (d) {
    case Dispatch::Virtual:
      return "virtual";
    case Dispatch::Interface:
      return "interface";
    case Dispatch::Static:
      return "static";
  }
  return "virtual";
}

std::string_view to_string(DiagCode code) {
  switch (code) {
    case DiagCode::DuplicateJniBinding:
      return "DuplicateJniBinding";
    case DiagCode::JniMethodMissing:
      return "JniMethodMissing";
    case DiagCode::JniMethodNotNative:
      return "JniMethodNotNative";
    case DiagCode::UseBeforeDef:
      return "UseBeforeDef";
    case DiagCode::ArityMismatch:
      return "ArityMismatch";
    case DiagCode::InheritanceCycle:
      return "InheritanceCycle";
    case DiagCode::BadParentKind:
      return "BadParentKind";
    case DiagCode::UnresolvedAbstractMethod:
      return "UnresolvedAbstractMethod";
    case DiagCode::StubTargetNotClass:
      return "StubTargetNotClass";
    case DiagCode::UnresolvedType:
      return "UnresolvedType";
    case DiagCode::NativeServiceSkipped:
      return "NativeServiceSkipped";
    case DiagCode::DanglingEdge:
      return "DanglingEdge";
    case DiagCode::UnresolvedCallback:
      return "UnresolvedCallback";
    case DiagCode::ServiceNameNotLiteral:
      return "ServiceNameNotLiteral";
  }
  return "?";
}

std::string Diagnostic::format() const {
  std::string out = unit.empty() ? std::string("<corpus>") : unit;
  if (line > 0) {
    out += ":" + std::to_string(line);
  }
  out += ": ";
  out += to_string(code);
  out += ": ";
  out += message;
  return out;
}

std::optional<std::string_view> Stmt::defined_var() const {
  return std::visit(
      [](const auto& s) -> std::optional<std::string_view> {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, NewStmt> || std::is_same_v<T, AssignStmt> ||
                      std::is_same_v<T, FieldGetStmt>) {
          return s.dst;
        } else if constexpr (std::is_same_v<T, InvokeStmt>) {
          if (s.dst) return *s.dst;
          return std::nullopt;
        } else {
          return std::nullopt;
        }
      },
      op);
}

std::vector<std::string_view> Stmt::used_vars() const {
  std::vector<std::string_view> out;
  std::visit(
      [&out](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, AssignStmt>) {
          out.push_back(s.src);
        } else if constexpr (std::is_same_v<T, FieldGetStmt>) {
          out.push_back(s.recv);
        } else if constexpr (std::is_same_v<T, FieldPutStmt>) {
          out.push_back(s.recv);
          out.push_back(s.src);
        } else if constexpr (std::is_same_v<T, InvokeStmt>) {
          if (s.dispatch != Dispatch::Static) out.push_back(s.recv);
          for (const auto& a : s.args) {
            if (!a.literal) out.push_back(a.value);
          }
        } else if constexpr (std::is_same_v<T, ReturnStmt>) {
          if (s.src) out.push_back(*s.src);
        }
      },
      op);
  return out;
}

const Param* ManagedMethod::find_param(std::string_view param_name) const {
  for (const auto& p : params) {
    if (p.name == param_name) return &p;
  }
  return nullptr;
}

std::vector<std::string> ManagedClass::parents() const {
  std::vector<std::string> out;
  if (super_class) out.push_back(*super_class);
  out.insert(out.end(), interfaces.begin(), interfaces.end());
  return out;
}

const ManagedMethod* ManagedClass::find_method(std::string_view method_name) const {
  for (const auto& m : methods) {
    if (m.name == method_name) return &m;
  }
  return nullptr;
}

const Field* ManagedClass::find_field(std::string_view field_name) const {
  for (const auto& f : fields) {
    if (f.name == field_name) return &f;
  }
  return nullptr;
}

AnalysisConfig AnalysisConfig::defaults() {
  AnalysisConfig config;
  config.implicit_edges = {
      {"android.os.Handler.post", "java.lang.Runnable.run"},
      {"java.util.concurrent.Executor.execute", "java.lang.Runnable.run"},
  };
  config.collection_sinks = {
      "java.util.List.add",       "java.util.ArrayList.add",
      "java.util.Set.add",        "java.util.HashSet.add",
      "java.util.Map.put",        "java.util.HashMap.put",
      "android.util.ArrayMap.put", "android.os.RemoteCallbackList.register",
  };
  config.binder_root_types = {"android.os.IBinder"};
  return config;
}

bool ProgramDb::empty() const {
  return managed_classes.empty() && native_fns.empty() && jni_registrations.empty() &&
         stub_bindings.empty() && externs.empty();
}

const ManagedClass* ProgramDb::find_class(std::string_view fqname) const {
  auto it = managed_classes.find(std::string(fqname));
  return it == managed_classes.end() ? nullptr : &it->second;
}

const ManagedMethod* ProgramDb::find_method(const MethodRef& ref) const {
  const ManagedClass* cls = find_class(ref.cls);
  return cls ? cls->find_method(ref.name) : nullptr;
}

bool ProgramDb::is_known_type(std::string_view fqname) const {
  return is_primitive_type(fqname) || externs.contains(std::string(fqname)) ||
         managed_classes.contains(std::string(fqname));
}

std::optional<std::pair<std::string, std::string>> split_member(std::string_view qualified) {
  auto dot = qualified.rfind('.');
  if (dot == std::string_view::npos || dot == 0 || dot + 1 == qualified.size()) {
    return std::nullopt;
  }
  return std::pair{std::string(qualified.substr(0, dot)), std::string(qualified.substr(dot + 1))};
}

}  // namespace jgrscan
