// include/jgrscan/ir.hpp
//
// In-memory form of a two-sided corpus: managed classes with reference-only
// statement bodies, native functions with call lists, JNI registration
// tables and IPC stub bindings.
#pragma once

#include <compare>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace jgrscan {

/// Position of a declaration in its source unit. Locations never take part
/// in structural equality, so a pretty-printed corpus compares equal to the
/// original.
struct SourceLoc {
  std::string unit;
  int line = 0;

  friend bool operator==(const SourceLoc&, const SourceLoc&) { return true; }
};

/// The distinguished native callee that creates a JNI global reference.
inline constexpr std::string_view kGlobalRefSink = "env.NewGlobalRef";

/// Types that need no declaration.
bool is_primitive_type(std::string_view name);

enum class Visibility { Public, Hidden, Greylist };
enum class Dispatch { Virtual, Interface, Static };
enum class ClassKind { Class, Interface };

std::string_view to_string(Visibility v);
std::string_view to_string(Dispatch d);

/// A call argument: a variable name or a string literal.
struct Arg {
  bool literal = false;
  std::string value;

  friend bool operator==(const Arg&, const Arg&) = default;
};

struct NewStmt {
  std::string dst;
  std::string type;
  friend bool operator==(const NewStmt&, const NewStmt&) = default;
};

struct AssignStmt {
  std::string dst;
  std::string src;
  friend bool operator==(const AssignStmt&, const AssignStmt&) = default;
};

struct FieldGetStmt {
  std::string dst;
  std::string recv;
  std::string field;
  friend bool operator==(const FieldGetStmt&, const FieldGetStmt&) = default;
};

struct FieldPutStmt {
  std::string recv;
  std::string field;
  std::string src;
  friend bool operator==(const FieldPutStmt&, const FieldPutStmt&) = default;
};

/// `[dst =] call recv.method(args)` or `[dst =] scall Class.method(args)`.
/// For static dispatch `recv` holds the class fqname.
struct InvokeStmt {
  std::optional<std::string> dst;
  std::string recv;
  std::string method;
  std::vector<Arg> args;
  Dispatch dispatch = Dispatch::Virtual;
  friend bool operator==(const InvokeStmt&, const InvokeStmt&) = default;
};

struct ReturnStmt {
  std::optional<std::string> src;
  friend bool operator==(const ReturnStmt&, const ReturnStmt&) = default;
};

using StmtOp =
    std::variant<NewStmt, AssignStmt, FieldGetStmt, FieldPutStmt, InvokeStmt, ReturnStmt>;

struct Stmt {
  StmtOp op;
  SourceLoc loc;

  friend bool operator==(const Stmt&, const Stmt&) = default;

  /// Variable written by this statement, if any.
  std::optional<std::string_view> defined_var() const;
  /// Variables read by this statement (excluding static-call class names).
  std::vector<std::string_view> used_vars() const;
};

struct Param {
  std::string name;
  std::string type;
  friend bool operator==(const Param&, const Param&) = default;
};

struct ManagedMethod {
  std::string name;
  std::vector<Param> params;
  Visibility visibility = Visibility::Public;
  std::optional<std::string> permission;
  bool is_native = false;
  std::vector<Stmt> body;
  SourceLoc loc;

  friend bool operator==(const ManagedMethod&, const ManagedMethod&) = default;

  const Param* find_param(std::string_view param_name) const;
};

struct Field {
  std::string name;
  std::string type;
  bool is_static = false;
  friend bool operator==(const Field&, const Field&) = default;
};

struct ManagedClass {
  std::string fqname;
  ClassKind kind = ClassKind::Class;
  /// Superclass for classes; always empty for interfaces.
  std::optional<std::string> super_class;
  /// Implemented interfaces, or extended interfaces for an interface.
  std::vector<std::string> interfaces;
  std::vector<Field> fields;
  std::vector<ManagedMethod> methods;
  SourceLoc loc;

  friend bool operator==(const ManagedClass&, const ManagedClass&) = default;

  bool is_interface() const { return kind == ClassKind::Interface; }
  std::vector<std::string> parents() const;
  const ManagedMethod* find_method(std::string_view method_name) const;
  const Field* find_field(std::string_view field_name) const;
};

struct NativeCall {
  std::string callee;
  std::vector<Arg> args;
  friend bool operator==(const NativeCall&, const NativeCall&) = default;
};

struct NativeFn {
  std::string name;
  std::vector<std::string> params;
  std::vector<NativeCall> calls;
  SourceLoc loc;

  friend bool operator==(const NativeFn&, const NativeFn&) = default;
};

struct JniEntry {
  std::string managed_method;
  std::string native_fn;
  SourceLoc loc;
  friend bool operator==(const JniEntry&, const JniEntry&) = default;
};

struct JniRegistration {
  std::string managed_class;
  std::vector<JniEntry> entries;
  SourceLoc loc;
  friend bool operator==(const JniRegistration&, const JniRegistration&) = default;
};

/// Framework callback pair, e.g. `android.os.Handler.post => java.lang.Runnable.run`.
struct ImplicitEdge {
  std::string trigger;
  std::string callback;
  friend bool operator==(const ImplicitEdge&, const ImplicitEdge&) = default;
};

inline constexpr int kUnboundedDepth = std::numeric_limits<int>::max();

struct AnalysisConfig {
  int max_depth = 4;
  std::vector<ImplicitEdge> implicit_edges;
  std::vector<std::string> collection_sinks;
  std::set<std::string> greylist;
  std::set<std::string> binder_root_types;

  friend bool operator==(const AnalysisConfig&, const AnalysisConfig&) = default;

  static AnalysisConfig defaults();
};

/// Identity of a managed method: method names are unique within a class.
struct MethodRef {
  std::string cls;
  std::string name;

  friend auto operator<=>(const MethodRef&, const MethodRef&) = default;
  friend bool operator==(const MethodRef&, const MethodRef&) = default;

  std::string str() const { return cls + "." + name; }
};

struct ProgramDb {
  std::map<std::string, ManagedClass> managed_classes;
  std::map<std::string, NativeFn> native_fns;
  std::vector<JniRegistration> jni_registrations;
  std::map<std::string, std::string> stub_bindings;
  std::set<std::string> externs;
  AnalysisConfig config = AnalysisConfig::defaults();

  friend bool operator==(const ProgramDb&, const ProgramDb&) = default;

  bool empty() const;
  const ManagedClass* find_class(std::string_view fqname) const;
  const ManagedMethod* find_method(const MethodRef& ref) const;
  bool is_known_type(std::string_view fqname) const;
};

/// Splits `a.b.C.method` into (`a.b.C`, `method`). Returns nullopt when there
/// is no dot.
std::optional<std::pair<std::string, std::string>> split_member(std::string_view qualified);

}  // namespace jgrscan
