// include/jgrscan/managed_analysis.hpp
//
// Managed-side analysis: service entry points, depth-bounded call graphs with
// CHA / IPC-stub / implicit-callback resolution, a flow-insensitive
// points-to approximation, and escape of Binder-related objects into
// field-backed collections.
#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "jgrscan/diagnostic.hpp"
#include "jgrscan/hierarchy.hpp"
#include "jgrscan/ir.hpp"

namespace jgrscan {

enum class EntryKind { SystemService, ServiceHelper };
std::string_view to_string(EntryKind kind);

struct EntryPoint {
  std::string service_name;
  EntryKind kind = EntryKind::SystemService;
  std::string cls;
  std::string method;
  Visibility visibility = Visibility::Public;
  std::optional<std::string> permission;

  friend bool operator==(const EntryPoint&, const EntryPoint&) = default;

  MethodRef ref() const { return {cls, method}; }
  /// `service.method`, the name attack scripts use.
  std::string interface_name() const { return service_name + "." + method; }
};

enum class EdgeKind { Direct, Virtual, Ipc, Implicit };
std::string_view to_string(EdgeKind kind);

struct CallEdge {
  MethodRef caller;
  MethodRef callee;
  EdgeKind kind = EdgeKind::Direct;
  int depth = 0;

  friend bool operator==(const CallEdge&, const CallEdge&) = default;
};

struct CallGraph {
  EntryPoint root;
  /// Method -> BFS depth (root = 0).
  std::map<MethodRef, int> nodes;
  /// Sorted by (caller, callee, kind).
  std::vector<CallEdge> edges;
  /// BFS tree used to recover witness paths.
  std::map<MethodRef, MethodRef> parent;
  Diagnostics diagnostics;

  /// Root-to-node path through the BFS tree; empty if `node` is absent.
  std::vector<MethodRef> path_to(const MethodRef& node) const;
};

enum class ContainerKind { Field, StaticField };
std::string_view to_string(ContainerKind kind);

struct StmtId {
  MethodRef method;
  size_t index = 0;
  friend bool operator==(const StmtId&, const StmtId&) = default;
};

struct EscapeSite {
  ContainerKind container_kind = ContainerKind::Field;
  std::string container_class;
  std::string container_field;
  StmtId sink_call;
  /// The matched collection sink signature, e.g. `java.util.ArrayList.add`.
  std::string sink_method;
  std::string argument;
  /// Empty when the argument's type could not be resolved.
  std::string escaping_type;
  bool binder_related = false;

  friend bool operator==(const EscapeSite&, const EscapeSite&) = default;
};

/// Shared, read-only state for analysing one ProgramDb: the hierarchy, the
/// field-store index and the Binder-relatedness table. Safe to share across
/// threads once constructed.
class AnalysisContext {
public:
  explicit AnalysisContext(const ProgramDb& db);

  const ProgramDb& db() const { return *db_; }
  const ClassHierarchy& hierarchy() const { return hierarchy_; }
  const AnalysisConfig& config() const { return db_->config; }

  struct FieldStore {
    MethodRef method;
    std::string src;
  };
  /// Every `recv.field = src` whose receiver resolves to `owner`.
  const std::vector<FieldStore>& stores_to(const std::string& owner, const std::string& field) const;

  bool binder_related(const std::string& type) const;

private:
  void index_field_stores();
  void compute_binder_related();

  const ProgramDb* db_;
  ClassHierarchy hierarchy_;
  std::map<std::pair<std::string, std::string>, std::vector<FieldStore>> stores_;
  std::set<std::string> binder_related_;
};

/// Concrete types `var` may hold inside `method`. Follows assignment chains,
/// `new`, field loads (through every in-db store to the same field) and one
/// level of callee returns. An empty set means unresolved.
std::set<std::string> resolve_type(const AnalysisContext& ctx, const MethodRef& method,
                                   const std::string& var);

/// Declared (static) types of `var`: `this`, parameter and field types,
/// `new` types and the declared types of one level of callee returns.
std::set<std::string> declared_types(const AnalysisContext& ctx, const MethodRef& method,
                                     const std::string& var);

struct CallTarget {
  MethodRef method;
  EdgeKind kind = EdgeKind::Direct;
  friend auto operator<=>(const CallTarget&, const CallTarget&) = default;
  friend bool operator==(const CallTarget&, const CallTarget&) = default;
};

/// Possible callees of one invoke statement, sorted and de-duplicated.
std::vector<CallTarget> invoke_targets(const AnalysisContext& ctx, const MethodRef& caller,
                                       const InvokeStmt& invoke, const AnalysisConfig& config,
                                       Diagnostics* diagnostics = nullptr);

/// Service entry points found at `addService` / `registerService` sites.
std::vector<EntryPoint> extract_entry_points(const AnalysisContext& ctx,
                                             Diagnostics* diagnostics = nullptr);

/// Worklist BFS from the entry; no edge is deeper than `config.max_depth`.
CallGraph build_call_graph(const AnalysisContext& ctx, const EntryPoint& entry,
                           const AnalysisConfig& config);

/// Collection-sink calls in the graph's methods whose receiver is field
/// backed. Local-only collections are not reported.
std::vector<EscapeSite> find_escapes(const AnalysisContext& ctx, const CallGraph& graph,
                                     const AnalysisConfig& config);

/// Stable JSON form: nodes sorted by name, edges by (caller, callee, kind).
std::string serialize_call_graph(const CallGraph& graph);

}  // namespace jgrscan
