// src/managed_analysis.cpp
#include "jgrscan/managed_analysis.hpp"

#include <algorithm>
#include <deque>
#include <tuple>

#include "json.hpp"

namespace jgrscan {

std::string_view to_string(EntryKind kind) {
  return kind == EntryKind::SystemService ? "system_service" : "service_helper";
}

std::string_view to_string(EdgeKind kind) {
  switch (kind) {
    case EdgeKind::Direct: return "direct";
    case EdgeKind::Virtual: return "virtual";
    case EdgeKind::Ipc: return "ipc";
    case EdgeKind::Implicit: return "implicit";
  }
  return "?";
}

std::string_view to_string(ContainerKind kind) {
  return kind == ContainerKind::Field ? "field" : "static_field";
}

std::vector<MethodRef> CallGraph::path_to(const MethodRef& node) const {
  if (!nodes.contains(node)) return {};
  std::vector<MethodRef> path{node};
  for (auto it = parent.find(node); it != parent.end(); it = parent.find(it->second)) {
    path.push_back(it->second);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

namespace {

std::string simple_name(std::string_view fqname) {
  auto dot = fqname.rfind('.');
  return std::string(dot == std::string_view::npos ? fqname : fqname.substr(dot + 1));
}

std::string native_simple_name(std::string_view name) {
  auto sep = name.rfind("::");
  if (sep != std::string_view::npos) name = name.substr(sep + 2);
  return simple_name(name);
}

/// Class along the superclass chain of `type` that declares `field`.
const ManagedClass* field_owner(const ProgramDb& db, const std::string& type,
                                const std::string& field, const Field** decl = nullptr) {
  std::set<std::string> seen;
  for (const ManagedClass* c = db.find_class(type); c && seen.insert(c->fqname).second;
       c = c->super_class ? db.find_class(*c->super_class) : nullptr) {
    if (const Field* f = c->find_field(field)) {
      if (decl) *decl = f;
      return c;
    }
  }
  return nullptr;
}

/// Type queries over one method's flow-insensitive def sets.
///
/// Both queries are reachability over nodes (method, var, level); a single
/// visited set per top-level query makes them terminate on cycles. Field
/// owners and call targets need nested queries, which are guarded separately.
class TypeQuery {
public:
  explicit TypeQuery(const AnalysisContext& ctx) : ctx_(ctx), db_(ctx.db()) {}

  std::set<std::string> points_to(const MethodRef& m, const std::string& var, int level) {
    std::set<std::string> out;
    std::set<Node> visited;
    points_to_into(m, var, level, out, visited);
    return out;
  }

  std::set<std::string> declared(const MethodRef& m, const std::string& var, int level) {
    std::set<std::string> out;
    std::set<Node> visited;
    declared_into(m, var, level, out, visited);
    return out;
  }

  std::set<std::string> receiver_types(const MethodRef& m, const std::string& var, int level) {
    auto out = points_to(m, var, level);
    out.merge(declared(m, var, level));
    return out;
  }

  /// Classes owning `field` for every declared type of `recv`.
  std::set<std::string> field_owners(const MethodRef& m, const std::string& recv,
                                     const std::string& field) {
    std::pair<MethodRef, std::string> key{m, recv};
    if (!owner_stack_.insert(key).second) return {};
    std::set<std::string> owners;
    for (const auto& t : declared(m, recv, 0)) {
      if (const ManagedClass* c = field_owner(db_, t, field)) owners.insert(c->fqname);
    }
    owner_stack_.erase(key);
    return owners;
  }

  /// Callees of an invoke, with receiver types computed at `level`.
  std::vector<CallTarget> targets(const MethodRef& caller, const InvokeStmt& inv, int level,
                                  const AnalysisConfig& config, Diagnostics* diags);

private:
  using Node = std::tuple<MethodRef, std::string, int>;

  void points_to_into(const MethodRef& m, const std::string& var, int level,
                      std::set<std::string>& out, std::set<Node>& visited) {
    if (!visited.insert({m, var, level}).second) return;
    const ManagedMethod* method = db_.find_method(m);
    if (!method) return;
    for (const auto& stmt : method->body) {
      auto def = stmt.defined_var();
      if (!def || *def != var) continue;
      std::visit(
          [&](const auto& op) {
            using T = std::decay_t<decltype(op)>;
            if constexpr (std::is_same_v<T, NewStmt>) {
              out.insert(op.type);
            } else if constexpr (std::is_same_v<T, AssignStmt>) {
              points_to_into(m, op.src, level, out, visited);
            } else if constexpr (std::is_same_v<T, FieldGetStmt>) {
              for (const auto& owner : field_owners(m, op.recv, op.field)) {
                for (const auto& store : ctx_.stores_to(owner, op.field)) {
                  points_to_into(store.method, store.src, 0, out, visited);
                }
              }
            } else if constexpr (std::is_same_v<T, InvokeStmt>) {
              if (level <= 0) return;
              for (const auto& t : targets(m, op, level - 1, ctx_.config(), nullptr)) {
                if (t.kind == EdgeKind::Implicit) continue;
                for_each_return(t.method, [&](const std::string& src) {
                  points_to_into(t.method, src, level - 1, out, visited);
                });
              }
            }
          },
          stmt.op);
    }
  }

  void declared_into(const MethodRef& m, const std::string& var, int level,
                     std::set<std::string>& out, std::set<Node>& visited) {
    if (!visited.insert({m, var, level}).second) return;
    const ManagedMethod* method = db_.find_method(m);
    if (!method) return;
    if (var == "this") out.insert(m.cls);
    if (const Param* p = method->find_param(var); p && !is_primitive_type(p->type)) {
      out.insert(p->type);
    }
    for (const auto& stmt : method->body) {
      auto def = stmt.defined_var();
      if (!def || *def != var) continue;
      std::visit(
          [&](const auto& op) {
            using T = std::decay_t<decltype(op)>;
            if constexpr (std::is_same_v<T, NewStmt>) {
              out.insert(op.type);
            } else if constexpr (std::is_same_v<T, AssignStmt>) {
              declared_into(m, op.src, level, out, visited);
            } else if constexpr (std::is_same_v<T, FieldGetStmt>) {
              for (const auto& owner : field_owners(m, op.recv, op.field)) {
                const Field* f = db_.find_class(owner)->find_field(op.field);
                if (f && !is_primitive_type(f->type)) out.insert(f->type);
              }
            } else if constexpr (std::is_same_v<T, InvokeStmt>) {
              if (level <= 0) return;
              for (const auto& t : targets(m, op, level - 1, ctx_.config(), nullptr)) {
                if (t.kind == EdgeKind::Implicit) continue;
                for_each_return(t.method, [&](const std::string& src) {
                  declared_into(t.method, src, level - 1, out, visited);
                });
              }
            }
          },
          stmt.op);
    }
  }

  template <typename Fn>
  void for_each_return(const MethodRef& m, Fn&& fn) {
    const ManagedMethod* method = db_.find_method(m);
    if (!method) return;
    for (const auto& stmt : method->body) {
      if (const auto* r = std::get_if<ReturnStmt>(&stmt.op); r && r->src) fn(*r->src);
    }
  }

  const AnalysisContext& ctx_;
  const ProgramDb& db_;
  std::set<std::pair<MethodRef, std::string>> owner_stack_;
};

std::vector<CallTarget> TypeQuery::targets(const MethodRef& caller, const InvokeStmt& inv,
                                           int level, const AnalysisConfig& config,
                                           Diagnostics* diags) {
  const ClassHierarchy& h = ctx_.hierarchy();
  std::set<CallTarget> out;
  auto dangling = [&](const std::string& why) {
    if (!diags) return;
    diags->push_back({DiagCode::DanglingEdge,
                      caller.str() + ": call to " + inv.recv + "." + inv.method + " " + why, "",
                      0});
  };

  if (inv.dispatch == Dispatch::Static) {
    if (auto impl = find_implementing_class(db_, inv.recv, inv.method)) {
      out.insert({{*impl, inv.method}, EdgeKind::Direct});
    } else if (db_.find_class(inv.recv)) {
      dangling("has no implementation");
    }
    return {out.begin(), out.end()};
  }

  auto recv_types = receiver_types(caller, inv.recv, level);
  bool any_db_type = false;
  for (const auto& t : recv_types) {
    if (db_.find_class(t)) any_db_type = true;
    for (const auto& s : h.concrete_subtypes(t)) {
      if (auto impl = h.implementation(s, inv.method)) out.insert({*impl, EdgeKind::Virtual});
    }
    for (const auto& super : h.all_supertypes(t)) {
      auto stub = db_.stub_bindings.find(super);
      if (stub != db_.stub_bindings.end()) {
        std::optional<MethodRef> impl = h.implementation(stub->second, inv.method);
        if (!impl) {
          if (auto c = find_implementing_class(db_, stub->second, inv.method)) {
            impl = MethodRef{*c, inv.method};
          }
        }
        if (impl) out.insert({*impl, EdgeKind::Ipc});
      }
      for (const auto& edge : config.implicit_edges) {
        if (edge.trigger != super + "." + inv.method) continue;
        auto cb = split_member(edge.callback);
        bool resolved = false;
        for (const auto& arg : inv.args) {
          if (arg.literal) continue;
          for (const auto& p : points_to(caller, arg.value, level)) {
            for (const auto& s : h.concrete_subtypes(p)) {
              if (!h.is_subtype(s, cb->first)) continue;
              if (auto impl = h.implementation(s, cb->second)) {
                out.insert({*impl, EdgeKind::Implicit});
                resolved = true;
              }
            }
          }
        }
        if (!resolved && diags) {
          diags->push_back({DiagCode::UnresolvedCallback,
                            caller.str() + ": " + edge.trigger + " callback " + edge.callback +
                                " has no resolvable receiver",
                            "", 0});
        }
      }
    }
  }
  if (out.empty()) {
    if (recv_types.empty()) {
      dangling("has an unresolved receiver '" + inv.recv + "'");
    } else if (any_db_type) {
      dangling("has no resolvable implementation");
    }
  }
  return {out.begin(), out.end()};
}

/// Alias class of `var` under assignments within one method (undirected).
std::set<std::string> assign_aliases(const ManagedMethod& method, const std::string& var) {
  std::set<std::string> aliases{var};
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& stmt : method.body) {
      const auto* a = std::get_if<AssignStmt>(&stmt.op);
      if (!a) continue;
      bool has_dst = aliases.contains(a->dst), has_src = aliases.contains(a->src);
      if (has_dst != has_src) {
        aliases.insert(has_dst ? a->src : a->dst);
        changed = true;
      }
    }
  }
  return aliases;
}

struct Container {
  std::string cls;
  std::string field;
  bool is_static = false;
  friend auto operator<=>(const Container&, const Container&) = default;
};

/// Fields a collection receiver was loaded from or stored into.
std::set<Container> field_containers(const ProgramDb& db, TypeQuery& q, const MethodRef& m,
                                     const ManagedMethod& method, const std::string& recv) {
  auto aliases = assign_aliases(method, recv);
  std::set<Container> out;
  auto add = [&](const std::string& from, const std::string& field) {
    for (const auto& owner : q.field_owners(m, from, field)) {
      const Field* f = db.find_class(owner)->find_field(field);
      out.insert({owner, field, f && f->is_static});
    }
  };
  for (const auto& stmt : method.body) {
    if (const auto* g = std::get_if<FieldGetStmt>(&stmt.op); g && aliases.contains(g->dst)) {
      add(g->recv, g->field);
    } else if (const auto* p = std::get_if<FieldPutStmt>(&stmt.op);
               p && aliases.contains(p->src)) {
      add(p->recv, p->field);
    }
  }
  return out;
}

}  // namespace

AnalysisContext::AnalysisContext(const ProgramDb& db) : db_(&db), hierarchy_(build_hierarchy(db)) {
  index_field_stores();
  compute_binder_related();
}

void AnalysisContext::index_field_stores() {
  TypeQuery q(*this);
  for (const auto& [name, cls] : db_->managed_classes) {
    for (const auto& method : cls.methods) {
      MethodRef ref{name, method.name};
      for (const auto& stmt : method.body) {
        const auto* put = std::get_if<FieldPutStmt>(&stmt.op);
        if (!put) continue;
        for (const auto& owner : q.field_owners(ref, put->recv, put->field)) {
          stores_[{owner, put->field}].push_back({ref, put->src});
        }
      }
    }
  }
}

const std::vector<AnalysisContext::FieldStore>& AnalysisContext::stores_to(
    const std::string& owner, const std::string& field) const {
  static const std::vector<FieldStore> kNone;
  auto it = stores_.find({owner, field});
  return it == stores_.end() ? kNone : it->second;
}

void AnalysisContext::compute_binder_related() {
  const auto& roots = db_->config.binder_root_types;
  std::set<std::string> types(db_->externs.begin(), db_->externs.end());
  for (const auto& [name, cls] : db_->managed_classes) types.insert(name);
  types.insert(roots.begin(), roots.end());

  // Least fixed point: a type is Binder-related if it is (a subtype of) a
  // root, owns a Binder-related field, or its IPC stub is Binder-related.
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& t : types) {
      if (binder_related_.contains(t)) continue;
      bool related = roots.contains(t);
      const auto& supers = hierarchy_.all_supertypes(t);
      for (const auto& s : supers) {
        if (related) break;
        if (roots.contains(s)) related = true;
        if (auto stub = db_->stub_bindings.find(s);
            stub != db_->stub_bindings.end() && binder_related_.contains(stub->second)) {
          related = true;
        }
        const ManagedClass* c = db_->find_class(s);
        if (c && !c->is_interface()) {
          for (const auto& f : c->fields) {
            if (binder_related_.contains(f.type)) related = true;
          }
        }
      }
      if (related) {
        binder_related_.insert(t);
        changed = true;
      }
    }
  }
}

bool AnalysisContext::binder_related(const std::string& type) const {
  return binder_related_.contains(type);
}

std::set<std::string> resolve_type(const AnalysisContext& ctx, const MethodRef& method,
                                   const std::string& var) {
  return TypeQuery(ctx).points_to(method, var, 1);
}

std::set<std::string> declared_types(const AnalysisContext& ctx, const MethodRef& method,
                                     const std::string& var) {
  return TypeQuery(ctx).declared(method, var, 1);
}

std::vector<CallTarget> invoke_targets(const AnalysisContext& ctx, const MethodRef& caller,
                                       const InvokeStmt& invoke, const AnalysisConfig& config,
                                       Diagnostics* diagnostics) {
  return TypeQuery(ctx).targets(caller, invoke, 1, config, diagnostics);
}

std::vector<EntryPoint> extract_entry_points(const AnalysisContext& ctx,
                                             Diagnostics* diagnostics) {
  const ProgramDb& db = ctx.db();
  TypeQuery q(ctx);
  std::vector<EntryPoint> out;
  std::set<std::pair<std::string, std::string>> emitted;

  auto diag = [&](DiagCode code, std::string msg, const SourceLoc& loc) {
    if (diagnostics) diagnostics->push_back({code, std::move(msg), loc.unit, loc.line});
  };
  auto emit = [&](const std::string& service, EntryKind kind, const std::string& cls_name) {
    const ManagedClass* cls = db.find_class(cls_name);
    if (!cls || cls->is_interface()) return;
    if (!emitted.insert({service, cls_name}).second) return;
    for (const auto& m : cls->methods) {
      if (m.is_native) continue;
      out.push_back({service, kind, cls_name, m.name, m.visibility, m.permission});
    }
  };

  for (const auto& [name, cls] : db.managed_classes) {
    for (const auto& method : cls.methods) {
      MethodRef ref{name, method.name};
      for (const auto& stmt : method.body) {
        const auto* inv = std::get_if<InvokeStmt>(&stmt.op);
        if (!inv || inv->dispatch != Dispatch::Static) continue;
        std::string owner = simple_name(inv->recv);
        bool add_service = owner == "ServiceManager" && inv->method == "addService";
        bool register_service =
            owner == "SystemServiceRegistry" && inv->method == "registerService";
        if (!add_service && !register_service) continue;
        if (inv->args.size() < 2 || !inv->args[0].literal) {
          diag(DiagCode::ServiceNameNotLiteral,
               ref.str() + ": " + inv->method + " without a literal service name", stmt.loc);
          continue;
        }
        const std::string& service = inv->args[0].value;
        const Arg& value = inv->args[1];
        std::set<std::string> types;
        if (!value.literal) {
          if (add_service) {
            types = q.points_to(ref, value.value, 1);
          } else {
            for (const auto& factory : q.points_to(ref, value.value, 1)) {
              auto impl = find_implementing_class(db, factory, "createService");
              if (!impl) continue;
              MethodRef create{*impl, "createService"};
              for (const auto& s : db.find_method(create)->body) {
                if (const auto* r = std::get_if<ReturnStmt>(&s.op); r && r->src) {
                  types.merge(q.points_to(create, *r->src, 1));
                }
              }
            }
          }
        }
        if (types.empty()) {
          diag(DiagCode::UnresolvedType,
               ref.str() + ": cannot resolve the concrete type registered as \"" + service + "\"",
               stmt.loc);
          continue;
        }
        for (const auto& t : types) {
          emit(service, add_service ? EntryKind::SystemService : EntryKind::ServiceHelper, t);
        }
      }
    }
  }

  for (const auto& [name, fn] : db.native_fns) {
    for (const auto& call : fn.calls) {
      if (native_simple_name(call.callee) != "addService") continue;
      std::string service = !call.args.empty() && call.args[0].literal ? call.args[0].value : "?";
      diag(DiagCode::NativeServiceSkipped,
           "native service \"" + service + "\" registered by " + name + " is not analysed",
           fn.loc);
    }
  }

  std::sort(out.begin(), out.end(), [](const EntryPoint& a, const EntryPoint& b) {
    return std::tie(a.service_name, a.kind, a.cls, a.method) <
           std::tie(b.service_name, b.kind, b.cls, b.method);
  });
  return out;
}

CallGraph build_call_graph(const AnalysisContext& ctx, const EntryPoint& entry,
                           const AnalysisConfig& config) {
  TypeQuery q(ctx);
  CallGraph cg;
  cg.root = entry;
  std::set<std::tuple<MethodRef, MethodRef, EdgeKind>> edge_set;
  std::map<std::tuple<MethodRef, MethodRef, EdgeKind>, int> edge_depth;

  std::deque<MethodRef> queue{entry.ref()};
  cg.nodes[entry.ref()] = 0;
  while (!queue.empty()) {
    MethodRef current = std::move(queue.front());
    queue.pop_front();
    int depth = cg.nodes.at(current);
    if (depth >= config.max_depth) continue;
    const ManagedMethod* method = ctx.db().find_method(current);
    if (!method || method->is_native) continue;
    for (const auto& stmt : method->body) {
      const auto* inv = std::get_if<InvokeStmt>(&stmt.op);
      if (!inv) continue;
      for (const auto& t : q.targets(current, *inv, 1, config, &cg.diagnostics)) {
        auto key = std::make_tuple(current, t.method, t.kind);
        if (edge_set.insert(key).second) edge_depth[key] = depth + 1;
        if (!cg.nodes.contains(t.method)) {
          cg.nodes[t.method] = depth + 1;
          cg.parent[t.method] = current;
          queue.push_back(t.method);
        }
      }
    }
  }
  for (const auto& [key, d] : edge_depth) {
    cg.edges.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), d});
  }
  for (auto& d : cg.diagnostics) {
    d.unit.clear();
    d.line = 0;
  }
  std::sort(cg.diagnostics.begin(), cg.diagnostics.end(),
            [](const Diagnostic& a, const Diagnostic& b) { return a.message < b.message; });
  cg.diagnostics.erase(std::unique(cg.diagnostics.begin(), cg.diagnostics.end(),
                                   [](const Diagnostic& a, const Diagnostic& b) {
                                     return a.code == b.code && a.message == b.message;
                                   }),
                       cg.diagnostics.end());
  return cg;
}

std::vector<EscapeSite> find_escapes(const AnalysisContext& ctx, const CallGraph& graph,
                                     const AnalysisConfig& config) {
  const ProgramDb& db = ctx.db();
  const ClassHierarchy& h = ctx.hierarchy();
  TypeQuery q(ctx);
  std::set<std::string> sinks(config.collection_sinks.begin(), config.collection_sinks.end());
  std::vector<EscapeSite> out;

  for (const auto& [ref, depth] : graph.nodes) {
    const ManagedMethod* method = db.find_method(ref);
    if (!method || method->is_native) continue;
    for (size_t i = 0; i < method->body.size(); ++i) {
      const auto* inv = std::get_if<InvokeStmt>(&method->body[i].op);
      if (!inv || inv->dispatch == Dispatch::Static) continue;

      std::string sink;
      for (const auto& t : q.receiver_types(ref, inv->recv, 1)) {
        for (const auto& s : h.all_supertypes(t)) {
          std::string sig = s + "." + inv->method;
          if (sinks.contains(sig) && (sink.empty() || sig < sink)) sink = sig;
        }
      }
      if (sink.empty()) continue;

      auto containers = field_containers(db, q, ref, *method, inv->recv);
      for (const auto& c : containers) {
        for (const auto& arg : inv->args) {
          if (arg.literal) continue;
          auto candidates = q.points_to(ref, arg.value, 1);
          if (candidates.empty()) candidates = q.declared(ref, arg.value, 1);
          std::string type;
          for (const auto& t : candidates) {
            if (ctx.binder_related(t)) {
              type = t;
              break;
            }
          }
          if (type.empty() && !candidates.empty()) type = *candidates.begin();
          out.push_back({c.is_static ? ContainerKind::StaticField : ContainerKind::Field, c.cls,
                         c.field, StmtId{ref, i}, sink, arg.value, type,
                         !type.empty() && ctx.binder_related(type)});
        }
      }
    }
  }
  return out;
}

std::string serialize_call_graph(const CallGraph& graph) {
  nlohmann::ordered_json j;
  j["root"] = {{"service", graph.root.service_name},
               {"kind", to_string(graph.root.kind)},
               {"method", graph.root.ref().str()}};
  std::vector<std::pair<std::string, int>> nodes;
  for (const auto& [m, d] : graph.nodes) nodes.emplace_back(m.str(), d);
  std::sort(nodes.begin(), nodes.end());
  auto& jn = j["nodes"] = nlohmann::ordered_json::array();
  for (const auto& [name, d] : nodes) jn.push_back({{"method", name}, {"depth", d}});

  std::vector<std::tuple<std::string, std::string, std::string_view, int>> edges;
  for (const auto& e : graph.edges) {
    edges.emplace_back(e.caller.str(), e.callee.str(), to_string(e.kind), e.depth);
  }
  std::sort(edges.begin(), edges.end());
  auto& je = j["edges"] = nlohmann::ordered_json::array();
  for (const auto& [caller, callee, kind, d] : edges) {
    je.push_back({{"caller", caller}, {"callee", callee}, {"kind", kind}, {"depth", d}});
  }
  return j.dump(2);
}

}  // namespace jgrscan
