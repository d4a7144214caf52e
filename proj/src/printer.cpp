// src/printer.cpp
#include <sstream>

#include "jgrscan/parser.hpp"

namespace jgrscan {

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

void print_args(std::ostream& os, const std::vector<Arg>& args) {
  os << '(';
  for (size_t i = 0; i < args.size(); ++i) {
    if (i) os << ", ";
    os << (args[i].literal ? quote(args[i].value) : args[i].value);
  }
  os << ')';
}

void print_stmt(std::ostream& os, const Stmt& stmt) {
  std::visit(
      [&os](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, NewStmt>) {
          os << s.dst << " = new " << s.type;
        } else if constexpr (std::is_same_v<T, AssignStmt>) {
          os << s.dst << " = " << s.src;
        } else if constexpr (std::is_same_v<T, FieldGetStmt>) {
          os << s.dst << " = " << s.recv << '.' << s.field;
        } else if constexpr (std::is_same_v<T, FieldPutStmt>) {
          os << s.recv << '.' << s.field << " = " << s.src;
        } else if constexpr (std::is_same_v<T, InvokeStmt>) {
          if (s.dst) os << *s.dst << " = ";
          os << (s.dispatch == Dispatch::Static ? "scall " : "call ") << s.recv << '.'
             << s.method;
          print_args(os, s.args);
        } else {
          os << "return";
          if (s.src) os << ' ' << *s.src;
        }
      },
      stmt.op);
}

void print_method(std::ostream& os, const ManagedMethod& m, bool in_interface) {
  os << "  method " << m.name << '(';
  for (size_t i = 0; i < m.params.size(); ++i) {
    if (i) os << ", ";
    os << m.params[i].name << ": " << m.params[i].type;
  }
  os << ") " << to_string(m.visibility);
  if (m.permission) os << " permission=" << quote(*m.permission);
  if (m.is_native) os << " native";
  if (in_interface || m.is_native) {
    os << '\n';
    return;
  }
  os << " {\n";
  for (const auto& stmt : m.body) {
    os << "    ";
    print_stmt(os, stmt);
    os << '\n';
  }
  os << "  }\n";
}

void print_class(std::ostream& os, const ManagedClass& cls) {
  os << "managed " << (cls.is_interface() ? "interface " : "class ") << cls.fqname;
  if (cls.super_class) os << " extends " << *cls.super_class;
  if (!cls.interfaces.empty()) {
    os << (cls.is_interface() ? " extends " : " implements ");
    for (size_t i = 0; i < cls.interfaces.size(); ++i) {
      if (i) os << ", ";
      os << cls.interfaces[i];
    }
  }
  os << " {\n";
  for (const auto& f : cls.fields) {
    os << "  field " << f.name << ": " << f.type << (f.is_static ? " static" : "") << '\n';
  }
  for (const auto& m : cls.methods) print_method(os, m, cls.is_interface());
  os << "}\n";
}

}  // namespace

std::string print_corpus(const ProgramDb& db) {
  std::ostringstream os;
  for (const auto& name : db.externs) os << "extern " << name << '\n';
  if (!db.externs.empty()) os << '\n';
  for (const auto& [name, cls] : db.managed_classes) {
    print_class(os, cls);
    os << '\n';
  }
  for (const auto& [iface, impl] : db.stub_bindings) os << "stub " << iface << " -> " << impl << '\n';
  if (!db.stub_bindings.empty()) os << '\n';
  for (const auto& [name, fn] : db.native_fns) {
    os << "native fn " << fn.name << '(';
    for (size_t i = 0; i < fn.params.size(); ++i) {
      if (i) os << ", ";
      os << fn.params[i];
    }
    os << ") {\n";
    for (const auto& call : fn.calls) {
      os << "  call " << call.callee;
      print_args(os, call.args);
      os << '\n';
    }
    os << "}\n\n";
  }
  for (const auto& reg : db.jni_registrations) {
    os << "jni_register class=" << reg.managed_class << " {\n";
    for (size_t i = 0; i < reg.entries.size(); ++i) {
      os << "  " << quote(reg.entries[i].managed_method) << " -> " << reg.entries[i].native_fn
         << (i + 1 < reg.entries.size() ? ",\n" : "\n");
    }
    os << "}\n";
  }
  return os.str();
}

}  // namespace jgrscan
