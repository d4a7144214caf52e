// src/parser.cpp
#include "jgrscan/parser.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "jgrscan/error.hpp"

namespace jgrscan {

namespace {

enum class Tok {
  Ident,
  String,
  LBrace,
  RBrace,
  LParen,
  RParen,
  Comma,
  Colon,
  Semi,
  Eq,
  Arrow,
  Newline,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

std::string_view describe(Tok kind) {
  switch (kind) {
    case Tok::Ident:
      return "identifier";
    case Tok::String:
      return "string literal";
    case Tok::LBrace:
      return "'{'";
    case Tok::RBrace:
      return "'}'";
    case Tok::LParen:
      return "'('";
    case Tok::RParen:
      return "')'";
    case Tok::Comma:
      return "','";
    case Tok::Colon:
      return "':'";
    case Tok::Semi:
      return "';'";
    case Tok::Eq:
      return "'='";
    case Tok::Arrow:
      return "'->'";
    case Tok::Newline:
      return "end of line";
    case Tok::End:
      return "end of input";
  }
  return "token";
}

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

class Lexer {
public:
  Lexer(std::string_view text, const std::string& unit) : text_(text), unit_(unit) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '\n') {
        out.push_back({Tok::Newline, "", line_, col()});
        advance();
        continue;
      }
      if (c == ' ' || c == '\t' || c == '\r') {
        advance();
        continue;
      }
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
        continue;
      }
      if (ident_start(c)) {
        out.push_back(lex_path());
        continue;
      }
      if (c == '"') {
        out.push_back(lex_string());
        continue;
      }
      int column = col();
      switch (c) {
        case '{':
          out.push_back({Tok::LBrace, "{", line_, column});
          break;
        case '}':
          out.push_back({Tok::RBrace, "}", line_, column});
          break;
        case '(':
          out.push_back({Tok::LParen, "(", line_, column});
          break;
        case ')':
          out.push_back({Tok::RParen, ")", line_, column});
          break;
        case ',':
          out.push_back({Tok::Comma, ",", line_, column});
          break;
        case ':':
          out.push_back({Tok::Colon, ":", line_, column});
          break;
        case ';':
          out.push_back({Tok::Semi, ";", line_, column});
          break;
        case '=':
          out.push_back({Tok::Eq, "=", line_, column});
          break;
        case '-':
          if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
            out.push_back({Tok::Arrow, "->", line_, column});
            advance();
            break;
          }
          [[fallthrough]];
        default:
          throw SyntaxError(unit_, line_, column,
                            std::string("unexpected character '") + printable(c) + "'");
      }
      advance();
    }
    out.push_back({Tok::End, "", line_, col()});
    return out;
  }

private:
  static std::string printable(char c) {
    if (std::isprint(static_cast<unsigned char>(c))) return std::string(1, c);
    char buf[8];
    std::snprintf(buf, sizeof buf, "\\x%02x", static_cast<unsigned char>(c));
    return buf;
  }

  int col() const { return static_cast<int>(pos_ - line_start_) + 1; }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      line_start_ = pos_ + 1;
    }
    ++pos_;
  }

  // Dotted names and `::`-qualified native names lex as one token; the
  // parser splits them where the grammar calls for `recv.member`.
  Token lex_path() {
    Token tok{Tok::Ident, "", line_, col()};
    while (true) {
      while (pos_ < text_.size() && ident_char(text_[pos_])) {
        tok.text += text_[pos_];
        advance();
      }
      if (pos_ + 1 < text_.size() && text_[pos_] == '.' && ident_char(text_[pos_ + 1])) {
        tok.text += '.';
        advance();
        continue;
      }
      if (pos_ + 2 < text_.size() && text_[pos_] == ':' && text_[pos_ + 1] == ':' &&
          ident_char(text_[pos_ + 2])) {
        tok.text += "::";
        advance();
        advance();
        continue;
      }
      break;
    }
    return tok;
  }

  Token lex_string() {
    Token tok{Tok::String, "", line_, col()};
    advance();  // opening quote
    while (true) {
      if (pos_ >= text_.size() || text_[pos_] == '\n') {
        throw SyntaxError(unit_, tok.line, tok.column, "unterminated string literal");
      }
      char c = text_[pos_];
      if (c == '"') {
        advance();
        return tok;
      }
      if (c == '\\') {
        if (pos_ + 1 >= text_.size() || (text_[pos_ + 1] != '"' && text_[pos_ + 1] != '\\')) {
          throw SyntaxError(unit_, line_, col(), "invalid escape in string literal");
        }
        advance();
        c = text_[pos_];
      }
      tok.text += c;
      advance();
    }
  }

  std::string_view text_;
  const std::string& unit_;
  size_t pos_ = 0;
  size_t line_start_ = 0;
  int line_ = 1;
};

std::vector<std::string> split_dots(std::string_view path) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    size_t dot = path.find('.', start);
    out.emplace_back(path.substr(start, dot - start));
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return out;
}

// Source location of each linkable reference, kept outside the db.
struct PendingStub {
  std::string iface;
  std::string impl;
  SourceLoc loc;
};

class Parser {
public:
  Parser(std::vector<Token> tokens, std::string unit, ProgramDb& db,
         std::vector<PendingStub>& stubs)
      : toks_(std::move(tokens)), unit_(std::move(unit)), db_(db), stubs_(stubs) {}

  void parse_unit() {
    while (true) {
      skip_newlines();
      if (peek().kind == Tok::End) return;
      parse_decl();
    }
  }

private:
  const Token& peek(size_t ahead = 0) const {
    size_t i = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[i];
  }

  const Token& next() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }

  [[noreturn]] void fail(const Token& at, const std::string& message) const {
    throw SyntaxError(unit_, at.line, at.column, message);
  }

  [[noreturn]] void unexpected(const Token& at, std::string_view wanted) const {
    std::string got = at.kind == Tok::Ident || at.kind == Tok::String
                          ? "'" + at.text + "'"
                          : std::string(describe(at.kind));
    fail(at, "expected " + std::string(wanted) + ", found " + got);
  }

  const Token& expect(Tok kind, std::string_view wanted = {}) {
    if (peek().kind != kind) unexpected(peek(), wanted.empty() ? describe(kind) : wanted);
    return next();
  }

  bool at_keyword(std::string_view word, size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == Tok::Ident && t.text == word;
  }

  void expect_keyword(std::string_view word) {
    if (!at_keyword(word)) unexpected(peek(), "'" + std::string(word) + "'");
    next();
  }

  void skip_newlines() {
    while (peek().kind == Tok::Newline || peek().kind == Tok::Semi) next();
  }

  // A declaration or statement ends at a newline, a ';', or right before a
  // closing brace.
  void expect_end() {
    Tok k = peek().kind;
    if (k == Tok::Newline || k == Tok::Semi) {
      next();
      return;
    }
    if (k == Tok::RBrace || k == Tok::End) return;
    unexpected(peek(), "end of line");
  }

  SourceLoc loc_of(const Token& t) const { return SourceLoc{unit_, t.line}; }

  std::string expect_path(std::string_view what) {
    const Token& t = expect(Tok::Ident, what);
    return t.text;
  }

  std::string expect_simple_name(std::string_view what) {
    const Token& t = expect(Tok::Ident, what);
    if (t.text.find('.') != std::string::npos || t.text.find("::") != std::string::npos) {
      fail(t, "expected " + std::string(what) + ", found qualified name '" + t.text + "'");
    }
    return t.text;
  }

  void parse_decl() {
    const Token& head = peek();
    if (at_keyword("extern")) {
      next();
      std::string name = expect_path("name after 'extern'");
      if (db_.managed_classes.contains(name) || db_.native_fns.contains(name)) {
        throw DuplicateError(name, unit_, head.line);
      }
      db_.externs.insert(name);
      expect_end();
    } else if (at_keyword("managed")) {
      next();
      if (at_keyword("class")) {
        next();
        parse_class(head, ClassKind::Class);
      } else if (at_keyword("interface")) {
        next();
        parse_class(head, ClassKind::Interface);
      } else {
        unexpected(peek(), "'class' or 'interface'");
      }
    } else if (at_keyword("stub")) {
      next();
      std::string iface = expect_path("interface name");
      expect(Tok::Arrow);
      std::string impl = expect_path("class name");
      expect_end();
      if (db_.stub_bindings.contains(iface)) throw DuplicateError("stub " + iface, unit_, head.line);
      db_.stub_bindings.emplace(iface, impl);
      stubs_.push_back({iface, impl, loc_of(head)});
    } else if (at_keyword("native")) {
      next();
      expect_keyword("fn");
      parse_native_fn(head);
    } else if (at_keyword("jni_register")) {
      next();
      parse_jni_register(head);
    } else {
      unexpected(head, "declaration");
    }
  }

  void parse_class(const Token& head, ClassKind kind) {
    ManagedClass cls;
    cls.kind = kind;
    cls.loc = loc_of(head);
    cls.fqname = expect_path("class name");
    if (kind == ClassKind::Class) {
      if (at_keyword("extends")) {
        next();
        cls.super_class = expect_path("superclass name");
      }
      if (at_keyword("implements")) {
        next();
        cls.interfaces = parse_path_list();
      }
    } else if (at_keyword("extends")) {
      next();
      cls.interfaces = parse_path_list();
    }
    expect(Tok::LBrace);
    while (true) {
      skip_newlines();
      if (peek().kind == Tok::RBrace) {
        next();
        break;
      }
      if (at_keyword("field")) {
        const Token& ft = next();
        if (kind == ClassKind::Interface) fail(ft, "interfaces cannot declare fields");
        Field field;
        field.name = expect_simple_name("field name");
        expect(Tok::Colon);
        field.type = expect_path("field type");
        if (at_keyword("static")) {
          next();
          field.is_static = true;
        }
        expect_end();
        if (cls.find_field(field.name)) {
          throw DuplicateError(cls.fqname + "." + field.name, unit_, ft.line);
        }
        cls.fields.push_back(std::move(field));
      } else if (at_keyword("method")) {
        const Token& mt = peek();
        ManagedMethod method = parse_method(kind);
        if (cls.find_method(method.name)) {
          throw DuplicateError(cls.fqname + "." + method.name, unit_, mt.line);
        }
        cls.methods.push_back(std::move(method));
      } else {
        unexpected(peek(), "'field', 'method' or '}'");
      }
    }
    expect_end();
    if (db_.managed_classes.contains(cls.fqname) || db_.externs.contains(cls.fqname)) {
      throw DuplicateError(cls.fqname, unit_, head.line);
    }
    std::string name = cls.fqname;
    db_.managed_classes.emplace(std::move(name), std::move(cls));
  }

  std::vector<std::string> parse_path_list() {
    std::vector<std::string> out;
    out.push_back(expect_path("type name"));
    while (peek().kind == Tok::Comma) {
      next();
      out.push_back(expect_path("type name"));
    }
    return out;
  }

  ManagedMethod parse_method(ClassKind owner) {
    const Token& head = next();  // 'method'
    ManagedMethod m;
    m.loc = loc_of(head);
    m.name = expect_simple_name("method name");
    expect(Tok::LParen);
    if (peek().kind != Tok::RParen) {
      while (true) {
        Param p;
        const Token& pt = peek();
        p.name = expect_simple_name("parameter name");
        expect(Tok::Colon);
        p.type = expect_path("parameter type");
        if (p.name == "this" || m.find_param(p.name)) fail(pt, "duplicate parameter '" + p.name + "'");
        m.params.push_back(std::move(p));
        if (peek().kind != Tok::Comma) break;
        next();
      }
    }
    expect(Tok::RParen);

    bool saw_visibility = false;
    while (peek().kind == Tok::Ident) {
      const Token& mod = peek();
      if (mod.text == "public" || mod.text == "hidden" || mod.text == "greylist") {
        if (saw_visibility) fail(mod, "visibility given twice");
        saw_visibility = true;
        m.visibility = mod.text == "public"   ? Visibility::Public
                       : mod.text == "hidden" ? Visibility::Hidden
                                              : Visibility::Greylist;
        next();
      } else if (mod.text == "native") {
        m.is_native = true;
        next();
      } else if (mod.text == "permission") {
        next();
        expect(Tok::Eq);
        const Token& v = peek();
        if (v.kind != Tok::String && v.kind != Tok::Ident) unexpected(v, "permission name");
        if (m.permission) fail(v, "permission given twice");
        m.permission = next().text;
      } else {
        unexpected(mod, "method modifier or '{'");
      }
    }

    if (owner == ClassKind::Interface) {
      if (m.is_native) fail(head, "interface method cannot be native");
      if (peek().kind == Tok::LBrace) fail(peek(), "interface method cannot have a body");
      expect_end();
      return m;
    }
    if (peek().kind == Tok::LBrace) {
      const Token& brace = next();
      parse_body(m.body);
      if (m.is_native && !m.body.empty()) fail(brace, "native method '" + m.name + "' has a body");
    } else if (!m.is_native) {
      unexpected(peek(), "method body");
    }
    expect_end();
    return m;
  }

  // Parses statements up to and including the closing brace.
  void parse_body(std::vector<Stmt>& body) {
    while (true) {
      skip_newlines();
      if (peek().kind == Tok::RBrace) {
        next();
        return;
      }
      if (peek().kind == Tok::End) unexpected(peek(), "'}'");
      body.push_back(parse_stmt());
      expect_end();
    }
  }

  Stmt parse_stmt() {
    const Token& head = peek();
    Stmt stmt;
    stmt.loc = loc_of(head);
    if (head.kind != Tok::Ident) unexpected(head, "statement");
    if (head.text == "return") {
      next();
      ReturnStmt r;
      if (peek().kind == Tok::Ident) r.src = expect_simple_name("variable");
      stmt.op = std::move(r);
      return stmt;
    }
    if (head.text == "call" || head.text == "scall") {
      stmt.op = parse_invoke(std::nullopt);
      return stmt;
    }
    next();
    auto lhs = split_dots(head.text);
    if (lhs.size() > 2 || head.text.find("::") != std::string::npos) {
      fail(head, "assignment target must be 'v' or 'v.field'");
    }
    expect(Tok::Eq);
    if (lhs.size() == 2) {
      stmt.op = FieldPutStmt{lhs[0], lhs[1], expect_simple_name("variable")};
      return stmt;
    }
    const std::string& dst = lhs[0];
    check_var_name(head, dst);
    const Token& rhs = peek();
    if (rhs.kind != Tok::Ident) unexpected(rhs, "expression");
    if (rhs.text == "new") {
      next();
      stmt.op = NewStmt{dst, expect_path("type name")};
    } else if (rhs.text == "call" || rhs.text == "scall") {
      stmt.op = parse_invoke(dst);
    } else {
      next();
      auto parts = split_dots(rhs.text);
      if (parts.size() > 2 || rhs.text.find("::") != std::string::npos) {
        fail(rhs, "expression must be 'v' or 'v.field'");
      }
      if (parts.size() == 1) {
        stmt.op = AssignStmt{dst, parts[0]};
      } else {
        stmt.op = FieldGetStmt{dst, parts[0], parts[1]};
      }
    }
    return stmt;
  }

  void check_var_name(const Token& at, const std::string& name) const {
    if (name == "this" || name == "new" || name == "call" || name == "scall" ||
        name == "return") {
      fail(at, "'" + name + "' cannot be assigned");
    }
  }

  InvokeStmt parse_invoke(std::optional<std::string> dst) {
    const Token& kw = next();
    bool is_static = kw.text == "scall";
    const Token& target = expect(Tok::Ident, "call target");
    auto member = split_member(target.text);
    if (!member || target.text.find("::") != std::string::npos) {
      fail(target, "call target must be 'recv.method'");
    }
    InvokeStmt inv;
    inv.dst = std::move(dst);
    inv.recv = member->first;
    inv.method = member->second;
    inv.dispatch = is_static ? Dispatch::Static : Dispatch::Virtual;
    if (!is_static && inv.recv.find('.') != std::string::npos) {
      fail(target, "receiver of 'call' must be a variable");
    }
    inv.args = parse_args();
    return inv;
  }

  std::vector<Arg> parse_args() {
    std::vector<Arg> args;
    expect(Tok::LParen);
    if (peek().kind != Tok::RParen) {
      while (true) {
        const Token& t = peek();
        if (t.kind == Tok::String) {
          args.push_back({true, next().text});
        } else {
          args.push_back({false, expect_simple_name("argument")});
        }
        if (peek().kind != Tok::Comma) break;
        next();
      }
    }
    expect(Tok::RParen);
    return args;
  }

  void parse_native_fn(const Token& head) {
    NativeFn fn;
    fn.loc = loc_of(head);
    fn.name = expect_path("native function name");
    expect(Tok::LParen);
    if (peek().kind != Tok::RParen) {
      while (true) {
        fn.params.push_back(expect_simple_name("parameter name"));
        if (peek().kind != Tok::Comma) break;
        next();
      }
    }
    expect(Tok::RParen);
    skip_newlines();
    expect(Tok::LBrace);
    while (true) {
      skip_newlines();
      if (peek().kind == Tok::RBrace) {
        next();
        break;
      }
      expect_keyword("call");
      NativeCall call;
      call.callee = expect_path("callee name");
      call.args = parse_args();
      fn.calls.push_back(std::move(call));
      expect_end();
    }
    expect_end();
    if (db_.native_fns.contains(fn.name) || db_.externs.contains(fn.name)) {
      throw DuplicateError(fn.name, unit_, head.line);
    }
    std::string name = fn.name;
    db_.native_fns.emplace(std::move(name), std::move(fn));
  }

  void parse_jni_register(const Token& head) {
    JniRegistration reg;
    reg.loc = loc_of(head);
    expect_keyword("class");
    expect(Tok::Eq);
    reg.managed_class = expect_path("class name");
    skip_newlines();
    expect(Tok::LBrace);
    skip_newlines();
    if (peek().kind != Tok::RBrace) {
      while (true) {
        skip_newlines();
        const Token& m = expect(Tok::String, "quoted method name");
        expect(Tok::Arrow);
        JniEntry entry;
        entry.managed_method = m.text;
        entry.native_fn = expect_path("native function name");
        entry.loc = loc_of(m);
        reg.entries.push_back(std::move(entry));
        skip_newlines();
        if (peek().kind != Tok::Comma) break;
        next();
      }
    }
    skip_newlines();
    expect(Tok::RBrace);
    expect_end();
    db_.jni_registrations.push_back(std::move(reg));
  }

  std::vector<Token> toks_;
  size_t pos_ = 0;
  std::string unit_;
  ProgramDb& db_;
  std::vector<PendingStub>& stubs_;
};

void require_type(const ProgramDb& db, const std::string& name, const SourceLoc& loc) {
  if (!db.is_known_type(name)) throw LinkError(name, loc.unit, loc.line);
}

void link(const ProgramDb& db, const std::vector<PendingStub>& stubs) {
  for (const auto& [name, cls] : db.managed_classes) {
    for (const auto& parent : cls.parents()) require_type(db, parent, cls.loc);
    for (const auto& field : cls.fields) require_type(db, field.type, cls.loc);
    for (const auto& method : cls.methods) {
      for (const auto& p : method.params) require_type(db, p.type, method.loc);
      for (const auto& stmt : method.body) {
        if (const auto* n = std::get_if<NewStmt>(&stmt.op)) {
          require_type(db, n->type, stmt.loc);
        } else if (const auto* inv = std::get_if<InvokeStmt>(&stmt.op)) {
          if (inv->dispatch == Dispatch::Static) require_type(db, inv->recv, stmt.loc);
        }
      }
    }
  }
  for (const auto& stub : stubs) {
    require_type(db, stub.iface, stub.loc);
    require_type(db, stub.impl, stub.loc);
  }
  for (const auto& [name, fn] : db.native_fns) {
    for (const auto& call : fn.calls) {
      if (call.callee == kGlobalRefSink) continue;
      if (!db.native_fns.contains(call.callee) && !db.externs.contains(call.callee)) {
        throw LinkError(call.callee, fn.loc.unit, fn.loc.line);
      }
    }
  }
  for (const auto& reg : db.jni_registrations) {
    require_type(db, reg.managed_class, reg.loc);
    for (const auto& entry : reg.entries) {
      if (!db.native_fns.contains(entry.native_fn)) {
        throw LinkError(entry.native_fn, entry.loc.unit, entry.loc.line);
      }
    }
  }
}

// Best-effort static type of a receiver, only used to tag `call` sites as
// interface or virtual dispatch.
std::optional<std::string> simple_declared_type(const ManagedClass& cls, const ManagedMethod& m,
                                                const std::string& var, int fuel = 8) {
  if (fuel <= 0) return std::nullopt;
  if (var == "this") return cls.fqname;
  if (const Param* p = m.find_param(var)) return p->type;
  for (const auto& stmt : m.body) {
    if (stmt.defined_var() != std::string_view(var)) continue;
    if (const auto* n = std::get_if<NewStmt>(&stmt.op)) return n->type;
    if (const auto* a = std::get_if<AssignStmt>(&stmt.op)) {
      return simple_declared_type(cls, m, a->src, fuel - 1);
    }
    if (const auto* g = std::get_if<FieldGetStmt>(&stmt.op); g && g->recv == "this") {
      if (const Field* f = cls.find_field(g->field)) return f->type;
    }
    return std::nullopt;
  }
  return std::nullopt;
}

void assign_dispatch_kinds(ProgramDb& db) {
  for (auto& [name, cls] : db.managed_classes) {
    for (auto& method : cls.methods) {
      for (auto& stmt : method.body) {
        auto* inv = std::get_if<InvokeStmt>(&stmt.op);
        if (!inv || inv->dispatch == Dispatch::Static) continue;
        auto type = simple_declared_type(cls, method, inv->recv);
        const ManagedClass* target = type ? db.find_class(*type) : nullptr;
        inv->dispatch =
            target && target->is_interface() ? Dispatch::Interface : Dispatch::Virtual;
      }
    }
  }
}

}  // namespace

ProgramDb parse_corpus(std::span<const SourceUnit> sources, AnalysisConfig config) {
  ProgramDb db;
  db.config = std::move(config);
  std::vector<PendingStub> stubs;
  for (const auto& unit : sources) {
    Lexer lexer(unit.text, unit.name);
    Parser parser(lexer.run(), unit.name, db, stubs);
    parser.parse_unit();
  }
  link(db, stubs);
  assign_dispatch_kinds(db);
  return db;
}

std::vector<SourceUnit> load_corpus_units(const std::filesystem::path& path) {
  namespace fs = std::filesystem;
  std::vector<fs::path> files;
  if (fs::is_directory(path)) {
    for (const auto& entry : fs::directory_iterator(path)) {
      if (entry.is_regular_file() && entry.path().extension() == ".jir") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
  } else if (fs::exists(path)) {
    files.push_back(path);
  } else {
    throw Error("corpus path does not exist: " + path.string());
  }
  std::vector<SourceUnit> units;
  for (const auto& file : files) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw Error("cannot read " + file.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    units.push_back({file.filename().string(), buf.str()});
  }
  return units;
}

}  // namespace jgrscan
