// tests/support/corpus_gen.cpp
#include "corpus_gen.hpp"

#include <algorithm>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <vector>

namespace jgrscan::testing {

namespace {

struct GenMethod {
  std::string name;
  std::optional<std::string> param_type;
  bool native = false;
  std::vector<std::string> body;
};

struct GenClass {
  std::string name;
  std::optional<int> super;
  bool has_store = false;
  bool store_static = false;
  std::vector<std::string> interfaces;
  std::vector<GenMethod> methods;
};

class Generator {
public:
  Generator(uint64_t seed, const GenLimits& limits) : rng_(seed), limits_(limits) {}

  std::string run() {
    make_interfaces();
    make_classes();
    make_natives();
    make_bodies();
    make_stubs();
    return print();
  }

private:
  size_t pick(size_t n) { return std::uniform_int_distribution<size_t>(0, n - 1)(rng_); }
  bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }
  int between(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  std::string cls(size_t i) const { return "gen.C" + std::to_string(i); }

  void make_interfaces() {
    int n = between(0, 2);
    for (int i = 0; i < n; ++i) {
      interfaces_.push_back({"gen.I" + std::to_string(i), kNames[pick(kNames.size())]});
    }
  }

  void make_classes() {
    int budget = limits_.max_methods - 1;
    std::vector<std::string> param_types = kParamTypes;
    for (const auto& iface : interfaces_) param_types.push_back(iface.first);
    int n = between(2, std::max(2, limits_.max_classes));
    for (int i = 0; i < n; ++i) {
      GenClass c;
      c.name = cls(i);
      if (i > 0 && chance(0.4)) c.super = static_cast<int>(pick(i));
      c.has_store = chance(0.7);
      c.store_static = chance(0.3);
      std::vector<std::string> names(kNames.begin(), kNames.end());
      std::shuffle(names.begin(), names.end(), rng_);
      int count = std::min(between(1, 3), budget - (n - i - 1));
      for (int k = 0; k < count && budget > 0; ++k, --budget) {
        GenMethod m;
        m.name = names[k];
        if (chance(0.4)) m.param_type = param_types[pick(param_types.size())];
        c.methods.push_back(std::move(m));
      }
      if (budget > 0 && chance(0.6)) {
        --budget;
        GenMethod m;
        m.name = "n" + std::to_string(i);
        m.native = true;
        c.methods.push_back(std::move(m));
      }
      classes_.push_back(std::move(c));
    }
    for (auto& c : classes_) {
      bool runnable = false;
      for (const auto& m : c.methods) runnable |= !m.native && m.name == "run";
      if (runnable) c.interfaces.push_back("java.lang.Runnable");
    }
    for (size_t i = 0; i < classes_.size(); ++i) {
      for (const auto& [iface, method] : interfaces_) {
        if (has_method(i, method) && chance(0.6)) classes_[i].interfaces.push_back(iface);
      }
    }
  }

  bool has_method(size_t i, const std::string& name) const {
    std::set<size_t> seen;
    for (std::optional<size_t> c = i; c && seen.insert(*c).second;
         c = classes_[*c].super ? std::optional<size_t>(*classes_[*c].super) : std::nullopt) {
      for (const auto& m : classes_[*c].methods) {
        if (m.name == name) return true;
      }
    }
    return false;
  }

  bool has_store(size_t i) const {
    for (std::optional<size_t> c = i; c;
         c = classes_[*c].super ? std::optional<size_t>(*classes_[*c].super) : std::nullopt) {
      if (classes_[*c].has_store) return true;
    }
    return false;
  }

  void make_natives() {
    int natives = 0;
    for (const auto& c : classes_) {
      for (const auto& m : c.methods) natives += m.native;
    }
    int n = std::max(natives, between(1, limits_.max_native_fns));
    n = std::min(std::max(n, natives), std::max(limits_.max_native_fns, natives));
    native_calls_.resize(n);
    for (int i = 0; i < n; ++i) {
      int calls = between(0, 3);
      for (int k = 0; k < calls; ++k) {
        double r = std::uniform_real_distribution<double>(0, 1)(rng_);
        if (r < 0.35) {
          native_calls_[i].push_back("env.NewGlobalRef(obj)");
        } else if (r < 0.25) {
          native_calls_[i].push_back("gen_ext(obj)");
        } else {
          native_calls_[i].push_back("gen_f" + std::to_string(pick(n)) + "(env, obj)");
        }
      }
    }
    std::vector<int> fns(n);
    for (int i = 0; i < n; ++i) fns[i] = i;
    std::shuffle(fns.begin(), fns.end(), rng_);
    size_t next = 0;
    for (size_t i = 0; i < classes_.size(); ++i) {
      for (const auto& m : classes_[i].methods) {
        if (m.native) registrations_.push_back({cls(i), m.name, fns[next++]});
      }
    }
  }

  std::vector<std::string> call_names() const {
    std::set<std::string> names(kNames.begin(), kNames.end());
    for (const auto& c : classes_) {
      for (const auto& m : c.methods) names.insert(m.name);
    }
    return {names.begin(), names.end()};
  }

  void make_bodies() {
    auto names = call_names();
    for (const auto& c : classes_) {
      for (const auto& m : c.methods) {
        if (m.native) natives_.push_back(m.name);
      }
    }
    for (size_t i = 0; i < classes_.size(); ++i) {
      for (auto& m : classes_[i].methods) {
        if (m.native) continue;
        int count = between(0, limits_.max_stmts);
        for (int s = 0; s < count; ++s) add_stmt(i, m, names, s);
      }
    }
    int services = between(1, std::min<int>(3, static_cast<int>(classes_.size())));
    std::vector<size_t> order(classes_.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng_);
    for (int s = 0; s < services; ++s) {
      std::string v = "s" + std::to_string(s);
      boot_.push_back(v + " = new " + cls(order[s]));
      boot_.push_back("scall android.os.ServiceManager.addService(\"svc" + std::to_string(s) +
                      "\", " + v + ")");
    }
  }

  void add_stmt(size_t owner, GenMethod& m, const std::vector<std::string>& names, int index) {
    std::string k = std::to_string(index);
    std::string name = names[pick(names.size())];
    if (!natives_.empty() && chance(0.4)) name = natives_[pick(natives_.size())];
    std::string target = cls(pick(classes_.size()));
    bool param_obj = m.param_type && (m.param_type->starts_with("gen.C") ||
                                      m.param_type->starts_with("gen.I"));
    switch (pick(7)) {
      case 0:
        m.body.push_back("v" + k + " = new " + target);
        m.body.push_back("call v" + k + "." + name + "()");
        break;
      case 1:
        m.body.push_back("call this." + name + "()");
        break;
      case 2:
        m.body.push_back("scall " + target + "." + name + "()");
        break;
      case 3:
        if (param_obj) {
          m.body.push_back("call p." + name + "()");
        } else {
          m.body.push_back("call this." + name + "()");
        }
        break;
      case 4:
      case 5: {
        if (has_store(owner) && !chance(0.15)) {
          m.body.push_back("l" + k + " = this.store");
        } else {
          m.body.push_back("l" + k + " = new java.util.ArrayList");
        }
        std::string arg;
        if (m.param_type && chance(0.3)) {
          arg = "p";
        } else {
          arg = "t" + k;
          m.body.push_back(arg + " = new " + kTokens[pick(kTokens.size())]);
        }
        m.body.push_back("call l" + k + ".add(" + arg + ")");
        break;
      }
      default:
        m.body.push_back("h" + k + " = new android.os.Handler");
        m.body.push_back("r" + k + " = new " + target);
        m.body.push_back("call h" + k + ".post(r" + k + ")");
        break;
    }
  }

  void make_stubs() {
    for (const auto& [iface, method] : interfaces_) {
      if (chance(0.4)) stubs_.emplace_back(iface, cls(pick(classes_.size())));
    }
  }

  std::string print() {
    std::ostringstream out;
    for (const char* e : {"java.lang.String", "java.lang.Runnable", "java.util.ArrayList",
                          "android.os.Handler", "android.os.ServiceManager", "android.os.IBinder",
                          "gen_ext"}) {
      out << "extern " << e << "\n";
    }
    bool tok_binder = chance(0.6);
    out << "managed class gen.Tok {\n";
    if (tok_binder) out << "  field b: android.os.IBinder\n";
    out << "}\n";
    out << "managed class gen.SubTok extends gen.Tok {\n}\n";
    out << "managed class gen.Wrap {\n  field t: gen.Tok\n}\n";
    out << "managed class gen.Plain {\n  field s: java.lang.String\n}\n";
    for (const auto& [iface, method] : interfaces_) {
      out << "managed interface " << iface << " {\n  method " << method << "()\n}\n";
    }
    for (const auto& c : classes_) {
      out << "managed class " << c.name;
      if (c.super) out << " extends " << cls(*c.super);
      for (size_t i = 0; i < c.interfaces.size(); ++i) {
        out << (i ? ", " : " implements ") << c.interfaces[i];
      }
      out << " {\n";
      if (c.has_store) {
        out << "  field store: java.util.ArrayList" << (c.store_static ? " static" : "") << "\n";
      }
      for (const auto& m : c.methods) {
        out << "  method " << m.name << "(";
        if (m.param_type) out << "p: " << *m.param_type;
        out << ")";
        if (m.native) {
          out << " native\n";
          continue;
        }
        out << " {\n";
        for (const auto& s : m.body) out << "    " << s << "\n";
        out << "  }\n";
      }
      out << "}\n";
    }
    out << "managed class gen.Server {\n  method boot() {\n";
    for (const auto& s : boot_) out << "    " << s << "\n";
    out << "  }\n}\n";
    for (const auto& [iface, target] : stubs_) out << "stub " << iface << " -> " << target << "\n";
    for (size_t i = 0; i < native_calls_.size(); ++i) {
      out << "native fn gen_f" << i << "(env, obj) {\n";
      for (const auto& c : native_calls_[i]) out << "  call " << c << "\n";
      out << "}\n";
    }
    for (const auto& r : registrations_) {
      out << "jni_register class=" << r.cls << " { \"" << r.method << "\" -> gen_f" << r.fn
          << " }\n";
    }
    return out.str();
  }

  static inline const std::vector<std::string> kNames{"m0", "m1", "m2", "run"};
  static inline const std::vector<std::string> kParamTypes{
      "gen.C0", "gen.C1", "gen.Tok", "android.os.IBinder", "java.lang.String",
      "gen.Wrap"};
  static inline const std::vector<std::string> kTokens{"gen.Tok", "gen.SubTok", "gen.Wrap",
                                                       "gen.Plain"};

  struct Registration {
    std::string cls;
    std::string method;
    int fn;
  };

  std::mt19937_64 rng_;
  GenLimits limits_;
  std::vector<std::pair<std::string, std::string>> interfaces_;
  std::vector<GenClass> classes_;
  std::vector<std::vector<std::string>> native_calls_;
  std::vector<Registration> registrations_;
  std::vector<std::string> boot_;
  std::vector<std::string> natives_;
  std::vector<std::pair<std::string, std::string>> stubs_;
};

}  // namespace

std::string generate_corpus(uint64_t seed, const GenLimits& limits) {
  return Generator(seed, limits).run();
}

}  // namespace jgrscan::testing
