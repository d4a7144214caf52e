// src/cli.cpp
#include "jgrscan/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "jgrscan/bench.hpp"
#include "jgrscan/config.hpp"
#include "jgrscan/detector.hpp"
#include "jgrscan/error.hpp"
#include "jgrscan/parser.hpp"
#include "jgrscan/poc.hpp"
#include "jgrscan/simulator.hpp"
#include "jgrscan/validate.hpp"
#include "json.hpp"

namespace jgrscan {

namespace {

namespace fs = std::filesystem;

struct CorpusOptions {
  std::vector<std::string> corpus;
  std::string edges, sinks, greylist;
  int max_depth = AnalysisConfig{}.max_depth;
};

struct LoadedCorpus {
  ProgramDb db;
  std::string id;
};

void add_corpus_options(CLI::App* cmd, CorpusOptions& o, bool required) {
  auto* opt = cmd->add_option("--corpus", o.corpus, "Corpus file or directory (repeatable)");
  if (required) opt->required();
  cmd->add_option("--edges", o.edges, "Implicit-edge list");
  cmd->add_option("--sinks", o.sinks, "Collection-sink list");
  cmd->add_option("--greylist", o.greylist, "Greylisted interfaces");
  cmd->add_option("--max-depth", o.max_depth, "Call-graph depth limit (0 = unbounded)")
      ->check(CLI::NonNegativeNumber);
}

LoadedCorpus load(const CorpusOptions& o) {
  ConfigFiles files;
  if (!o.edges.empty()) files.implicit_edges = o.edges;
  if (!o.sinks.empty()) files.collection_sinks = o.sinks;
  if (!o.greylist.empty()) files.greylist = o.greylist;
  std::optional<fs::path> dir;
  if (!o.corpus.empty() && fs::is_directory(o.corpus.front())) dir = o.corpus.front();
  AnalysisConfig config = load_config(AnalysisConfig::defaults(), dir, files);
  config.max_depth = o.max_depth == 0 ? kUnboundedDepth : o.max_depth;

  std::vector<SourceUnit> units;
  std::string id;
  for (const auto& path : o.corpus) {
    if (!fs::exists(path)) throw Error("no such corpus: " + path);
    auto more = load_corpus_units(path);
    units.insert(units.end(), std::make_move_iterator(more.begin()),
                 std::make_move_iterator(more.end()));
    id += (id.empty() ? "" : ",") + fs::path(path).lexically_normal().string();
  }
  return {parse_corpus(units, config), id};
}

class Output {
public:
  Output(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (path.empty()) return;
    file_.open(path, std::ios::binary);
    if (!file_) throw Error("cannot write " + path);
    stream_ = &file_;
  }
  std::ostream& get() { return *stream_; }

private:
  std::ofstream file_;
  std::ostream* stream_;
};

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string render_verification(const std::vector<Verification>& results, std::string_view format) {
  if (format == "json") {
    nlohmann::ordered_json j;
    j["version"] = 1;
    j["results"] = nlohmann::ordered_json::array();
    for (const auto& v : results) {
      j["results"].push_back({{"interface", v.finding.entry.interface_name()},
                              {"exploitability", to_string(v.finding.exploitability)},
                              {"verified", v.verified},
                              {"outcome", v.outcome ? nlohmann::ordered_json(to_string(*v.outcome))
                                                    : nlohmann::ordered_json(nullptr)},
                              {"reason", v.reason}});
    }
    return j.dump(2) + "\n";
  }
  std::ostringstream out;
  if (format == "csv") {
    out << "interface,verified,outcome,reason\n";
    for (const auto& v : results) {
      out << v.finding.entry.interface_name() << ',' << (v.verified ? "yes" : "no") << ','
          << (v.outcome ? to_string(*v.outcome) : "") << ",\"" << v.reason << "\"\n";
    }
    return out.str();
  }
  if (format != "table") throw UnknownFormat(std::string(format));
  size_t width = 9;
  for (const auto& v : results) width = std::max(width, v.finding.entry.interface_name().size());
  for (const auto& v : results) {
    std::string name = v.finding.entry.interface_name();
    out << name << std::string(width - name.size() + 2, ' ')
        << (v.verified ? "verified" : "unverified");
    if (!v.reason.empty()) out << "  (" << v.reason << ")";
    out << '\n';
  }
  size_t n = std::count_if(results.begin(), results.end(),
                           [](const Verification& v) { return v.verified; });
  out << n << " of " << results.size() << " finding(s) verified\n";
  return out.str();
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finds and simulates JNI global reference exhaustion in service corpora",
               "jgrscan"};
  app.require_subcommand(1);
  int exit_code = 0;
  std::function<void()> action;

  CorpusOptions analyze_opts;
  std::string analyze_format = "json", analyze_out;
  auto* analyze = app.add_subcommand("analyze", "Report vulnerable service interfaces");
  add_corpus_options(analyze, analyze_opts, true);
  analyze->add_option("--format", analyze_format)->check(CLI::IsMember({"json", "table", "csv"}));
  analyze->add_option("--out", analyze_out, "Write the report here instead of stdout");
  analyze->callback([&] {
    action = [&] {
      auto corpus = load(analyze_opts);
      Report report = jgrscan::analyze(corpus.db, corpus.db.config, corpus.id);
      for (const auto& d : report.diagnostics) err << d.format() << '\n';
      Output o(analyze_out, out);
      o.get() << render_full_report(report, analyze_format);
      exit_code = report.findings.empty() ? 0 : 1;
    };
  });

  CorpusOptions validate_opts;
  auto* validate_cmd = app.add_subcommand("validate", "Check a corpus for structural problems");
  add_corpus_options(validate_cmd, validate_opts, true);
  validate_cmd->callback([&] {
    action = [&] {
      auto corpus = load(validate_opts);
      Diagnostics diags = validate(corpus.db);
      for (const auto& d : diags) out << d.format() << '\n';
      out << diags.size() << " diagnostics\n";
      exit_code = diags.empty() ? 0 : 1;
    };
  });

  CorpusOptions sim_opts;
  std::string scenario_path, sim_iface, sim_attack = "simple", sim_policy = "none", sim_out;
  int64_t sim_capacity = SimConfig{}.jgr_capacity, sim_budget = 0;
  uint64_t sim_seed = 0;
  int sim_uid = AttackScript{}.app_uid;
  auto* simulate = app.add_subcommand("simulate", "Run one attack script and print its trace");
  add_corpus_options(simulate, sim_opts, false);
  simulate->add_option("--scenario", scenario_path, "Scenario JSON {config, script}");
  simulate->add_option("--iface", sim_iface, "Target interface, service.method");
  simulate->add_option("--attack", sim_attack)
      ->check(CLI::IsMember({"simple", "service_based", "one_binder"}));
  simulate->add_option("--budget", sim_budget, "Calls (per stage); default 2 x capacity");
  simulate->add_option("--policy", sim_policy, "none | per-interface:I=N | binder-proxy:N[:buggy] | purger[:N]");
  simulate->add_option("--capacity", sim_capacity)->check(CLI::PositiveNumber);
  simulate->add_option("--seed", sim_seed);
  simulate->add_option("--uid", sim_uid);
  simulate->add_option("--out", sim_out);
  simulate->callback([&] {
    action = [&] {
      Scenario s;
      if (!scenario_path.empty()) {
        s = parse_scenario(read_text(scenario_path));
      } else {
        if (sim_iface.empty()) throw Error("simulate needs --scenario or --iface");
        s.config.jgr_capacity = sim_capacity;
        s.config.policy = parse_policy(sim_policy);
        s.config.rng_seed = sim_seed;
        s.script.strategy = parse_strategy(sim_attack);
        s.script.iface = sim_iface;
        s.script.budget = sim_budget > 0 ? sim_budget : 2 * sim_capacity;
        s.script.app_uid = sim_uid;
      }
      RunResult r;
      if (!sim_opts.corpus.empty()) {
        r = run(load(sim_opts).db, s.config, s.script);
      } else {
        r = run(InterfaceCatalog{{s.script.iface, true}}, s.config, s.script);
      }
      Output o(sim_out, out);
      o.get() << trace_to_jsonl(r.trace);
      nlohmann::ordered_json summary;
      summary["outcome"] = to_string(r.outcome.kind);
      summary["steps"] = r.outcome.final_state.step;
      summary["jgr_total"] = r.outcome.final_state.jgr_total;
      const AppState& a = r.outcome.final_state.app(s.script.app_uid);
      summary["proxy_count"] = a.proxy_count;
      summary["jgr_count"] = a.jgr_count;
      o.get() << summary.dump() << '\n';
    };
  });

  CorpusOptions verify_opts;
  std::string verify_policy = "none", verify_format = "table", verify_out;
  int64_t verify_capacity = 200;
  uint64_t verify_seed = 0;
  auto* verify_cmd = app.add_subcommand("verify", "Run generated attacks for every finding");
  add_corpus_options(verify_cmd, verify_opts, true);
  verify_cmd->add_option("--policy", verify_policy);
  verify_cmd->add_option("--capacity", verify_capacity)->check(CLI::PositiveNumber);
  verify_cmd->add_option("--seed", verify_seed);
  verify_cmd->add_option("--format", verify_format)->check(CLI::IsMember({"json", "table", "csv"}));
  verify_cmd->add_option("--out", verify_out);
  verify_cmd->callback([&] {
    action = [&] {
      auto corpus = load(verify_opts);
      AnalysisContext ctx(corpus.db);
      auto findings = detect(ctx, corpus.db.config);
      SimConfig config;
      config.jgr_capacity = verify_capacity;
      config.policy = parse_policy(verify_policy);
      config.rng_seed = verify_seed;
      auto results = verify(corpus.db, findings, config);
      Output o(verify_out, out);
      o.get() << render_verification(results, verify_format);
      exit_code = findings.empty() ? 0 : 1;
    };
  });

  int bench_trials = 5;
  std::vector<int64_t> bench_ns = kRequestGrid;
  std::string bench_out;
  auto* bench = app.add_subcommand("bench", "Time global-reference creation with and without Purger");
  bench->add_option("--trials", bench_trials)->check(CLI::PositiveNumber);
  bench->add_option("--grid", bench_ns, "Request counts")->check(CLI::PositiveNumber);
  bench->add_option("--out", bench_out);
  bench->callback([&] {
    action = [&] {
      auto points = bench_grid(bench_ns, bench_trials);
      Output o(bench_out, out);
      o.get() << bench_csv(points);
    };
  });

  int64_t matrix_capacity = 100, matrix_threshold = 50, matrix_budget = 0;
  std::string matrix_iface = "audio.startWatchingRoutes", matrix_format = "table", matrix_out;
  auto* matrix = app.add_subcommand("matrix", "Outcome of every attack under every defense");
  matrix->add_option("--capacity", matrix_capacity)->check(CLI::PositiveNumber);
  matrix->add_option("--threshold", matrix_threshold)->check(CLI::PositiveNumber);
  matrix->add_option("--budget", matrix_budget, "Calls per attack (stage); default 2 x capacity");
  matrix->add_option("--iface", matrix_iface);
  matrix->add_option("--format", matrix_format)->check(CLI::IsMember({"json", "table", "csv"}));
  matrix->add_option("--out", matrix_out);
  matrix->callback([&] {
    action = [&] {
      int64_t budget = matrix_budget > 0 ? matrix_budget : 2 * matrix_capacity;
      auto m = outcome_matrix(InterfaceCatalog{{matrix_iface, true}},
                              standard_policies(matrix_iface, matrix_threshold),
                              standard_attacks(matrix_iface, budget), matrix_capacity);
      Output o(matrix_out, out);
      o.get() << render_matrix(m, matrix_format);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  try {
    if (action) action();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return exit_code;
}

}  // namespace jgrscan
