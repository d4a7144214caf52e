// include/jgrscan/detector.hpp
#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "jgrscan/diagnostic.hpp"
#include "jgrscan/managed_analysis.hpp"
#include "jgrscan/native_analysis.hpp"

namespace jgrscan {

enum class Exploitability { Public, Greylist, Hidden, PermissionGated };
std::string_view to_string(Exploitability e);

struct LeakFinding {
  EntryPoint entry;
  /// Entry method first, JNI managed method last.
  std::vector<MethodRef> managed_path;
  JniBinding jni;
  NativePath native_path;
  EscapeSite escape;
  Exploitability exploitability = Exploitability::Public;

  friend bool operator==(const LeakFinding&, const LeakFinding&) = default;
};

struct Report {
  std::string corpus;
  std::vector<LeakFinding> findings;
  Diagnostics diagnostics;

  std::map<std::string, size_t> per_service() const;
  std::map<std::string, size_t> per_exploitability() const;
};

/// One finding per entry point whose call graph contains both a reachable
/// JGR-creating JNI method and a Binder-related field escape. Helper entries
/// are reported when their graph reaches a vulnerable service method. Sorted
/// by (service, kind, class, method).
std::vector<LeakFinding> detect(const AnalysisContext& ctx, const AnalysisConfig& config,
                                Diagnostics* diagnostics = nullptr);

/// Convenience wrapper that builds the context and collects diagnostics.
Report analyze(const ProgramDb& db, const AnalysisConfig& config, std::string corpus = "");

Exploitability classify_exploitability(const LeakFinding& finding, const AnalysisConfig& config);

/// `json` gives `{"version":1,"findings":[...]}`; `table` groups rows by
/// service; `csv` has a header line and one line per finding. Throws
/// UnknownFormat for anything else.
std::string render_report(const std::vector<LeakFinding>& findings, std::string_view format);

/// Like render_report, with corpus id, summary counts and diagnostics added
/// to the JSON form.
std::string render_full_report(const Report& report, std::string_view format);

/// Re-checks a finding against the db alone: consecutive managed-path
/// methods are linked by a call edge, the last one is bound to the native
/// path's head, the native path is valid and the escape is Binder-related
/// and sits at a collection sink inside a path method's graph. On failure
/// `why` receives a reason.
bool check_witnesses(const ProgramDb& db, const LeakFinding& finding, const AnalysisConfig& config,
                     std::string* why = nullptr);

}  // namespace jgrscan
