// src/report.cpp
#include <algorithm>
#include <sstream>

#include "jgrscan/detector.hpp"
#include "jgrscan/error.hpp"
#include "json.hpp"

namespace jgrscan {

namespace {

using ojson = nlohmann::ordered_json;

ojson finding_json(const LeakFinding& f) {
  ojson j;
  j["service"] = f.entry.service_name;
  j["kind"] = to_string(f.entry.kind);
  j["class"] = f.entry.cls;
  j["method"] = f.entry.method;
  j["interface"] = f.entry.interface_name();
  j["visibility"] = to_string(f.entry.visibility);
  j["permission"] = f.entry.permission ? ojson(*f.entry.permission) : ojson(nullptr);
  j["exploitability"] = to_string(f.exploitability);
  j["path_feasibility"] = "unverified";
  auto& path = j["managed_path"] = ojson::array();
  for (const auto& m : f.managed_path) path.push_back(m.str());
  j["jni"] = {{"class", f.jni.managed_class},
              {"method", f.jni.managed_method},
              {"native", f.jni.native_fn}};
  j["native_path"] = f.native_path.frames;
  const EscapeSite& e = f.escape;
  j["escape"] = {{"container_kind", to_string(e.container_kind)},
                 {"container", e.container_class + "." + e.container_field},
                 {"sink_call", {{"method", e.sink_call.method.str()}, {"index", e.sink_call.index}}},
                 {"sink_method", e.sink_method},
                 {"argument", e.argument},
                 {"escaping_type", e.escaping_type},
                 {"binder_related", e.binder_related}};
  return j;
}

ojson findings_json(const std::vector<LeakFinding>& findings) {
  ojson arr = ojson::array();
  for (const auto& f : findings) arr.push_back(finding_json(f));
  return arr;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string render_csv(const std::vector<LeakFinding>& findings) {
  std::ostringstream out;
  out << "service,interface,class,kind,exploitability,jni_method,native_function,container,"
         "escaping_type\n";
  for (const auto& f : findings) {
    std::vector<std::string> cols{f.entry.service_name,
                                  f.entry.method,
                                  f.entry.cls,
                                  std::string(to_string(f.entry.kind)),
                                  std::string(to_string(f.exploitability)),
                                  f.jni.managed().str(),
                                  f.jni.native_fn,
                                  f.escape.container_class + "." + f.escape.container_field,
                                  f.escape.escaping_type};
    for (size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << csv_field(cols[i]);
    out << '\n';
  }
  return out.str();
}

std::string pad(const std::string& s, size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

std::string render_table(const std::vector<LeakFinding>& findings) {
  const std::vector<std::string> header{"Service", "Interface", "Exploitability", "JNI method",
                                        "Native function"};
  std::vector<std::vector<std::string>> rows;
  auto sorted = findings;
  std::stable_sort(sorted.begin(), sorted.end(), [](const LeakFinding& a, const LeakFinding& b) {
    return a.entry.service_name < b.entry.service_name;
  });
  std::string last_service;
  for (const auto& f : sorted) {
    bool first = rows.empty() || f.entry.service_name != last_service;
    last_service = f.entry.service_name;
    std::string iface = f.entry.method;
    if (f.entry.kind == EntryKind::ServiceHelper) iface += " (helper)";
    rows.push_back({first ? f.entry.service_name : "", iface,
                    std::string(to_string(f.exploitability)), f.jni.managed().str(),
                    f.jni.native_fn});
  }
  std::vector<size_t> width(header.size());
  for (size_t i = 0; i < header.size(); ++i) {
    width[i] = header[i].size();
    for (const auto& r : rows) width[i] = std::max(width[i], r[i].size());
  }
  std::ostringstream out;
  auto line = [&](const std::vector<std::string>& cells) {
    std::string s;
    for (size_t i = 0; i < cells.size(); ++i) {
      s += (i ? "  " : "") + (i + 1 == cells.size() ? cells[i] : pad(cells[i], width[i]));
    }
    out << s << '\n';
  };
  line(header);
  std::vector<std::string> rule;
  for (size_t w : width) rule.emplace_back(w, '-');
  line(rule);
  for (const auto& r : rows) line(r);
  out << findings.size() << " finding(s)\n";
  return out.str();
}

void check_format(std::string_view format) {
  if (format != "json" && format != "table" && format != "csv") {
    throw UnknownFormat(std::string(format));
  }
}

}  // namespace

std::string render_report(const std::vector<LeakFinding>& findings, std::string_view format) {
  check_format(format);
  if (format == "csv") return render_csv(findings);
  if (format == "table") return render_table(findings);
  ojson j;
  j["version"] = 1;
  j["findings"] = findings_json(findings);
  return j.dump(2) + "\n";
}

std::string render_full_report(const Report& report, std::string_view format) {
  check_format(format);
  if (format != "json") return render_report(report.findings, format);
  ojson j;
  j["version"] = 1;
  j["corpus"] = report.corpus;
  j["findings"] = findings_json(report.findings);
  ojson summary;
  summary["findings"] = report.findings.size();
  summary["services"] = report.per_service().size();
  summary["by_service"] = report.per_service();
  summary["by_exploitability"] = report.per_exploitability();
  j["summary"] = summary;
  auto& diags = j["diagnostics"] = ojson::array();
  for (const auto& d : report.diagnostics) {
    diags.push_back({{"code", to_string(d.code)},
                     {"message", d.message},
                     {"unit", d.unit},
                     {"line", d.line}});
  }
  return j.dump(2) + "\n";
}

}  // namespace jgrscan
