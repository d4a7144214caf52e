// src/config.cpp
#include "jgrscan/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "jgrscan/error.hpp"

namespace jgrscan {

namespace {

std::string_view trim(std::string_view s) {
  auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
  while (!s.empty() && ws(s.front())) s.remove_prefix(1);
  while (!s.empty() && ws(s.back())) s.remove_suffix(1);
  return s;
}

bool is_signature(std::string_view s) {
  if (!split_member(s)) return false;
  for (char c : s) {
    bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$' || c == '.';
    if (!ok) return false;
  }
  return s.find("..") == std::string_view::npos;
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  int line_no = 0;
  size_t start = 0;
  while (start <= text.size()) {
    ++line_no;
    size_t end = text.find('\n', start);
    std::string_view line = text.substr(start, end == std::string_view::npos ? end : end - start);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (!line.empty()) fn(line, line_no);
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

std::vector<ImplicitEdge> parse_implicit_edges(std::string_view text, const std::string& unit) {
  std::vector<ImplicitEdge> out;
  for_each_line(text, [&](std::string_view line, int line_no) {
    auto arrow = line.find("=>");
    if (arrow == std::string_view::npos) {
      throw SyntaxError(unit, line_no, 1, "expected 'trigger => callback'");
    }
    auto trigger = trim(line.substr(0, arrow));
    auto callback = trim(line.substr(arrow + 2));
    if (!is_signature(trigger) || !is_signature(callback)) {
      throw SyntaxError(unit, line_no, 1, "malformed signature in implicit edge");
    }
    out.push_back({std::string(trigger), std::string(callback)});
  });
  return out;
}

std::vector<std::string> parse_signature_list(std::string_view text, const std::string& unit) {
  std::vector<std::string> out;
  for_each_line(text, [&](std::string_view line, int line_no) {
    if (!is_signature(line)) {
      throw SyntaxError(unit, line_no, 1, "expected 'fqname.method'");
    }
    out.emplace_back(line);
  });
  return out;
}

AnalysisConfig load_config(AnalysisConfig base, const std::optional<std::filesystem::path>& corpus_dir,
                           const ConfigFiles& files) {
  namespace fs = std::filesystem;
  auto pick = [&](const std::optional<fs::path>& explicit_path,
                  std::string_view default_name) -> std::optional<fs::path> {
    if (explicit_path) return explicit_path;
    if (corpus_dir && fs::is_directory(*corpus_dir)) {
      fs::path candidate = *corpus_dir / default_name;
      if (fs::exists(candidate)) return candidate;
    }
    return std::nullopt;
  };
  if (auto p = pick(files.implicit_edges, kImplicitEdgesFile)) {
    base.implicit_edges = parse_implicit_edges(read_file(*p), p->filename().string());
  }
  if (auto p = pick(files.collection_sinks, kCollectionSinksFile)) {
    base.collection_sinks = parse_signature_list(read_file(*p), p->filename().string());
  }
  if (auto p = pick(files.greylist, kGreylistFile)) {
    auto entries = parse_signature_list(read_file(*p), p->filename().string());
    base.greylist = {entries.begin(), entries.end()};
  }
  return base;
}

}  // namespace jgrscan
