// include/jgrscan/config.hpp
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "jgrscan/ir.hpp"

namespace jgrscan {

// Config files are UTF-8 with one entry per line; `#` starts a comment.
// Malformed lines raise SyntaxError positioned at the line.

/// `trigger-sig => callback-sig` lines.
std::vector<ImplicitEdge> parse_implicit_edges(std::string_view text, const std::string& unit);

/// `fqname.method` lines (collection sinks, greylist).
std::vector<std::string> parse_signature_list(std::string_view text, const std::string& unit);

/// Explicit config file locations; an absent path keeps the current value.
struct ConfigFiles {
  std::optional<std::filesystem::path> implicit_edges;
  std::optional<std::filesystem::path> collection_sinks;
  std::optional<std::filesystem::path> greylist;
};

/// File names picked up automatically from a corpus directory.
inline constexpr std::string_view kImplicitEdgesFile = "implicit_edges.txt";
inline constexpr std::string_view kCollectionSinksFile = "collection_sinks.txt";
inline constexpr std::string_view kGreylistFile = "greylist.txt";

/// Starts from `base`, applies the config files found next to `corpus_dir`,
/// then the explicit `files` (which win).
AnalysisConfig load_config(AnalysisConfig base, const std::optional<std::filesystem::path>& corpus_dir,
                           const ConfigFiles& files);

}  // namespace jgrscan
