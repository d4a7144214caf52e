// include/jgrscan/parser.hpp
#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "jgrscan/ir.hpp"

namespace jgrscan {

/// One text unit of a corpus, usually a `.jir` file.
struct SourceUnit {
  std::string name;
  std::string text;
};

/// Parses and links every unit into a single ProgramDb.
///
/// Cross references (parents, field/param types, `new` and `scall` classes,
/// stub bindings, JNI registrations and native callees) must resolve to a
/// declaration in some unit or to an `extern`. Throws SyntaxError,
/// LinkError or DuplicateError, each positioned at the offending unit/line.
ProgramDb parse_corpus(std::span<const SourceUnit> sources,
                       AnalysisConfig config = AnalysisConfig::defaults());

/// Reads a `.jir` file, or every `.jir` file of a directory in name order.
std::vector<SourceUnit> load_corpus_units(const std::filesystem::path& path);

/// Canonical text form of the corpus part of `db` (config is not printed).
/// Reparsing the output yields a structurally identical ProgramDb.
std::string print_corpus(const ProgramDb& db);

}  // namespace jgrscan
