// tests/support/fixtures.hpp
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "jgrscan/ir.hpp"
#include "jgrscan/parser.hpp"

namespace jgrscan::testing {

std::filesystem::path corpus_dir();
std::filesystem::path fixture_dir();

/// Contents of one fixture file.
std::string read_fixture(const std::string& name);

/// Parses the named fixture files together, with the default config.
ProgramDb load_fixtures(const std::vector<std::string>& names);

/// The bundled mini corpus with its directory config applied.
ProgramDb load_mini_corpus();

/// Parses a single in-memory unit.
ProgramDb parse_text(const std::string& text, const std::string& unit = "inline.jir");

/// Self-contained unit groups: each standalone fixture, the audio pair and
/// the whole mini corpus.
std::vector<std::vector<SourceUnit>> round_trip_groups();

}  // namespace jgrscan::testing
