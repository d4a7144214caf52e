// tests/support/fixtures.cpp
#include "fixtures.hpp"

#include "jgrscan/config.hpp"

namespace jgrscan::testing {

std::filesystem::path corpus_dir() { return JGRSCAN_CORPUS_DIR; }
std::filesystem::path fixture_dir() { return JGRSCAN_FIXTURE_DIR; }

std::string read_fixture(const std::string& name) {
  return load_corpus_units(fixture_dir() / name).at(0).text;
}

ProgramDb load_fixtures(const std::vector<std::string>& names) {
  std::vector<SourceUnit> units;
  for (const auto& n : names) units.push_back({n, read_fixture(n)});
  return parse_corpus(units);
}

ProgramDb load_mini_corpus() {
  auto dir = corpus_dir() / "mini";
  return parse_corpus(load_corpus_units(dir),
                      load_config(AnalysisConfig::defaults(), dir, ConfigFiles{}));
}

ProgramDb parse_text(const std::string& text, const std::string& unit) {
  SourceUnit u{unit, text};
  return parse_corpus(std::span<const SourceUnit>(&u, 1));
}

std::vector<std::vector<SourceUnit>> round_trip_groups() {
  std::vector<std::vector<SourceUnit>> out;
  std::vector<SourceUnit> audio;
  for (auto& u : load_corpus_units(fixture_dir())) {
    if (u.name.starts_with("audio")) {
      audio.push_back(std::move(u));
    } else {
      out.push_back({std::move(u)});
    }
  }
  out.push_back(std::move(audio));
  out.push_back(load_corpus_units(corpus_dir() / "mini"));
  return out;
}

}  // namespace jgrscan::testing
