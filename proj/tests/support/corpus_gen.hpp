// tests/support/corpus_gen.hpp
//
// Grammar-directed generator of small random corpora.
#pragma once

#include <cstdint>
#include <string>

namespace jgrscan::testing {

struct GenLimits {
  int max_methods = 15;
  int max_native_fns = 12;
  int max_classes = 5;
  int max_stmts = 6;
};

/// Text of a self-contained corpus unit. Every generated unit parses and
/// links; validation diagnostics (arity, unimplemented methods) may occur.
std::string generate_corpus(uint64_t seed, const GenLimits& limits = {});

}  // namespace jgrscan::testing
