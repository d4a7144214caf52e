// include/jgrscan/diagnostic.hpp
#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace jgrscan {

enum class DiagCode {
  DuplicateJniBinding,
  JniMethodMissing,
  JniMethodNotNative,
  UseBeforeDef,
  ArityMismatch,
  InheritanceCycle,
  BadParentKind,
  UnresolvedAbstractMethod,
  StubTargetNotClass,
  UnresolvedType,
  NativeServiceSkipped,
  DanglingEdge,
  UnresolvedCallback,
  ServiceNameNotLiteral,
};

std::string_view to_string(DiagCode code);

struct Diagnostic {
  DiagCode code;
  std::string message;
  std::string unit;
  int line = 0;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;

  /// `unit:line: code: message`
  std::string format() const;
};

using Diagnostics = std::vector<Diagnostic>;

}  // namespace jgrscan
