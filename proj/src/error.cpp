// src/error.cpp
#include "jgrscan/error.hpp"

namespace jgrscan {

namespace {

std::string positioned_message(const std::string& kind, const std::string& unit, int line,
                               int column, const std::string& message) {
  std::string out = unit.empty() ? std::string("<input>") : unit;
  out += ":" + std::to_string(line);
  if (column > 0) out += ":" + std::to_string(column);
  out += ": " + kind + ": " + message;
  return out;
}

std::string cycle_message(const std::vector<std::string>& path) {
  std::string out = "inheritance cycle: ";
  for (size_t i = 0; i < path.size(); ++i) {
    if (i) out += " -> ";
    out += path[i];
  }
  return out;
}

}  // namespace

PositionedError::PositionedError(std::string kind, std::string unit, int line, int column,
                                 const std::string& message)
    : Error(positioned_message(kind, unit, line, column, message)),
      unit_(std::move(unit)),
      line_(line),
      column_(column) {}

CycleError::CycleError(std::vector<std::string> path)
    : Error(cycle_message(path)), path_(std::move(path)) {}

}  // namespace jgrscan
