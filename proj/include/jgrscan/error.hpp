// include/jgrscan/error.hpp
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace jgrscan {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// An error that carries the corpus unit and line it was detected at.
class PositionedError : public Error {
public:
  PositionedError(std::string kind, std::string unit, int line, int column,
                  const std::string& message);

  const std::string& unit() const { return unit_; }
  int line() const { return line_; }
  int column() const { return column_; }

private:
  std::string unit_;
  int line_;
  int column_;
};

class SyntaxError : public PositionedError {
public:
  SyntaxError(std::string unit, int line, int column, const std::string& message)
      : PositionedError("syntax error", std::move(unit), line, column, message) {}
};

/// A reference to a name that is neither declared in the corpus nor `extern`.
class LinkError : public PositionedError {
public:
  LinkError(std::string name, std::string unit, int line)
      : PositionedError("link error", std::move(unit), line, 0,
                        "unresolved reference '" + name + "'"),
        name_(std::move(name)) {}

  const std::string& name() const { return name_; }

private:
  std::string name_;
};

class DuplicateError : public PositionedError {
public:
  DuplicateError(std::string name, std::string unit, int line)
      : PositionedError("duplicate definition", std::move(unit), line, 0,
                        "'" + name + "' is already defined"),
        name_(std::move(name)) {}

  const std::string& name() const { return name_; }

private:
  std::string name_;
};

class CycleError : public Error {
public:
  explicit CycleError(std::vector<std::string> path);

  const std::vector<std::string>& path() const { return path_; }

private:
  std::vector<std::string> path_;
};

class UnknownFunction : public Error {
public:
  explicit UnknownFunction(const std::string& name)
      : Error("unknown native function '" + name + "'") {}
};

class UnknownFormat : public Error {
public:
  explicit UnknownFormat(const std::string& name)
      : Error("unknown report format '" + name + "'") {}
};

class InvalidAction : public Error {
public:
  using Error::Error;
};

class UnconstructibleParam : public Error {
public:
  UnconstructibleParam(std::string name, std::string type)
      : Error("cannot synthesize parameter '" + name + "' of type '" + type + "'"),
        name_(std::move(name)),
        type_(std::move(type)) {}

  const std::string& name() const { return name_; }
  const std::string& type() const { return type_; }

private:
  std::string name_;
  std::string type_;
};

}  // namespace jgrscan
