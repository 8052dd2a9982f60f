#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cflab {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SourcePos {
  std::size_t line = 1;
  std::size_t column = 1;
};

class SyntaxError : public Error {
 public:
  SyntaxError(SourcePos pos, const std::string& message);
  SourcePos position() const { return pos_; }

 private:
  SourcePos pos_;
};

enum class ValidationKind {
  EmptyProgram,
  DuplicateDef,
  DuplicateParam,
  UnboundVar,
  UnknownFunction,
  ArityMismatch,
  EntryArity,
  ChooseNotEnabled,
};

std::string_view to_string(ValidationKind kind);

class ValidationError : public Error {
 public:
  ValidationError(ValidationKind kind, const std::string& message);
  ValidationKind kind() const { return kind_; }

 private:
  ValidationKind kind_;
};

/// Raised when a run would take its (max_steps + 1)-th step.
class Timeout : public Error {
 public:
  explicit Timeout(std::uint64_t max_steps);
  std::uint64_t max_steps() const { return max_steps_; }

 private:
  std::uint64_t max_steps_;
};

/// A judgment no inference rule applies to, e.g. `head []`.
class Stuck : public Error {
 public:
  using Error::Error;
};

class ReachBoundExceeded : public Error {
 public:
  using Error::Error;
};

class OracleMismatch : public Error {
 public:
  using Error::Error;
};

class MalformedCircuit : public Error {
 public:
  using Error::Error;
};

class MalformedEncoding : public Error {
 public:
  MalformedEncoding(std::size_t position, const std::string& reason);
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class CompileError : public Error {
 public:
  using Error::Error;
};

}  // namespace cflab
