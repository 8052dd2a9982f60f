#include "cflab/errors.hpp"

namespace cflab {

SyntaxError::SyntaxError(SourcePos pos, const std::string& message)
    : Error(std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": " + message),
      pos_(pos) {}

std::string_view to_string(ValidationKind kind) {
  switch (kind) {
    case ValidationKind::EmptyProgram: return "EmptyProgram";
    case ValidationKind::DuplicateDef: return "DuplicateDef";
    case ValidationKind::DuplicateParam: return "DuplicateParam";
    case ValidationKind::UnboundVar: return "UnboundVar";
    case ValidationKind::UnknownFunction: return "UnknownFunction";
    case ValidationKind::ArityMismatch: return "ArityMismatch";
    case ValidationKind::EntryArity: return "EntryArity";
    case ValidationKind::ChooseNotEnabled: return "ChooseNotEnabled";
  }
  return "?";
}

ValidationError::ValidationError(ValidationKind kind, const std::string& message)
    : Error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

Timeout::Timeout(std::uint64_t max_steps)
    : Error("step budget of " + std::to_string(max_steps) + " exhausted"),
      max_steps_(max_steps) {}

MalformedEncoding::MalformedEncoding(std::size_t position, const std::string& reason)
    : Error("bit " + std::to_string(position) + ": " + reason), position_(position) {}

}  // namespace cflab
