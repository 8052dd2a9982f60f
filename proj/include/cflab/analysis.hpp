#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cflab/ast.hpp"

namespace cflab {

/// Call-shape class of an expression, ordered X < T < N:
/// X has no calls, T has only tail calls, N has a call in non-tail position.
enum class AlphaClass { X = 0, T = 1, N = 2 };

std::string_view to_string(AlphaClass a);

AlphaClass alpha(const Expr& e);

/// True iff every definition body is classified X or T.
bool is_cftr(const Program& p);

enum class CallSiteKind {
  Tail,           ///< in tail position of its body
  LinearNonTail,  ///< not inside any call argument, but not a tail call
  Nested,         ///< inside an argument of another defined-function call
};

std::string_view to_string(CallSiteKind k);

struct CallSite {
  std::string definition;
  std::string callee;
  /// Dotted route from the body root, e.g. "body.else.arg0".
  std::string path;
  CallSiteKind kind;
};

struct DefinitionShape {
  std::string name;
  AlphaClass alpha;
};

struct CallShapeReport {
  std::vector<DefinitionShape> definitions;
  std::vector<CallSite> sites;
  bool is_cftr = false;
  bool all_calls_linear = false;

  std::size_t count(CallSiteKind k) const;
};

CallShapeReport call_shape_report(const Program& p);

}  // namespace cflab
