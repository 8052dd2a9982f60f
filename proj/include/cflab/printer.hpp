#pragma once

#include <string>

#include "cflab/ast.hpp"

namespace cflab {

/// One line per definition. Re-parses to a structurally equal program.
std::string pretty_print(const Program& p);
std::string pretty_print(const Definition& d);
std::string pretty_print(const Expr& e);

}  // namespace cflab
