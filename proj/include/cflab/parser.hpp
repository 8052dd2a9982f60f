#pragma once

#include <string_view>

#include "cflab/ast.hpp"
#include "cflab/value.hpp"

namespace cflab {

/// Parses and validates program text.
///
/// One definition `f x1 ... xm = e` per logical line. A body may continue on
/// following lines as long as those lines contain no `=`. `--` starts a
/// comment. Application is juxtaposition and binds tighter than
/// if/then/else; base functions and `choose` take parenthesized or atomic
/// arguments.
///
/// Throws SyntaxError or ValidationError.
Program parse_program(std::string_view text, ProgramOptions options = {});

/// Accepts "1011", "[1,0,1,1]", "[]" or "" (surrounding whitespace ignored).
BitString parse_input(std::string_view text);

}  // namespace cflab
