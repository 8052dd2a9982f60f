#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "cflab/ast.hpp"
#include "cflab/eval.hpp"
#include "cflab/value.hpp"

namespace cflab::tm {

enum class Symbol : std::uint8_t { Zero = 0, One = 1, Blank = 2 };

char to_char(Symbol s);

struct Transition {
  std::size_t next = 0;
  Symbol write = Symbol::Blank;
  int move = 0;  // -1, 0 or +1
};

/// One-tape machine over {0, 1, B}. States without outgoing transitions
/// halt; every other state must have a transition for all three symbols.
///
/// Promise: on inputs of length n the machine halts within
/// `time_coefficient * n^time_exponent + time_constant` steps.
struct TuringMachine {
  std::vector<std::string> states;
  std::size_t start = 0;
  std::vector<bool> accepting;
  /// Indexed by state * 3 + symbol; absent for halting states.
  std::map<std::size_t, Transition> delta;
  unsigned time_exponent = 1;
  std::uint64_t time_constant = 0;
  std::uint64_t time_coefficient = 1;

  bool halting(std::size_t q) const;
  const Transition& step(std::size_t q, Symbol a) const;
  std::size_t state_index(std::string_view name) const;
  std::uint64_t promised_steps(std::size_t n) const;
};

/// Machine description:
///
///     start q0
///     accept qa [qb ...]
///     time k [c [coeff]]
///     q,a -> q',a',d        (a in {0,1,B}, d in {-1,0,+1})
///
/// `#` or `--` start comments. Throws SyntaxError.
TuringMachine parse_tm(std::string_view text);
std::string format_tm(const TuringMachine& m);

/// Head starts on cell 0; the input occupies cells 1..n, everything else is
/// blank. A left move on cell 0 stays on cell 0.
struct TotalState {
  std::size_t q = 0;
  std::size_t head = 0;
  std::map<std::size_t, Symbol> tape;

  Symbol read(std::size_t i) const;
};

TotalState initial_state(const TuringMachine& m, const BitString& x);

struct TmRun {
  bool accept = false;
  std::uint64_t steps = 0;
};

/// Throws Timeout.
TmRun run_tm(const TuringMachine& m, const BitString& x, const Budget& b = {});

/// Counter geometry of a compiled machine: time and head position are
/// `digits`-tuples of input suffixes (base n+1, digit = suffix length), so
/// they range over 0..(n+1)^digits - 1. Inputs shorter than `table_below`
/// are answered from a table computed at compile time.
struct CounterLayout {
  unsigned digits = 0;
  std::size_t table_below = 1;
};

CounterLayout counter_layout(const TuringMachine& m);

/// Emits a cons-free program with function families for the state, head
/// position and tape contents at each time, run up to the top of the
/// counter range. Throws CompileError.
Program compile_tm(const TuringMachine& m);

/// Generated function names, exposed for tests.
std::string state_fn(const TuringMachine& m, std::size_t q);
std::string symbol_fn(Symbol a);
std::string position_fn(unsigned digit);
std::string decrement_fn(unsigned digit);
std::string increment_fn(unsigned digit);
inline constexpr std::string_view kCounterEqualFn = "eqc";

}  // namespace cflab::tm
