#include "cflab/tm.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cflab/errors.hpp"

namespace cflab::tm {

char to_char(Symbol s) {
  switch (s) {
    case Symbol::Zero: return '0';
    case Symbol::One: return '1';
    case Symbol::Blank: return 'B';
  }
  return '?';
}

namespace {

constexpr Symbol kSymbols[] = {Symbol::Zero, Symbol::One, Symbol::Blank};

std::size_t key(std::size_t q, Symbol a) { return q * 3 + static_cast<std::size_t>(a); }

}  // namespace

bool TuringMachine::halting(std::size_t q) const { return !delta.contains(key(q, Symbol::Zero)); }

const Transition& TuringMachine::step(std::size_t q, Symbol a) const { return delta.at(key(q, a)); }

std::size_t TuringMachine::state_index(std::string_view name) const {
  auto it = std::find(states.begin(), states.end(), name);
  if (it == states.end()) throw std::out_of_range("unknown state " + std::string(name));
  return static_cast<std::size_t>(it - states.begin());
}

std::uint64_t TuringMachine::promised_steps(std::size_t n) const {
  long double v = static_cast<long double>(time_coefficient) *
                      std::pow(static_cast<long double>(n), time_exponent) +
                  static_cast<long double>(time_constant);
  if (v >= 1.8e19L) return UINT64_MAX;
  return static_cast<std::uint64_t>(v);
}

// ---------------------------------------------------------------------------
// Text format
// ---------------------------------------------------------------------------

namespace {

std::string strip_comment(std::string line) {
  for (std::string_view marker : {"--", "#"}) {
    if (auto at = line.find(marker); at != std::string::npos) line.erase(at);
  }
  return line;
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

Symbol parse_symbol(const std::string& s, SourcePos pos) {
  if (s == "0") return Symbol::Zero;
  if (s == "1") return Symbol::One;
  if (s == "B" || s == "b" || s == "_") return Symbol::Blank;
  throw SyntaxError(pos, "unknown tape symbol '" + s + "'");
}

int parse_move(const std::string& s, SourcePos pos) {
  if (s == "-1" || s == "L") return -1;
  if (s == "0" || s == "S") return 0;
  if (s == "+1" || s == "1" || s == "R") return 1;
  throw SyntaxError(pos, "unknown head move '" + s + "'");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string part; std::getline(in, part, sep);) out.push_back(trim(part));
  return out;
}

}  // namespace

TuringMachine parse_tm(std::string_view text) {
  TuringMachine m;
  std::optional<std::string> start;
  std::vector<std::string> accepting;
  bool have_time = false;
  struct Pending {
    std::string from, to;
    Symbol read, write;
    int move;
    SourcePos pos;
  };
  std::vector<Pending> rules;

  auto intern = [&](const std::string& name) {
    auto it = std::find(m.states.begin(), m.states.end(), name);
    if (it != m.states.end()) return static_cast<std::size_t>(it - m.states.begin());
    m.states.push_back(name);
    return m.states.size() - 1;
  };

  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    SourcePos pos{line_no, 1};
    std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (auto arrow = line.find("->"); arrow != std::string::npos) {
      auto lhs = split(line.substr(0, arrow), ',');
      auto rhs = split(line.substr(arrow + 2), ',');
      if (lhs.size() != 2 || rhs.size() != 3 || lhs[0].empty() || rhs[0].empty()) {
        throw SyntaxError(pos, "expected 'q,a -> q',a',d'");
      }
      rules.push_back({lhs[0], rhs[0], parse_symbol(lhs[1], pos), parse_symbol(rhs[1], pos),
                       parse_move(rhs[2], pos), pos});
      continue;
    }
    std::istringstream words(line);
    std::string head;
    words >> head;
    std::vector<std::string> rest;
    for (std::string w; words >> w;) rest.push_back(w);
    if (head == "start") {
      if (rest.size() != 1) throw SyntaxError(pos, "start takes one state");
      start = rest[0];
    } else if (head == "accept") {
      accepting.insert(accepting.end(), rest.begin(), rest.end());
    } else if (head == "time") {
      if (rest.empty() || rest.size() > 3) throw SyntaxError(pos, "expected 'time k [c [coeff]]'");
      try {
        m.time_exponent = static_cast<unsigned>(std::stoul(rest[0]));
        if (rest.size() > 1) m.time_constant = std::stoull(rest[1]);
        if (rest.size() > 2) m.time_coefficient = std::stoull(rest[2]);
      } catch (const std::exception&) {
        throw SyntaxError(pos, "time bound must be non-negative integers");
      }
      have_time = true;
    } else {
      throw SyntaxError(pos, "unknown directive '" + head + "'");
    }
  }
  if (!start) throw SyntaxError({line_no, 1}, "missing start state");
  if (!have_time) throw SyntaxError({line_no, 1}, "missing time bound");
  m.start = intern(*start);
  for (const auto& r : rules) {
    intern(r.from);
    intern(r.to);
  }
  for (const auto& a : accepting) intern(a);
  m.accepting.assign(m.states.size(), false);
  for (const auto& a : accepting) m.accepting[intern(a)] = true;

  for (const auto& r : rules) {
    std::size_t q = intern(r.from);
    if (!m.delta.emplace(key(q, r.read), Transition{intern(r.to), r.write, r.move}).second) {
      throw SyntaxError(r.pos, "duplicate transition for " + r.from + "," + to_char(r.read));
    }
  }
  for (std::size_t q = 0; q < m.states.size(); ++q) {
    int covered = 0;
    for (Symbol a : kSymbols) covered += m.delta.contains(key(q, a)) ? 1 : 0;
    if (covered != 0 && covered != 3) {
      throw SyntaxError({line_no, 1}, "state " + m.states[q] + " must handle 0, 1 and B");
    }
  }
  return m;
}

std::string format_tm(const TuringMachine& m) {
  std::ostringstream out;
  out << "start " << m.states[m.start] << "\n";
  out << "accept";
  for (std::size_t q = 0; q < m.states.size(); ++q) {
    if (m.accepting[q]) out << ' ' << m.states[q];
  }
  out << "\n";
  out << "time " << m.time_exponent << ' ' << m.time_constant << ' ' << m.time_coefficient << "\n";
  for (const auto& [k, t] : m.delta) {
    std::size_t q = k / 3;
    auto a = static_cast<Symbol>(k % 3);
    out << m.states[q] << ',' << to_char(a) << " -> " << m.states[t.next] << ','
        << to_char(t.write) << ',' << (t.move > 0 ? "+1" : t.move < 0 ? "-1" : "0") << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Direct execution
// ---------------------------------------------------------------------------

Symbol TotalState::read(std::size_t i) const {
  auto it = tape.find(i);
  return it == tape.end() ? Symbol::Blank : it->second;
}

TotalState initial_state(const TuringMachine& m, const BitString& x) {
  TotalState s;
  s.q = m.start;
  for (std::size_t i = 0; i < x.size(); ++i) s.tape[i + 1] = x[i] ? Symbol::One : Symbol::Zero;
  return s;
}

TmRun run_tm(const TuringMachine& m, const BitString& x, const Budget& b) {
  TotalState s = initial_state(m, x);
  TmRun run;
  while (!m.halting(s.q)) {
    if (run.steps >= b.max_steps) throw Timeout(b.max_steps);
    ++run.steps;
    const Transition& t = m.step(s.q, s.read(s.head));
    if (t.write == Symbol::Blank) {
      s.tape.erase(s.head);
    } else {
      s.tape[s.head] = t.write;
    }
    s.q = t.next;
    if (t.move > 0) {
      ++s.head;
    } else if (t.move < 0 && s.head > 0) {
      --s.head;
    }
  }
  run.accept = m.accepting[s.q];
  return run;
}

// ---------------------------------------------------------------------------
// Compilation
// ---------------------------------------------------------------------------

namespace {

constexpr std::size_t kLayoutCheckCap = 4096;
constexpr std::size_t kMaxTable = 12;

}  // namespace

CounterLayout counter_layout(const TuringMachine& m) {
  if (m.time_exponent < 1) throw CompileError("time exponent must be at least 1");
  CounterLayout l;
  l.digits = m.time_exponent + 1;
  // (n+1)^digits - 1 must cover the promised running time.
  std::size_t last_bad = 0;
  for (std::size_t n = 1; n <= kLayoutCheckCap; ++n) {
    long double top = std::pow(static_cast<long double>(n + 1), l.digits) - 1;
    long double need = static_cast<long double>(m.time_coefficient) *
                           std::pow(static_cast<long double>(n), m.time_exponent) +
                       static_cast<long double>(m.time_constant);
    if (top < need) last_bad = n;
  }
  l.table_below = last_bad + 1;
  if (l.table_below > kMaxTable) {
    throw CompileError("time bound needs a table for inputs up to length " +
                       std::to_string(last_bad));
  }
  return l;
}

std::string state_fn(const TuringMachine& m, std::size_t q) {
  const std::string& name = m.states[q];
  bool plain = !name.empty() && std::all_of(name.begin(), name.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
  return plain ? "st_" + name : "st" + std::to_string(q);
}

std::string symbol_fn(Symbol a) { return std::string("sy") + to_char(a); }
std::string position_fn(unsigned digit) { return "pos" + std::to_string(digit); }
std::string decrement_fn(unsigned digit) { return "decd" + std::to_string(digit); }
std::string increment_fn(unsigned digit) { return "incd" + std::to_string(digit); }

namespace {

using namespace cflab::ex;

std::string scan_fn(Symbol a) { return std::string("sc") + to_char(a); }
std::string write_fn(Symbol a) { return std::string("wr") + to_char(a); }

class Compiler {
 public:
  explicit Compiler(const TuringMachine& m) : m_(m), layout_(counter_layout(m)), K_(layout_.digits) {
    // Halted states idle: same state, same symbol, no move.
    for (std::size_t q = 0; q < m_.states.size(); ++q) {
      for (Symbol a : kSymbols) {
        delta_[key(q, a)] = m_.halting(q) ? Transition{q, a, 0} : m_.step(q, a);
      }
    }
    // Names must not collide with the helpers.
    for (std::size_t q = 0; q < m_.states.size(); ++q) {
      for (std::size_t r = 0; r < q; ++r) {
        if (state_fn(m_, q) == state_fn(m_, r)) throw CompileError("state names collide");
      }
    }
  }

  Program compile() {
    std::vector<Definition> defs;
    defs.push_back({"main", {"x"}, table(0, var("x"), BitString{})});
    defs.push_back({"run", {"x"}, run_body()});
    for (std::size_t q = 0; q < m_.states.size(); ++q) defs.push_back(state_def(q));
    for (unsigned j = 0; j < K_; ++j) defs.push_back(position_def(j));
    defs.push_back(move_def("mover", 1));
    defs.push_back(move_def("movel", -1));
    for (Symbol a : kSymbols) {
      defs.push_back(scan_def(a));
      defs.push_back(write_def(a));
      defs.push_back(symbol_def(a));
    }
    for (unsigned j = 0; j < K_; ++j) {
      defs.push_back(increment_def(j));
      defs.push_back(decrement_def(j));
    }
    defs.push_back(eqc_def());
    defs.push_back({"eqs", {"a", "b"},
                    if_(null(var("a")), null(var("b")),
                        if_(null(var("b")), f(), call("eqs", {tail(var("a")), tail(var("b"))})))});
    defs.push_back({"mir", {"c", "d"},
                    if_(null(var("d")), var("c"), call("mir", {tail(var("c")), tail(var("d"))}))});
    return Program::validate(std::move(defs));
  }

 private:
  // Parameter names of a counter.
  std::vector<std::string> names(const std::string& prefix) const {
    std::vector<std::string> out;
    for (unsigned j = 0; j < K_; ++j) out.push_back(prefix + std::to_string(j));
    return out;
  }
  std::vector<ExprPtr> vars(const std::string& prefix) const {
    std::vector<ExprPtr> out;
    for (const auto& s : names(prefix)) out.push_back(var(s));
    return out;
  }
  std::vector<std::string> params(std::initializer_list<std::string> prefixes) const {
    std::vector<std::string> out{"x"};
    for (const auto& p : prefixes) {
      auto n = names(p);
      out.insert(out.end(), n.begin(), n.end());
    }
    return out;
  }
  std::vector<ExprPtr> args(std::vector<ExprPtr> counter) const {
    counter.insert(counter.begin(), var("x"));
    return counter;
  }

  /// All digits below `upto` are zero.
  static ExprPtr lower_null(const std::vector<ExprPtr>& c, unsigned upto) {
    std::vector<ExprPtr> conj;
    for (unsigned l = 0; l < upto; ++l) conj.push_back(null(c[l]));
    return all_of(std::move(conj));
  }
  ExprPtr is_zero(const std::vector<ExprPtr>& c) const { return lower_null(c, K_); }

  /// Digits of c - 1 (c > 0), call-free.
  std::vector<ExprPtr> predecessor(const std::vector<ExprPtr>& c) const {
    std::vector<ExprPtr> out;
    for (unsigned j = 0; j < K_; ++j) {
      ExprPtr borrowed = if_(null(c[j]), var("x"), tail(c[j]));
      out.push_back(j == 0 ? borrowed : if_(lower_null(c, j), borrowed, c[j]));
    }
    return out;
  }

  std::vector<ExprPtr> position_at(const std::vector<ExprPtr>& t) const {
    std::vector<ExprPtr> out;
    for (unsigned j = 0; j < K_; ++j) out.push_back(call(position_fn(j), args(t)));
    return out;
  }

  ExprPtr in_state(std::size_t q, const std::vector<ExprPtr>& t) const {
    return call(state_fn(m_, q), args(t));
  }
  ExprPtr scanning(Symbol a, const std::vector<ExprPtr>& t) const {
    return call(scan_fn(a), args(t));
  }

  /// OR over (q, a) whose transition satisfies `pred` of "in q scanning a at t".
  template <typename Pred>
  ExprPtr any_transition(const std::vector<ExprPtr>& t, Pred pred) const {
    std::vector<ExprPtr> alts;
    for (std::size_t q = 0; q < m_.states.size(); ++q) {
      for (Symbol a : kSymbols) {
        if (pred(delta_.at(key(q, a)))) alts.push_back(and_(in_state(q, t), scanning(a, t)));
      }
    }
    return any_of(std::move(alts));
  }

  Definition state_def(std::size_t q) const {
    auto t = vars("t");
    auto prev = predecessor(t);
    ExprPtr step = any_transition(prev, [q](const Transition& tr) { return tr.next == q; });
    return {state_fn(m_, q), params({"t"}), if_(is_zero(t), boolean(q == m_.start), step)};
  }

  Definition position_def(unsigned j) const {
    auto t = vars("t");
    auto prev = predecessor(t);
    auto p = position_at(prev);
    ExprPtr body = if_(is_zero(t), nil(),
                       if_(call("mover", args(prev)), call(increment_fn(j), args(p)),
                           if_(call("movel", args(prev)), call(decrement_fn(j), args(p)),
                               call(position_fn(j), args(prev)))));
    return {position_fn(j), params({"t"}), body};
  }

  Definition move_def(const std::string& name, int dir) const {
    auto t = vars("t");
    return {name, params({"t"}),
            any_transition(t, [dir](const Transition& tr) { return tr.move == dir; })};
  }

  Definition scan_def(Symbol a) const {
    auto t = vars("t");
    auto call_args = args(t);
    for (auto& d : position_at(t)) call_args.push_back(d);
    return {scan_fn(a), params({"t"}), call(symbol_fn(a), std::move(call_args))};
  }

  Definition write_def(Symbol a) const {
    auto t = vars("t");
    return {write_fn(a), params({"t"}),
            any_transition(t, [a](const Transition& tr) { return tr.write == a; })};
  }

  /// Tape contents before the first step: blank at cell 0, the input on 1..n.
  ExprPtr initial_symbol(Symbol a, const std::vector<ExprPtr>& i) const {
    std::vector<ExprPtr> high;
    for (unsigned j = 1; j < K_; ++j) high.push_back(null(i[j]));
    ExprPtr bit = head(call("mir", {var("x"), tail(i[0])}));
    ExprPtr inside = a == Symbol::Zero ? not_(bit) : a == Symbol::One ? bit : f();
    ExprPtr outside = boolean(a == Symbol::Blank);
    return if_(is_zero(i), outside, if_(all_of(std::move(high)), inside, outside));
  }

  Definition symbol_def(Symbol a) const {
    auto t = vars("t");
    auto i = vars("i");
    auto prev = predecessor(t);
    std::vector<ExprPtr> eq_args = i;
    for (auto& d : position_at(prev)) eq_args.push_back(d);
    std::vector<ExprPtr> older = args(prev);
    older.insert(older.end(), i.begin(), i.end());
    ExprPtr body = if_(is_zero(t), initial_symbol(a, i),
                       if_(call(std::string(kCounterEqualFn), std::move(eq_args)),
                           call(write_fn(a), args(prev)), call(symbol_fn(a), std::move(older))));
    return {symbol_fn(a), params({"t", "i"}), body};
  }

  Definition increment_def(unsigned j) const {
    auto p = vars("p");
    std::vector<ExprPtr> carry;
    for (unsigned l = 0; l < j; ++l) carry.push_back(call("eqs", {p[l], var("x")}));
    ExprPtr bumped = if_(call("eqs", {p[j], var("x")}), nil(),
                         call("mir", {var("x"), tail(call("mir", {var("x"), p[j]}))}));
    return {increment_fn(j), params({"p"}), if_(all_of(std::move(carry)), bumped, p[j])};
  }

  Definition decrement_def(unsigned j) const {
    auto p = vars("p");
    ExprPtr borrowed = if_(null(p[j]), var("x"), tail(p[j]));
    ExprPtr body = if_(is_zero(p), p[j], j == 0 ? borrowed : if_(lower_null(p, j), borrowed, p[j]));
    return {decrement_fn(j), params({"p"}), body};
  }

  Definition eqc_def() const {
    std::vector<std::string> ps = names("a");
    auto b = names("b");
    ps.insert(ps.end(), b.begin(), b.end());
    std::vector<ExprPtr> conj;
    for (unsigned j = 0; j < K_; ++j) {
      conj.push_back(call("eqs", {var("a" + std::to_string(j)), var("b" + std::to_string(j))}));
    }
    return {std::string(kCounterEqualFn), ps, all_of(std::move(conj))};
  }

  ExprPtr run_body() const {
    std::vector<ExprPtr> top(K_, var("x"));
    std::vector<ExprPtr> alts;
    for (std::size_t q = 0; q < m_.states.size(); ++q) {
      if (m_.accepting[q]) alts.push_back(in_state(q, top));
    }
    return any_of(std::move(alts));
  }

  /// Decision tree over inputs shorter than the table bound; `rest` is the
  /// suffix after `prefix`.
  ExprPtr table(std::size_t depth, ExprPtr rest, BitString prefix) const {
    ExprPtr here = boolean(run_tm(m_, prefix).accept);
    ExprPtr longer;
    if (depth + 1 < layout_.table_below) {
      BitString zero = prefix, one = prefix;
      zero.push_back(false);
      one.push_back(true);
      longer = if_(head(rest), table(depth + 1, tail(rest), one),
                   table(depth + 1, tail(rest), zero));
    } else {
      longer = call("run", {var("x")});
    }
    return if_(null(rest), here, longer);
  }

  const TuringMachine& m_;
  CounterLayout layout_;
  unsigned K_;
  std::map<std::size_t, Transition> delta_;
};

}  // namespace

Program compile_tm(const TuringMachine& m) { return Compiler(m).compile(); }

}  // namespace cflab::tm
