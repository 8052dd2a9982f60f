#include "cflab/mcv.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <sstream>
#include <unordered_set>

#include "cflab/errors.hpp"
#include "cflab/parser.hpp"

namespace cflab::mcv {

StraightLineProgram from_execution_order(std::vector<Instruction> executed) {
  StraightLineProgram c;
  c.instructions.assign(executed.rbegin(), executed.rend());
  std::uint32_t top = 1;
  for (const auto& ins : c.instructions) top = std::max({top, ins.lhs, ins.arg1, ins.arg2});
  c.num_vars = top + 1;
  return c;
}

void validate(const StraightLineProgram& c) {
  if (c.instructions.empty()) throw MalformedCircuit("circuit has no instructions");
  std::unordered_set<std::uint32_t> defined{0, 1};
  // Walk in execution order: every argument must already be defined.
  for (auto it = c.instructions.rbegin(); it != c.instructions.rend(); ++it) {
    const Instruction& ins = *it;
    for (std::uint32_t v : {ins.lhs, ins.arg1, ins.arg2}) {
      if (v >= c.num_vars) {
        throw MalformedCircuit("x" + std::to_string(v) + " exceeds the variable count " +
                               std::to_string(c.num_vars));
      }
    }
    for (std::uint32_t a : {ins.arg1, ins.arg2}) {
      if (!defined.contains(a)) {
        throw MalformedCircuit("x" + std::to_string(ins.lhs) + " reads x" + std::to_string(a) +
                               " before it is assigned");
      }
    }
    if (ins.lhs < 2) throw MalformedCircuit("x0 and x1 are constants");
    if (!defined.insert(ins.lhs).second) {
      throw MalformedCircuit("x" + std::to_string(ins.lhs) + " assigned twice");
    }
  }
}

bool eval_circuit(const StraightLineProgram& c) {
  validate(c);
  std::vector<bool> val(c.num_vars, false);
  val[1] = true;
  for (auto it = c.instructions.rbegin(); it != c.instructions.rend(); ++it) {
    bool a = val[it->arg1], b = val[it->arg2];
    val[it->lhs] = it->op == GateOp::And ? (a && b) : (a || b);
  }
  return val[c.instructions.front().lhs];
}

std::size_t block_length(std::uint32_t num_vars) {
  if (num_vars <= 1) return 0;
  return static_cast<std::size_t>(std::bit_width(num_vars - 1));
}

McvEncoding encode_mcv(const StraightLineProgram& c) {
  validate(c);
  McvEncoding enc;
  enc.block_len = block_length(c.num_vars);
  for (std::size_t i = 0; i < enc.block_len; ++i) enc.bits.push_back(true);
  enc.bits.push_back(false);
  for (const auto& ins : c.instructions) {
    enc.bits.append(BitString::from_word(ins.lhs, enc.block_len));
    enc.bits.push_back(ins.op == GateOp::And);
    enc.bits.append(BitString::from_word(ins.arg1, enc.block_len));
    enc.bits.append(BitString::from_word(ins.arg2, enc.block_len));
  }
  return enc;
}

StraightLineProgram decode_mcv(const BitString& bits) {
  std::size_t pos = 0;
  while (pos < bits.size() && bits[pos]) ++pos;
  if (pos == bits.size()) throw MalformedEncoding(pos, "unterminated unary header");
  const std::size_t b = pos++;
  if (b == 0) throw MalformedEncoding(0, "zero block length");
  if (b > 31) throw MalformedEncoding(0, "block length too large");
  const std::size_t record = 3 * b + 1;
  if (pos == bits.size()) throw MalformedEncoding(pos, "no instructions");
  if ((bits.size() - pos) % record != 0) {
    throw MalformedEncoding(bits.size() - (bits.size() - pos) % record, "truncated instruction");
  }
  auto index = [&](std::size_t at) {
    std::uint32_t v = 0;
    for (std::size_t i = 0; i < b; ++i) v = (v << 1) | (bits[at + i] ? 1u : 0u);
    return v;
  };
  StraightLineProgram c;
  std::uint32_t top = 1;
  for (; pos < bits.size(); pos += record) {
    Instruction ins;
    ins.lhs = index(pos);
    ins.op = bits[pos + b] ? GateOp::And : GateOp::Or;
    ins.arg1 = index(pos + b + 1);
    ins.arg2 = index(pos + 2 * b + 1);
    top = std::max({top, ins.lhs, ins.arg1, ins.arg2});
    c.instructions.push_back(ins);
  }
  c.num_vars = top + 1;
  if (block_length(c.num_vars) != b) {
    throw MalformedEncoding(0, "block length " + std::to_string(b) + " is not minimal for " +
                                   std::to_string(c.num_vars) + " variables");
  }
  try {
    validate(c);
  } catch (const MalformedCircuit& e) {
    throw MalformedEncoding(0, e.what());
  }
  return c;
}

namespace {

// Every function carries the whole input `x` as first argument: its leading
// run of ones counts off one index block.
constexpr std::string_view kSource = R"(-- value of the output of the instruction at s
main x = mcv x (tail (skip x x))
skip h p = if head h then skip (tail h) (tail p) else p
mcv x s = if head (skip x s)
  then (if vv x (tail (skip x s)) (next x s) then vv x (arg2 x s) (next x s) else False)
  else (if vv x (tail (skip x s)) (next x s) then True else vv x (arg2 x s) (next x s))
arg2 x s = skip x (tail (skip x s))
next x s = skip x (arg2 x s)
-- value of the variable named at v, looked up from instruction s onwards
vv x v s = if iszero x v then False
  else if isone x v then True
  else if null s then False
  else if eqv x v s then mcv x s
  else vv x v (next x s)
iszero h v = if head h then (if head v then False else iszero (tail h) (tail v)) else True
isone h v = if head (tail h) then (if head v then False else isone (tail h) (tail v)) else head v
eqv h a c = if head h then (if (if head a then head c else not (head c)) then eqv (tail h) (tail a) (tail c) else False) else True
)";

}  // namespace

std::string_view mcv_cf_source() { return kSource; }

const Program& mcv_cf_program() {
  static const Program p = parse_program(kSource);
  return p;
}

StraightLineProgram sample_circuit() {
  return from_execution_order({
      {2, GateOp::Or, 1, 0},
      {3, GateOp::And, 2, 0},
      {4, GateOp::Or, 3, 2},
      {5, GateOp::Or, 4, 3},
  });
}

StraightLineProgram random_circuit(std::mt19937_64& rng, std::uint32_t num_vars) {
  if (num_vars < 3) throw MalformedCircuit("a circuit needs at least three variables");
  std::vector<Instruction> exec;
  std::bernoulli_distribution coin(0.5);
  for (std::uint32_t v = 2; v < num_vars; ++v) {
    std::uniform_int_distribution<std::uint32_t> pick(0, v - 1);
    Instruction ins;
    ins.lhs = v;
    ins.op = coin(rng) ? GateOp::And : GateOp::Or;
    ins.arg1 = pick(rng);
    ins.arg2 = pick(rng);
    exec.push_back(ins);
  }
  return from_execution_order(std::move(exec));
}

namespace {

std::uint32_t parse_var(std::string_view tok, std::size_t line) {
  auto fail = [&]() -> std::uint32_t {
    throw MalformedCircuit("line " + std::to_string(line) + ": expected a variable, got '" +
                           std::string(tok) + "'");
  };
  if (tok.size() < 2 || (tok[0] != 'x' && tok[0] != 'X')) return fail();
  std::uint32_t v = 0;
  auto [ptr, ec] = std::from_chars(tok.data() + 1, tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) return fail();
  return v;
}

}  // namespace

StraightLineProgram parse_circuit(std::string_view text) {
  std::vector<Instruction> exec;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    for (std::string_view marker : {"--", "#"}) {
      if (auto at = line.find(marker); at != std::string_view::npos) line = line.substr(0, at);
    }
    std::istringstream words{std::string(line)};
    std::vector<std::string> tok;
    for (std::string w; words >> w;) tok.push_back(w);
    if (tok.empty()) continue;
    if (tok.size() != 5 || tok[1] != ":=") {
      throw MalformedCircuit("line " + std::to_string(line_no) +
                             ": expected 'xL := xA OP xB'");
    }
    Instruction ins;
    ins.lhs = parse_var(tok[0], line_no);
    ins.arg1 = parse_var(tok[2], line_no);
    ins.arg2 = parse_var(tok[4], line_no);
    if (tok[3] == "OR" || tok[3] == "or") {
      ins.op = GateOp::Or;
    } else if (tok[3] == "AND" || tok[3] == "and") {
      ins.op = GateOp::And;
    } else {
      throw MalformedCircuit("line " + std::to_string(line_no) + ": unknown gate '" + tok[3] + "'");
    }
    exec.push_back(ins);
  }
  StraightLineProgram c = from_execution_order(std::move(exec));
  validate(c);
  return c;
}

std::string format_circuit(const StraightLineProgram& c) {
  std::string out;
  for (auto it = c.instructions.rbegin(); it != c.instructions.rend(); ++it) {
    out += "x" + std::to_string(it->lhs) + " := x" + std::to_string(it->arg1) +
           (it->op == GateOp::And ? " AND " : " OR ") + "x" + std::to_string(it->arg2) + "\n";
  }
  return out;
}

}  // namespace cflab::mcv
