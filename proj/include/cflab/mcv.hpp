#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "cflab/ast.hpp"
#include "cflab/value.hpp"

namespace cflab::mcv {

enum class GateOp { Or, And };

struct Instruction {
  std::uint32_t lhs = 0;
  GateOp op = GateOp::Or;
  std::uint32_t arg1 = 0;
  std::uint32_t arg2 = 0;

  bool operator==(const Instruction&) const = default;
};

/// Monotone straight-line program. x0 is False and x1 is True. Instructions
/// are stored last-executed first, so `instructions.front().lhs` is the
/// output variable.
struct StraightLineProgram {
  std::vector<Instruction> instructions;
  std::uint32_t num_vars = 0;

  bool operator==(const StraightLineProgram&) const = default;
};

/// Builds a program from instructions in execution order.
StraightLineProgram from_execution_order(std::vector<Instruction> executed);

/// Throws MalformedCircuit.
void validate(const StraightLineProgram& c);

/// Forward evaluation with a value table.
bool eval_circuit(const StraightLineProgram& c);

struct McvEncoding {
  BitString bits;
  std::size_t block_len = 0;
};

/// ceil(log2(num_vars))
std::size_t block_length(std::uint32_t num_vars);

/// Unary header (block_len ones, a zero), then per stored instruction:
/// lhs, op bit (OR 0, AND 1), arg1, arg2, each index in block_len bits MSB
/// first.
McvEncoding encode_mcv(const StraightLineProgram& c);
/// Throws MalformedEncoding.
StraightLineProgram decode_mcv(const BitString& bits);

/// The bundled recursive-descent decider for encoded instances.
const Program& mcv_cf_program();
std::string_view mcv_cf_source();

/// x2 := x1 OR x0; x3 := x2 AND x0; x4 := x3 OR x2; x5 := x4 OR x3
StraightLineProgram sample_circuit();

/// Uniform AND/OR, args uniform over already-defined variables.
StraightLineProgram random_circuit(std::mt19937_64& rng, std::uint32_t num_vars);

/// Each line "x5 := x4 OR x3", in execution order; `--` and `#` comments.
/// Throws MalformedCircuit.
StraightLineProgram parse_circuit(std::string_view text);
std::string format_circuit(const StraightLineProgram& c);

}  // namespace cflab::mcv
