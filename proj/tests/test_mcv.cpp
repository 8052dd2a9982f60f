#include <doctest.h>

#include "cflab/errors.hpp"
#include "cflab/eval.hpp"
#include "cflab/mcv.hpp"
#include "support/corpus.hpp"

using namespace cflab;
using namespace cflab::mcv;

namespace {

const char* const kSampleBits = "1110" "1010100011" "1000011010" "0111010000" "0100001000";

}  // namespace

TEST_CASE("sample circuit") {
  StraightLineProgram c = sample_circuit();
  REQUIRE(c.instructions.size() == 4);
  CHECK(c.instructions.front() == Instruction{5, GateOp::Or, 4, 3});
  CHECK(c.instructions.back() == Instruction{2, GateOp::Or, 1, 0});
  CHECK(c.num_vars == 6);
  CHECK(eval_circuit(c));
  CHECK(parse_circuit(testing::read_corpus("sample.circ")) == c);
}

TEST_CASE("single gates") {
  CHECK(eval_circuit(from_execution_order({{2, GateOp::Or, 1, 0}})));
  CHECK_FALSE(eval_circuit(from_execution_order({{2, GateOp::And, 1, 0}})));
  CHECK(eval_circuit(from_execution_order({{2, GateOp::And, 1, 1}})));
}

TEST_CASE("malformed circuits") {
  CHECK_THROWS_AS(validate(StraightLineProgram{}), MalformedCircuit);
  CHECK_THROWS_AS(validate(from_execution_order({{2, GateOp::Or, 3, 0}, {3, GateOp::Or, 1, 0}})),
                  MalformedCircuit);
  CHECK_THROWS_AS(validate(from_execution_order({{2, GateOp::Or, 1, 0}, {2, GateOp::Or, 1, 0}})),
                  MalformedCircuit);
  CHECK_THROWS_AS(validate(from_execution_order({{1, GateOp::Or, 1, 0}})), MalformedCircuit);
  StraightLineProgram small = from_execution_order({{2, GateOp::Or, 1, 0}});
  small.num_vars = 2;
  CHECK_THROWS_AS(validate(small), MalformedCircuit);
  CHECK_THROWS_AS(parse_circuit("x2 := x1 XOR x0"), MalformedCircuit);
  CHECK_THROWS_AS(parse_circuit("x2 = x1 OR x0"), MalformedCircuit);
  CHECK_THROWS_AS(parse_circuit("y2 := x1 OR x0"), MalformedCircuit);
}

TEST_CASE("encoding of the sample") {
  McvEncoding e = encode_mcv(sample_circuit());
  CHECK(e.block_len == 3);
  CHECK(e.bits.size() == 44);
  CHECK(e.bits.compact() == kSampleBits);
  CHECK(e.bits.list() ==
        "[1,1,1,0,1,0,1,0,1,0,0,0,1,1,1,0,0,0,0,1,1,0,1,0,0,1,1,1,0,1,0,0,0,0,0,1,0,0,0,0,1,0,0,0]");
  CHECK(decode_mcv(BitString::from_compact(kSampleBits)) == sample_circuit());
}

TEST_CASE("encoding length") {
  McvEncoding e = encode_mcv(from_execution_order({{2, GateOp::And, 1, 0}}));
  CHECK(e.block_len == 2);
  CHECK(e.bits.size() == 10);
  CHECK(e.bits.compact() == "110" "1010100");
  CHECK(block_length(3) == 2);
  CHECK(block_length(4) == 2);
  CHECK(block_length(5) == 3);
  CHECK(block_length(8) == 3);
  CHECK(block_length(9) == 4);
}

TEST_CASE("malformed encodings") {
  CHECK_THROWS_AS(decode_mcv(BitString::from_compact("11")), MalformedEncoding);
  CHECK_THROWS_AS(decode_mcv(BitString::from_compact("")), MalformedEncoding);
  CHECK_THROWS_AS(decode_mcv(BitString::from_compact("0")), MalformedEncoding);
  CHECK_THROWS_AS(decode_mcv(BitString::from_compact("110")), MalformedEncoding);
  CHECK_THROWS_AS(decode_mcv(BitString::from_compact("110101010")), MalformedEncoding);
  // block length 3 for three variables is not minimal
  CHECK_THROWS_AS(decode_mcv(BitString::from_compact("1110" "0101001000")), MalformedEncoding);
  // argument defined later
  CHECK_THROWS_AS(decode_mcv(BitString::from_compact("110" "1000011")), MalformedEncoding);
  try {
    decode_mcv(BitString::from_compact("110" "10101"));
    FAIL("no error");
  } catch (const MalformedEncoding& e) {
    CHECK(e.position() == 3);
  }
}

TEST_CASE("round trips on random circuits") {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 200; ++i) {
    std::uint32_t vars = std::uniform_int_distribution<std::uint32_t>(3, 8)(rng);
    StraightLineProgram c = random_circuit(rng, vars);
    McvEncoding e = encode_mcv(c);
    CHECK(e.bits.size() == e.block_len + 1 + c.instructions.size() * (3 * e.block_len + 1));
    StraightLineProgram back = decode_mcv(e.bits);
    REQUIRE(back == c);
    CHECK(encode_mcv(back).bits == e.bits);
    CHECK(parse_circuit(format_circuit(c)) == c);
  }
}

TEST_CASE("bundled decider on the sample") {
  BitString x = encode_mcv(sample_circuit()).bits;
  const Program& p = mcv_cf_program();
  CHECK(eval_tree(p, x).stats.result == kTrue);
  CHECK(eval_stack(p, x, true).result == kTrue);
  CHECK(eval_memo(p, x).result == kTrue);
  OverlapReport r = detect_call_overlap(p, x);
  CHECK(r.overlap);
}

TEST_CASE("bundled decider agrees with direct evaluation") {
  std::mt19937_64 rng(99);
  const Program& p = mcv_cf_program();
  int trues = 0;
  for (int i = 0; i < 100; ++i) {
    std::uint32_t vars = std::uniform_int_distribution<std::uint32_t>(3, 8)(rng);
    StraightLineProgram c = random_circuit(rng, vars);
    BitString x = encode_mcv(c).bits;
    Value want = Value::boolean(eval_circuit(c));
    REQUIRE(eval_memo(p, x).result == want);
    REQUIRE(eval_tree(p, x, {}, false).stats.result == want);
    trues += want == kTrue;
  }
  CHECK(trues > 10);
  CHECK(trues < 90);
}

TEST_CASE("deep reuse makes the tree engine pay") {
  // x_{k+1} := x_k AND x_k; every level doubles the tree.
  const Program& p = mcv_cf_program();
  std::uint64_t prev_tree = 0;
  for (std::uint32_t depth = 2; depth <= 6; ++depth) {
    std::vector<Instruction> exec{{2, GateOp::Or, 1, 0}};
    for (std::uint32_t v = 3; v < depth + 2; ++v) exec.push_back({v, GateOp::And, v - 1, v - 1});
    BitString x = encode_mcv(from_execution_order(exec)).bits;
    std::uint64_t tree = eval_tree(p, x, {}, false).stats.time_steps;
    std::uint64_t memo = eval_memo(p, x).time_steps;
    CHECK(tree > memo);
    if (prev_tree) CHECK(tree > 2 * prev_tree);
    prev_tree = tree;
  }
}
