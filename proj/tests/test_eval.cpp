#include <doctest.h>

#include <cmath>

#include "cflab/errors.hpp"
#include "cflab/eval.hpp"
#include "cflab/mcv.hpp"
#include "cflab/parser.hpp"
#include "support/corpus.hpp"
#include "support/random_programs.hpp"

using namespace cflab;

namespace {

BitString bits(const char* s) { return BitString::from_compact(s); }

bool even_length(const BitString& x) { return x.size() % 2 == 0; }

/// Outcome of a run as a comparable string: the value, "stuck" or "timeout".
template <typename F>
std::string outcome(F&& run, const BitString& x) {
  try {
    return format_value(run(), x);
  } catch (const Stuck&) {
    return "stuck";
  } catch (const Timeout&) {
    return "timeout";
  } catch (const ReachBoundExceeded&) {
    return "reach";
  }
}

}  // namespace

TEST_CASE("parity values") {
  Program p = testing::load_corpus("parity.cf");
  CHECK(eval_tree(p, bits("101")).stats.result == kFalse);
  TreeRun empty = eval_tree(p, BitString{});
  CHECK(empty.stats.result == kTrue);
  CHECK(empty.stats.time_steps >= 1);
}

TEST_CASE("parity and parity' against the length oracle, every engine") {
  Program p = testing::load_corpus("parity.cf");
  Program p2 = testing::load_corpus("parity2.cf");
  for (std::size_t n = 0; n <= 8; ++n) {
    for (std::uint64_t w = 0; w < (std::uint64_t{1} << n); ++w) {
      BitString x = BitString::from_word(w, n);
      Value want = Value::boolean(even_length(x));
      for (const Program* prog : {&p, &p2}) {
        REQUIRE(eval_tree(*prog, x, {}, false).stats.result == want);
        REQUIRE(eval_stack(*prog, x, false).result == want);
        REQUIRE(eval_stack(*prog, x, true).result == want);
        REQUIRE(eval_memo(*prog, x).result == want);
      }
    }
  }
}

TEST_CASE("time counts every rule instance including the root") {
  CHECK(eval_tree(parse_program("main x = True"), BitString{}).stats.time_steps == 2);
  Program p = testing::load_corpus("parity.cf");
  // Run, entry call, its argument; then 4 nodes at [] and 7 per non-empty level.
  for (std::size_t n = 0; n <= 6; ++n) {
    BitString x = BitString::from_word(0, n);
    CHECK(eval_tree(p, x).stats.time_steps == 7 + 7 * n);
    CHECK(eval_stack(p, x, false).time_steps == 7 + 7 * n);
  }
  TreeRun r = eval_tree(p, BitString{});
  CHECK(r.stats.tree_depth == 5);
  REQUIRE(r.tree.has_value());
  CHECK(r.tree->size == 7);
  CHECK(r.tree->rule == Rule::Run);
  REQUIRE(r.tree->children.size() == 1);
  CHECK(r.tree->children[0].rule == Rule::Call);
}

TEST_CASE("computation tree shape") {
  Program p = parse_program("main x = if null x then head x else tail x");
  TreeRun r = eval_tree(p, bits("10"));
  const CompNode& body = r.tree->children[0];
  CHECK(body.rule == Rule::IfFalse);
  REQUIRE(body.children.size() == 2);
  CHECK(body.children[0].rule == Rule::Null);
  CHECK(body.children[0].value == kFalse);
  CHECK(body.children[1].rule == Rule::Tail);
  CHECK(body.value == Value::suffix(1));
  CHECK(r.tree->size == r.stats.time_steps);
}

TEST_CASE("budget is exact") {
  Program p = testing::load_corpus("parity.cf");
  BitString x = bits("101");
  EvalOptions opts;
  opts.budget.max_steps = 28;
  CHECK(eval_tree(p, x, opts).stats.time_steps == 28);
  CHECK(eval_stack(p, x, true, opts).time_steps == 28);
  opts.budget.max_steps = 27;
  CHECK_THROWS_AS(eval_tree(p, x, opts), Timeout);
  CHECK_THROWS_AS(eval_stack(p, x, false, opts), Timeout);
  CHECK_THROWS_AS(eval_stack(p, x, true, opts), Timeout);
}

TEST_CASE("stuck is distinct from timeout") {
  for (const char* src : {"main x = head []", "main x = tail True", "main x = not x",
                          "main x = if x then True else False", "main x = null False"}) {
    Program p = parse_program(src);
    CHECK_THROWS_AS(eval_tree(p, bits("1")), Stuck);
    CHECK_THROWS_AS(eval_stack(p, bits("1"), true), Stuck);
    CHECK_THROWS_AS(eval_memo(p, bits("1")), Stuck);
  }
  Program loop = parse_program("main x = f x\nf y = f y");
  EvalOptions small;
  small.budget.max_steps = 10000;
  CHECK_THROWS_AS(eval_tree(loop, bits("1"), small), Timeout);
  CHECK_THROWS_AS(eval_stack(loop, bits("1"), false, small), Timeout);
  CHECK_THROWS_AS(eval_stack(loop, bits("1"), true), Timeout);
  CHECK_THROWS_AS(eval_memo(loop, bits("1")), ReachBoundExceeded);
}

TEST_CASE("deterministic engines reject choose") {
  ProgramOptions ncf;
  ncf.allow_choose = true;
  Program p = parse_program("main x = choose True False", ncf);
  CHECK_THROWS_AS(eval_tree(p, BitString{}), std::invalid_argument);
  CHECK_THROWS_AS(eval_stack(p, BitString{}, true), std::invalid_argument);
  CHECK_THROWS_AS(eval_memo(p, BitString{}), std::invalid_argument);
}

TEST_CASE("frame layout") {
  CHECK(value_bits(0) == 2);
  CHECK(value_bits(1) == 2);
  CHECK(value_bits(2) == 3);
  CHECK(value_bits(5) == 3);
  CHECK(value_bits(6) == 4);
  CHECK(value_bits(13) == 4);
  CHECK(value_bits(14) == 5);
  Program p = testing::load_corpus("parity.cf");
  CHECK(frame_slots(p.definition(0)) == 2);
  CHECK(frame_slots(p.definition(1)) == 2);
  Program p2 = testing::load_corpus("parity2.cf");
  CHECK(frame_slots(p2.definition(0)) == 3);
  CHECK(frame_slots(p2.definition(1)) == 4);
  Program three = parse_program("main x = g x (head x) (tail (tail x))\ng a b c = a");
  // arguments held while the third is computed: 2 + tail(tail x) needs 1
  CHECK(frame_slots(three.definition(0)) == 1 + 3);
}

TEST_CASE("stack frames") {
  Program p = testing::load_corpus("parity.cf");
  Program p2 = testing::load_corpus("parity2.cf");
  BitString x8 = bits("10110100");
  CHECK(eval_stack(p, x8, false).max_frames == 10);
  // The entry's tail call reuses the entry frame.
  CHECK(eval_stack(p, x8, true).max_frames == 9);
  for (std::size_t n : {0u, 1u, 5u, 17u, 64u}) {
    BitString x = BitString::from_word(0x5555555555555555ull, std::min<std::size_t>(n, 64));
    RunStats tco = eval_stack(p2, x, true);
    CHECK(tco.max_frames == 1);
    CHECK(tco.max_space_bits == 4 * value_bits(n));
    RunStats plain = eval_stack(p2, x, false);
    CHECK(plain.max_frames == n + 2);
    CHECK(plain.max_space_bits == (3 + 4 * (n + 1)) * value_bits(n));
  }
  BitString x64 = BitString::from_word(0, 64);
  double ratio = static_cast<double>(eval_stack(p2, x64, false).max_space_bits) /
                 static_cast<double>(eval_stack(p2, x64, true).max_space_bits);
  CHECK(ratio >= 16.0);
}

TEST_CASE("memoization") {
  RunStats t = eval_memo(parse_program("main x = True"), bits("1"));
  CHECK(t.cache_entries == 1);
  CHECK(t.cache_hits == 0);
  BitString sample = mcv::encode_mcv(mcv::sample_circuit()).bits;
  RunStats m = eval_memo(mcv::mcv_cf_program(), sample);
  CHECK(m.result == kTrue);
  CHECK(m.cache_hits >= 1);
  Program q = testing::load_corpus("q.cf");
  BitString x12 = BitString::from_word(0xabc, 12);
  RunStats memo = eval_memo(q, x12);
  RunStats tree = eval_tree(q, x12, {}, false).stats;
  CHECK(memo.result == tree.result);
  CHECK(static_cast<double>(tree.time_steps) / static_cast<double>(memo.time_steps) >= 50.0);
  CHECK(memo.cache_entries == 13);
  CHECK(memo.cache_hits == 12);
}

TEST_CASE("program q grows exponentially under the tree engine") {
  Program q = testing::load_corpus("q.cf");
  std::uint64_t prev = 0;
  for (std::size_t n = 1; n <= 14; ++n) {
    std::uint64_t t = eval_tree(q, BitString::from_word(0, n), {}, false).stats.time_steps;
    if (prev) CHECK(static_cast<double>(t) / static_cast<double>(prev) >= 1.8);
    prev = t;
  }
}

TEST_CASE("call overlap") {
  Program q = testing::load_corpus("q.cf");
  OverlapReport r = detect_call_overlap(q, bits("1010"));
  CHECK(r.overlap);
  REQUIRE(r.first_repeated.has_value());
  CHECK(r.first_repeated->function == 0);
  CHECK(r.first_repeated->args == Env{Value::suffix(4)});
  CHECK(r.call_history_length > r.distinct_configs);
  for (const char* s : {"", "1", "0110", "11111111"}) {
    OverlapReport p = detect_call_overlap(testing::load_corpus("parity2.cf"), bits(s));
    CHECK_FALSE(p.overlap);
    CHECK(p.call_history_length == p.distinct_configs);
  }
  CHECK_FALSE(detect_call_overlap(parse_program("main x = True"), BitString{}).overlap);
}

TEST_CASE("call history starts at the entry configuration") {
  EvalOptions opts;
  opts.record_history = true;
  Program p = testing::load_corpus("parity2.cf");
  RunStats s = eval_stack(p, bits("01"), true, opts);
  REQUIRE(s.history.size() == 4);
  CHECK(s.history[0] == Config{0, Env{Value::suffix(0)}});
  CHECK(s.history[1] == Config{1, Env{Value::suffix(0), kTrue}});
  CHECK(s.history[3] == Config{1, Env{Value::suffix(2), kTrue}});
}

TEST_CASE("reach bound") {
  CHECK(reach_bound(parse_program("main x = f x x\nf a b = a"), 5) == 8 + 64);
  CHECK(reach_bound(parse_program("main x = k\nk = True"), 9) == 12 + 1);
  CHECK(reach_bound(testing::load_corpus("parity.cf"), 4) == 14);
  CHECK(reach_bound(testing::load_corpus("parity2.cf"), 0) == 3 + 9);
}

TEST_CASE("apply_function probes helpers") {
  Program p = testing::load_corpus("parity2.cf");
  BitString x = bits("101");
  Value args[] = {Value::suffix(1), kFalse};
  CHECK(apply_function(p, x, "f", args) == kFalse);
  CHECK_THROWS_AS(apply_function(p, x, "nope", args), std::invalid_argument);
}

TEST_CASE("engines agree on random programs") {
  EvalOptions opts;
  opts.check_suffix_lemma = true;
  opts.budget.max_steps = 2'000'000;
  std::size_t valued = 0;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    testing::ProgramGenerator gen(seed);
    Program p = gen.program();
    BitString x = gen.input(6);
    std::uint64_t violations = 0;
    std::string tree = outcome(
        [&] {
          RunStats s = eval_tree(p, x, opts, false).stats;
          violations += s.suffix_violations;
          return s.result;
        },
        x);
    std::string stack = outcome([&] { return eval_stack(p, x, false, opts).result; }, x);
    std::string tco = outcome([&] { return eval_stack(p, x, true, opts).result; }, x);
    std::string memo = outcome(
        [&] {
          RunStats s = eval_memo(p, x, opts);
          violations += s.suffix_violations;
          CHECK(s.distinct_configs <= reach_bound(p, x.size()));
          return s.result;
        },
        x);
    REQUIRE(tree != "timeout");
    CHECK(stack == tree);
    CHECK(tco == tree);
    CHECK(memo == tree);
    CHECK(violations == 0);
    if (tree != "stuck") ++valued;
  }
  // Enough programs produce values for the comparison to mean something.
  CHECK(valued >= 150);
}

TEST_CASE("repeated runs are identical") {
  Program p = testing::load_corpus("pal.cf");
  BitString x = bits("0110110");
  RunStats a = eval_stack(p, x, true), b = eval_stack(p, x, true);
  CHECK(a.time_steps == b.time_steps);
  CHECK(a.max_space_bits == b.max_space_bits);
  CHECK(a.distinct_configs == b.distinct_configs);
  CHECK(a.tree_depth == b.tree_depth);
}

TEST_CASE("palindromes") {
  Program p = testing::load_corpus("pal.cf");
  for (std::size_t n = 0; n <= 7; ++n) {
    for (std::uint64_t w = 0; w < (std::uint64_t{1} << n); ++w) {
      BitString x = BitString::from_word(w, n);
      std::string s = x.compact();
      bool want = std::equal(s.begin(), s.end(), s.rbegin());
      REQUIRE(eval_stack(p, x, true).result == Value::boolean(want));
    }
  }
}
