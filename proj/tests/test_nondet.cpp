#include <doctest.h>

#include "cflab/errors.hpp"
#include "cflab/mcv.hpp"
#include "cflab/nondet.hpp"
#include "cflab/parser.hpp"
#include "cflab/thread.hpp"
#include "support/corpus.hpp"
#include "support/random_programs.hpp"

using namespace cflab;

namespace {

Program ncf(const std::string& text) {
  ProgramOptions po;
  po.allow_choose = true;
  return parse_program(text, po);
}

BitString bits(const char* s) { return BitString::from_compact(s); }

std::size_t ones(const BitString& x) {
  std::size_t k = 0;
  for (std::size_t i = 0; i < x.size(); ++i) k += x[i] ? 1 : 0;
  return k;
}

}  // namespace

TEST_CASE("search on trivial choices") {
  CHECK(ncf_decide_search(ncf("main x = choose True False"), BitString{}));
  CHECK_FALSE(ncf_decide_search(ncf("main x = choose False False"), BitString{}));
  SearchStats s = ncf_search(ncf("main x = choose False True"), BitString{});
  CHECK(s.accepted);
  CHECK(s.branches == 2);
  SearchStats none = ncf_search(ncf("main x = choose (choose False x) False"), BitString{});
  CHECK_FALSE(none.accepted);
  CHECK(none.branches == 3);
}

TEST_CASE("saturation on trivial choices") {
  CHECK(ncf_decide_saturate(ncf("main x = choose True False"), BitString{}));
  CHECK_FALSE(ncf_decide_saturate(ncf("main x = choose False False"), BitString{}));
}

TEST_CASE("saturation sees past a divergent branch") {
  Program p = ncf("main x = f x\nf y = choose (f y) True");
  CHECK(ncf_decide_saturate(p, bits("1")));
  Budget small{10000};
  CHECK_THROWS_AS(ncf_decide_search(p, bits("1"), small), Timeout);
  Program q = ncf("main x = f x\nf y = choose True (f y)");
  CHECK(ncf_decide_search(q, bits("1"), small));
}

TEST_CASE("a program without derivations accepts nothing") {
  Program p = parse_program("main x = f x\nf y = f y");
  SaturationStats s = ncf_saturate(p, bits("1"));
  CHECK_FALSE(s.accepted);
  CHECK(s.triples == 0);
  CHECK(s.configs == 2);
}

TEST_CASE("stuck branches fail") {
  Program p = ncf("main x = choose (head []) True");
  CHECK(ncf_decide_search(p, BitString{}));
  CHECK(ncf_decide_saturate(p, BitString{}));
  Program q = ncf("main x = if choose (head x) True then x else True");
  CHECK_FALSE(ncf_decide_search(q, BitString{}));
  CHECK_FALSE(ncf_decide_saturate(q, BitString{}));
}

TEST_CASE("NCF corpus programs") {
  Program one = testing::load_corpus("ncf_has_one.cf", true);
  Program two = testing::load_corpus("ncf_two_ones.cf", true);
  for (std::size_t n = 0; n <= 6; ++n) {
    for (std::uint64_t w = 0; w < (std::uint64_t{1} << n); ++w) {
      BitString x = BitString::from_word(w, n);
      CHECK(ncf_decide_search(one, x) == (ones(x) >= 1));
      CHECK(ncf_decide_saturate(one, x) == (ones(x) >= 1));
      CHECK(ncf_decide_search(two, x) == (ones(x) >= 2));
      CHECK(ncf_decide_saturate(two, x) == (ones(x) >= 2));
    }
  }
}

TEST_CASE("saturation statistics") {
  Program p = testing::load_corpus("parity2.cf");
  SaturationStats s = ncf_saturate(p, bits("101"));
  CHECK_FALSE(s.accepted);
  // entry plus f at offsets 0..3 with alternating accumulators
  CHECK(s.configs == 5);
  CHECK(s.triples == 5);
  CHECK(s.rounds >= 1);
  CHECK(s.body_evaluations >= s.configs);
  CHECK(s.triples <= reach_bound(p, 3) * value_space_size(3));
}

TEST_CASE("deciders agree with each other and with the tree engine") {
  std::size_t accepted = 0, rejected = 0;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    testing::GenOptions opts;
    opts.allow_choose = true;
    opts.max_depth = 3;
    testing::ProgramGenerator gen(1000 + seed, opts);
    Program p = gen.program();
    BitString x = gen.input(4);
    bool sat = ncf_decide_saturate(p, x);
    bool search = ncf_decide_search(p, x);
    REQUIRE_MESSAGE(sat == search, "seed " << seed);
    (sat ? accepted : rejected)++;
  }
  CHECK(accepted > 25);
  CHECK(rejected > 25);
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    testing::ProgramGenerator gen(seed);
    Program p = gen.program();
    BitString x = gen.input(5);
    bool truth;
    try {
      truth = eval_tree(p, x).stats.result == kTrue;
    } catch (const Stuck&) {
      truth = false;
    }
    CHECK(ncf_decide_saturate(p, x) == truth);
    CHECK(ncf_decide_search(p, x) == truth);
  }
}

TEST_CASE("adding a choice never loses acceptance") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    testing::GenOptions opts;
    opts.allow_choose = true;
    opts.max_depth = 3;
    testing::ProgramGenerator gen(5000 + seed, opts);
    auto defs = gen.definitions();
    BitString x = gen.input(4);
    ProgramOptions po;
    po.allow_choose = true;
    bool before = ncf_decide_saturate(Program::validate(defs, po), x);
    auto widened = defs;
    std::size_t i = seed % widened.size();
    widened[i].body = ex::choose(widened[i].body, gen.expression(0));
    // the new leaf may name x1 only if the definition has parameters
    if (widened[i].params.empty()) widened[i].body = ex::choose(defs[i].body, ex::t());
    bool after = ncf_decide_saturate(Program::validate(widened, po), x);
    if (before) CHECK(after);
  }
}

TEST_CASE("confirmation replay") {
  ConfirmStats t = confirm_log2(parse_program("main x = True"), BitString{});
  CHECK(t.max_confirm_frames == 1);
  CHECK(t.tree_size == 2);
  CHECK(t.bound_ok);

  Program parity = testing::load_corpus("parity.cf");
  ConfirmStats p = confirm_log2(parity, BitString::from_word(0xdeadbeef, 32));
  CHECK(p.result == kTrue);
  CHECK(p.tree_size == 7 + 7 * 32);
  CHECK(p.frame_bound() == 8 + 1);
  CHECK(p.bound_ok);

  BitString sample = mcv::encode_mcv(mcv::sample_circuit()).bits;
  ConfirmStats m = confirm_log2(mcv::mcv_cf_program(), sample);
  CHECK(m.result == kTrue);
  CHECK(m.bound_ok);
  CHECK(m.max_confirm_frames <= m.frame_bound());
}

TEST_CASE("frame bound arithmetic") {
  ConfirmStats s;
  s.tree_size = 1;
  CHECK(s.frame_bound() == 2);
  s.tree_size = 2;
  CHECK(s.frame_bound() == 3);
  s.tree_size = 3;
  CHECK(s.frame_bound() == 3);
  s.tree_size = 4;
  CHECK(s.frame_bound() == 4);
  s.tree_size = 7;
  CHECK(s.frame_bound() == 4);
}

TEST_CASE("a corrupted oracle tree is caught") {
  Program p = testing::load_corpus("parity.cf");
  BitString x = bits("10");
  TreeRun run = eval_tree(p, x);
  CHECK_NOTHROW(confirm_tree(p, *run.tree, x));
  CompNode bad = *run.tree;
  bad.value = kFalse;
  CHECK_THROWS_AS(confirm_tree(p, bad, x), OracleMismatch);
  CompNode bad2 = *run.tree;
  bad2.children[0].children[1].value = Value::suffix(0);
  CHECK_THROWS_AS(confirm_tree(p, bad2, x), OracleMismatch);
}

TEST_CASE("confirmation respects the bound on random programs") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    testing::ProgramGenerator gen(seed);
    Program p = gen.program();
    BitString x = gen.input(6);
    try {
      ConfirmStats s = confirm_log2(p, x);
      CHECK(s.bound_ok);
    } catch (const Stuck&) {
    }
  }
}
