#include <doctest.h>

#include <map>
#include <tuple>

#include "cflab/analysis.hpp"
#include "cflab/mcv.hpp"
#include "cflab/parser.hpp"
#include "support/corpus.hpp"
#include "support/random_programs.hpp"

using namespace cflab;
using A = AlphaClass;

namespace {

// Independent reference: the defining cases as a lookup table keyed by
// (node kind, classes of the relevant children).
enum class Kind { Leaf, Base, Call, If, Choose };

A reference_alpha(const Expr& e) {
  static const std::map<std::tuple<Kind, A, A, A>, A> table = [] {
    std::map<std::tuple<Kind, A, A, A>, A> t;
    const A all[] = {A::X, A::T, A::N};
    t[{Kind::Leaf, A::X, A::X, A::X}] = A::X;
    for (A a : all) t[{Kind::Base, a, A::X, A::X}] = a == A::X ? A::X : A::N;
    // For calls the first slot holds the worst argument class.
    for (A a : all) t[{Kind::Call, a, A::X, A::X}] = a == A::X ? A::T : A::N;
    for (A c : all) {
      for (A l : all) {
        for (A r : all) {
          A m = l == A::N || r == A::N ? A::N : l == A::T || r == A::T ? A::T : A::X;
          t[{Kind::If, c, l, r}] = c == A::X ? m : A::N;
          if (c == A::X) t[{Kind::Choose, l, r, A::X}] = m;
        }
      }
    }
    return t;
  }();
  if (const auto* b = e.as<Expr::Base>()) {
    return table.at({Kind::Base, reference_alpha(*b->arg), A::X, A::X});
  }
  if (const auto* c = e.as<Expr::Call>()) {
    A worst = A::X;
    for (const auto& a : c->args) {
      A v = reference_alpha(*a);
      if (v == A::N || (v == A::T && worst == A::X)) worst = v;
    }
    return table.at({Kind::Call, worst, A::X, A::X});
  }
  if (const auto* i = e.as<Expr::If>()) {
    return table.at({Kind::If, reference_alpha(*i->cond), reference_alpha(*i->then_branch),
                     reference_alpha(*i->else_branch)});
  }
  if (const auto* ch = e.as<Expr::Choose>()) {
    return table.at({Kind::Choose, reference_alpha(*ch->left), reference_alpha(*ch->right), A::X});
  }
  return table.at({Kind::Leaf, A::X, A::X, A::X});
}

ExprPtr parse_expr(const std::string& params, const std::string& body,
                   const std::string& extra = "") {
  Program p = parse_program("main " + params + " = " + body + "\n" + extra);
  return p.entry().body;
}

}  // namespace

TEST_CASE("alpha on the parity expressions") {
  Program parity = testing::load_corpus("parity.cf");
  const std::string even = "even z = if (null z) then True else not (even (tail z))";
  CHECK(alpha(*ex::null(ex::var("z"))) == A::X);
  CHECK(alpha(*ex::tail(ex::var("z"))) == A::X);
  CHECK(alpha(*parity.entry().body) == A::T);
  Program q = parse_program("main z = even (tail z)\n" + even);
  CHECK(alpha(*q.entry().body) == A::T);
  Program r = parse_program("main z = not (even (tail z))\n" + even);
  CHECK(alpha(*r.entry().body) == A::N);
  CHECK(alpha(*parity.definition(1).body) == A::N);
}

TEST_CASE("alpha edge cases") {
  CHECK(alpha(*ex::var("v")) == A::X);
  CHECK(alpha(*ex::nil()) == A::X);
  const std::string f = "f y = y";
  CHECK(alpha(*parse_expr("x", "if f x then x else x", f)) == A::N);
  CHECK(alpha(*parse_expr("x", "if null x then f x else x", f)) == A::T);
  CHECK(alpha(*parse_expr("x", "f (f x)", f)) == A::N);
  CHECK(alpha(*parse_expr("x", "head (f x)", f)) == A::N);
  CHECK(alpha(*ex::choose(ex::t(), ex::call("g", {ex::var("x")}))) == A::T);
  CHECK(alpha(*ex::choose(ex::t(), ex::f())) == A::X);
}

TEST_CASE("is_cftr") {
  CHECK_FALSE(is_cftr(testing::load_corpus("parity.cf")));
  CHECK(is_cftr(testing::load_corpus("parity2.cf")));
  CHECK(is_cftr(parse_program("main x = True")));
  CHECK(is_cftr(testing::load_corpus("pal.cf")));
  CHECK_FALSE(is_cftr(testing::load_corpus("q.cf")));
  CHECK_FALSE(is_cftr(mcv::mcv_cf_program()));
}

TEST_CASE("call shape report for parity") {
  CallShapeReport r = call_shape_report(testing::load_corpus("parity.cf"));
  REQUIRE(r.sites.size() == 2);
  CHECK(r.sites[0].definition == "entry");
  CHECK(r.sites[0].callee == "even");
  CHECK(r.sites[0].kind == CallSiteKind::Tail);
  CHECK(r.sites[1].definition == "even");
  CHECK(r.sites[1].kind == CallSiteKind::LinearNonTail);
  CHECK(r.sites[1].path == "body.else.arg");
  CHECK(r.all_calls_linear);
  CHECK_FALSE(r.is_cftr);
  REQUIRE(r.definitions.size() == 2);
  CHECK(r.definitions[0].alpha == A::T);
  CHECK(r.definitions[1].alpha == A::N);
}

TEST_CASE("nested call sites") {
  CallShapeReport r = call_shape_report(parse_program("main x = f (f x)\nf y = y"));
  REQUIRE(r.sites.size() == 2);
  CHECK(r.sites[0].kind == CallSiteKind::Tail);
  CHECK(r.sites[1].kind == CallSiteKind::Nested);
  CHECK(r.sites[1].path == "body.arg0");
  CHECK_FALSE(r.all_calls_linear);
}

TEST_CASE("the MCV decider has nested sites inside if tests") {
  CallShapeReport r = call_shape_report(mcv::mcv_cf_program());
  CHECK_FALSE(r.is_cftr);
  CHECK(r.count(CallSiteKind::Nested) > 0);
  bool nested_in_test = false;
  for (const auto& s : r.sites) {
    if (s.kind == CallSiteKind::Nested && s.path.find(".cond") != std::string::npos) {
      nested_in_test = true;
    }
  }
  CHECK(nested_in_test);
}

TEST_CASE("alpha agrees with the reference table on random expressions") {
  testing::GenOptions opts;
  opts.allow_choose = true;
  testing::ProgramGenerator gen(7, opts);
  int counts[3] = {0, 0, 0};
  for (int i = 0; i < 1000; ++i) {
    ExprPtr e = gen.expression(5);
    A want = reference_alpha(*e);
    REQUIRE(alpha(*e) == want);
    ++counts[static_cast<int>(want)];
  }
  // The sample exercises every class.
  CHECK(counts[0] > 0);
  CHECK(counts[1] > 0);
  CHECK(counts[2] > 0);
}

TEST_CASE("report and classification are consistent on random programs") {
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    testing::ProgramGenerator gen(seed);
    Program p = gen.program();
    CallShapeReport r = call_shape_report(p);
    CHECK(r.is_cftr == is_cftr(p));
    bool only_tail = r.count(CallSiteKind::Tail) == r.sites.size();
    if (only_tail) CHECK(r.is_cftr);
    if (r.is_cftr) {
      CHECK(r.count(CallSiteKind::LinearNonTail) == 0);
      CHECK(r.count(CallSiteKind::Nested) == 0);
    }
    CHECK(r.all_calls_linear == (r.count(CallSiteKind::Nested) == 0));
  }
}
