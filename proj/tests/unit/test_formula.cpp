#include <doctest.h>

#include <random>

#include "../oracle/oracle.hpp"
#include "helpers.hpp"
#include "j2kit/formula.hpp"

using namespace j2kit;
using test::f1;
using test::f2;

TEST_CASE("parse builds the expected trees") {
  auto ctx = VarContext::standard(2);
  Formula k = parse("[0](p1 -> p2) -> ([0]p1 -> [0]p2)", ctx);
  CHECK(k.kind() == Kind::Implies);
  CHECK(k.lhs() == Formula::box(0, Formula::implies(Formula::var(0), Formula::var(1))));
  CHECK(parse("T", ctx) == Formula::top());
  CHECK(parse("<1>p1", ctx) == Formula::neg(Formula::box(1, Formula::neg(Formula::var(0)))));
  CHECK(parse("p1 -> p2 -> p1", ctx) ==
        Formula::implies(Formula::var(0), Formula::implies(Formula::var(1), Formula::var(0))));
  CHECK(parse("p1 | p2 & p1", ctx) ==
        Formula::disj(Formula::var(0), Formula::conj(Formula::var(1), Formula::var(0))));
}

TEST_CASE("parse errors carry offsets") {
  auto ctx = VarContext::standard(1);
  CHECK_THROWS_AS(parse("p1 &", ctx), ParseError);
  CHECK_THROWS_AS(parse("p2", ctx), UnknownVariable);
  CHECK_THROWS_AS(parse("[2]p1", ctx), ParseError);
  try {
    parse("p1 ) ", ctx);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 3);
  }
}

TEST_CASE("render") {
  auto ctx = VarContext::standard(1);
  CHECK(render(Formula::top(), ctx) == "T");
  CHECK(render(Formula::box(0, Formula::var(0)), ctx) == "[0]p1");
  CHECK(render(Formula::diamond(1, Formula::var(0)), ctx) == "<1>p1");
}

TEST_CASE("render and parse round trip on random formulas") {
  std::mt19937_64 rng(7);
  auto ctx = VarContext::standard(2);
  for (int i = 0; i < 500; ++i) {
    Formula f = oracle::random_formula(rng, 2, 3, 12);
    CHECK(parse(render(f, ctx), ctx) == f);
    CHECK(parse(render(f, ctx, RenderMode::FullyParenthesized), ctx) == f);
  }
}

TEST_CASE("depth") {
  CHECK(f1("p1").depth() == 0);
  CHECK(f2("[0]p1 & [1][1]p2").depth() == 2);
  CHECK(Formula::bot().depth() == 0);
}

TEST_CASE("infer_context orders by numeric suffix") {
  std::vector<std::string> texts{"p10 & p2", "p1"};
  CHECK(infer_context(texts).names() == std::vector<std::string>{"p1", "p2", "p10"});
}

TEST_CASE("apply_subst") {
  Substitution top({Formula::top()});
  CHECK(apply_subst(top, f1("p1 & [0]p1")) == f1("T & [0]T"));
  Formula g = f2("[1](p1 -> <0>p2)");
  CHECK(apply_subst(Substitution::identity(2), g) == g);
  Substitution swap({Formula::var(1), Formula::var(0)});
  CHECK(apply_subst(swap, f2("p1 -> p2")) == f2("p2 -> p1"));
  CHECK_THROWS_AS(apply_subst(Substitution::identity(1), f2("p2")), std::out_of_range);
}

TEST_CASE("compose") {
  Substitution t({Formula::bot()});
  Substitution s({f1("[0]p1")});
  CHECK(compose(t, s) == Substitution({f1("[0]F")}));
  CHECK(compose(Substitution::identity(1), s) == s);
  CHECK(compose(Substitution({f1("p1 & p1")}), Substitution({Formula::top()})) ==
        Substitution({Formula::top()}));
}

TEST_CASE("compose agrees with sequential application") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 300; ++i) {
    Substitution t({oracle::random_formula(rng, 2, 2, 6), oracle::random_formula(rng, 2, 2, 6)});
    Substitution s({oracle::random_formula(rng, 2, 2, 6), oracle::random_formula(rng, 2, 2, 6)});
    Formula f = oracle::random_formula(rng, 2, 2, 8);
    CHECK(apply_subst(compose(t, s), f) == apply_subst(t, apply_subst(s, f)));
    std::size_t bound = 0;
    for (Formula img : s.images()) bound = std::max(bound, img.depth());
    CHECK(apply_subst(s, f).depth() <= f.depth() + bound);
  }
}

TEST_CASE("replace_subformulas replaces outermost matches") {
  Formula b = f1("[0]p1");
  std::unordered_map<Formula, Formula, FormulaHash> table{{b, Formula::top()}};
  CHECK(replace_subformulas(f1("[0]p1 -> [1][0]p1"), table) == f1("T -> [1]T"));
}

TEST_CASE("structural_compare is a total order consistent with equality") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    Formula a = oracle::random_formula(rng, 2, 2, 6);
    Formula b = oracle::random_formula(rng, 2, 2, 6);
    CHECK((structural_compare(a, b) == 0) == (a == b));
    CHECK((structural_compare(a, b) < 0) == (structural_compare(b, a) > 0));
  }
}
