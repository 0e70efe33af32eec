#include <doctest.h>

#include <random>

#include "../oracle/oracle.hpp"
#include "helpers.hpp"
#include "j2kit/gl.hpp"

using namespace j2kit;
using test::f1;

TEST_CASE("maximal [0]-subformulas") {
  auto subs = maximal_box0_subformulas(f1("[0]p1 -> [1][0][0]p1 & [0]p1"));
  CHECK(subs.size() == 2);
}

TEST_CASE("eliminate_box0 reads [0]-subformulas off a sheet") {
  StratifiedModel single = StratifiedModel::single(1);
  SheetFormula s = eliminate_box0(f1("[0]F & p1"), single, 0);
  CHECK(s.body == f1("T & p1"));
  CHECK(eliminate_box0(f1("[1]p1 -> p1"), single, 0).body == f1("[1]p1 -> p1"));
  StratifiedModel c = test::chain0(1, 0);
  SheetFormula t = eliminate_box0(f1("[0]p1 -> [1]p1"), c, c.root_sheet());
  CHECK(t.body == f1("F -> [1]p1"));
  REQUIRE(t.assignment.size() == 1);
  CHECK_FALSE(t.assignment[0].second);
}

TEST_CASE("eliminate_box0 preserves truth on the sheet") {
  std::mt19937_64 rng(71);
  for (int i = 0; i < 300; ++i) {
    StratifiedModel m = oracle::random_model(rng, 8, 2);
    Formula f = oracle::random_formula(rng, 2, 3, 9);
    const int s = m.sheet_of(std::uniform_int_distribution<int>(0, m.size() - 1)(rng));
    SheetFormula e = eliminate_box0(f, m, s);
    CHECK(e.body.free_of_modality(0));
    for (int w : m.sheets()[s].worlds) CHECK(force(m, w, f) == force(m, w, e.body));
  }
}

TEST_CASE("GL theoremhood") {
  Bounds b;
  CHECK(gl_is_theorem(f1("[1]([1]p1 -> p1) -> [1]p1"), b).theorem);
  CHECK(gl_is_theorem(Formula::top(), b).theorem);
  Verdict v = gl_is_theorem(f1("[1]p1 -> p1"), b);
  CHECK_FALSE(v.theorem);
  REQUIRE(v.countermodel);
  CHECK(v.countermodel->model.size() == 1);
  CHECK(v.countermodel->model.val(v.countermodel->point) == 0);
  CHECK_THROWS_AS(gl_is_theorem(f1("[0]p1"), b), std::invalid_argument);
}

TEST_CASE("GL projective unifiers") {
  Bounds b;
  GlUnifierResult p = gl_projective_unifier(f1("p1"), b);
  REQUIRE(p.unifier);
  CHECK((*p.unifier)[0] == f1("p1 & p1 | ~p1 & T"));
  GlUnifierResult c = gl_projective_unifier(f1("p1 & ~p1"), b);
  CHECK_FALSE(c.unifier);
  CHECK(c.violation);
  GlUnifierResult t = gl_projective_unifier(Formula::top(), b, 1);
  REQUIRE(t.unifier);
  CHECK(*t.unifier == Substitution::identity(1));
}

TEST_CASE("GL extension property") {
  Bounds b;
  CHECK(gl_extension_property(Formula::top(), b, 1).holds);
  CHECK(gl_extension_property(f1("p1"), b).holds);
  GlExtensionResult c = gl_extension_property(f1("p1 & ~p1"), b);
  CHECK_FALSE(c.holds);
  REQUIRE(c.violation);
  CHECK(c.violation->size() == 1);
  CHECK_FALSE(gl_extension_property(f1("[1]p1"), b).holds);
}

namespace {

// Exhaustive list of pure-[1] depth-<=1 formulas over p1 up to equivalence
// is too large to build syntactically; a broad random sample suffices here.
std::vector<Formula> gl_sample() {
  std::mt19937_64 rng(73);
  std::vector<Formula> out;
  while (out.size() < 150) {
    Formula f = oracle::random_formula(rng, 1, 1, 6);
    if (f.free_of_modality(0)) out.push_back(f);
  }
  return out;
}

}  // namespace

TEST_CASE("GL unifiers are verified and agree with the extension property") {
  Bounds b;
  for (Formula f : gl_sample()) {
    GlUnifierResult r = gl_projective_unifier(f, b, 1);
    GlExtensionResult e = gl_extension_property(f, b, 1);
    CHECK(r.unifier.has_value() == e.holds);
    if (!r.unifier) continue;
    const Substitution& s = *r.unifier;
    CHECK(gl_is_theorem(apply_subst(s, f), b, 1).theorem);
    Formula p = Formula::var(0);
    // f -> (s(p) <-> p) globally on GL trees: f & [1]f prefix.
    Formula cond = Formula::implies(Formula::conj(f, Formula::box(1, f)), Formula::iff(s[0], p));
    CHECK(gl_is_theorem(cond, b, 1).theorem);
  }
}
