#include <gtest/gtest.h>

#include "generators.hpp"
#include "tycl/tycl.hpp"

using namespace tycl;

TEST(ParseFormula, Dual) { EXPECT_EQ(parse_formula("~x"), Formula::dual("x")); }

TEST(ParseFormula, NestedExample) {
  const Formula x = Formula::atom("x"), y = Formula::atom("y");
  const Formula want = Formula::tensor(Formula::par(Formula::tensor(x, y), Formula::dual("y")), y);
  EXPECT_EQ(parse_formula("((x * y) | ~y) * y"), want);
}

TEST(ParseFormula, DoubleOperatorPointsAtSecondStar) {
  try {
    parse_formula("x * * y");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.span().line, 1u);
    EXPECT_EQ(e.span().column, 5u);
  }
}

TEST(ParseFormula, Precedence) {
  const Formula x = Formula::atom("x"), y = Formula::atom("y"), z = Formula::atom("z");
  EXPECT_EQ(parse_formula("x | y * z"), Formula::par(x, Formula::tensor(y, z)));
  EXPECT_EQ(parse_formula("x * y & z"), Formula::with(Formula::tensor(x, y), z));
  EXPECT_EQ(parse_formula("x | y + z"), Formula::plus(Formula::par(x, y), z));
  EXPECT_EQ(parse_formula("1 * bot | top + 0"),
            Formula::plus(Formula::par(Formula::tensor(Formula::one(), Formula::bot()), Formula::top()),
                          Formula::zero()));
}

TEST(ParseFormula, DualOnlyOnAtoms) {
  EXPECT_THROW(parse_formula("~(x * y)"), ParseError);
  EXPECT_THROW(parse_formula("~~x"), ParseError);
}

TEST(ParseSequent, Examples) {
  EXPECT_EQ(parse_sequent("~x, x"), (Sequent{Formula::dual("x"), Formula::atom("x")}));
  EXPECT_TRUE(parse_sequent("").empty());
  EXPECT_TRUE(parse_sequent("   ").empty());
  const Sequent s = parse_sequent("~x * top, ~y, top * x");
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s[0], Formula::tensor(Formula::dual("x"), Formula::top()));
  EXPECT_EQ(s[1], Formula::dual("y"));
  EXPECT_EQ(s[2], Formula::tensor(Formula::top(), Formula::atom("x")));
}

TEST(ParseSequent, TrailingCommaRejected) { EXPECT_THROW(parse_sequent("x,"), ParseError); }

TEST(ParseKa, Examples) {
  EXPECT_EQ(parse_ka_term("x.0.x"), ka::dot(ka::dot(ka::var("x"), ka::zero()), ka::var("x")));
  EXPECT_EQ(parse_ka_term("0*"), ka::star(ka::zero()));
  EXPECT_THROW(parse_ka_term("x.y+"), ParseError);
  EXPECT_EQ(parse_ka_term("x**"), ka::star(ka::star(ka::var("x"))));
  EXPECT_EQ(parse_ka_term("1 + x.y*"), ka::plus(ka::one(), ka::dot(ka::var("x"), ka::star(ka::var("y")))));
}

TEST(ParseRm, Judgements) {
  const RmJudgement j = parse_rm_judgement("x, x \\ y |- y");
  ASSERT_EQ(j.hyps.size(), 2u);
  EXPECT_EQ(j.hyps[0], rm::var("x"));
  EXPECT_EQ(j.hyps[1], rm::ldiv(rm::var("x"), rm::var("y")));
  EXPECT_EQ(j.goal, rm::var("y"));

  const RmJudgement unit = parse_rm_judgement("|- 1");
  EXPECT_TRUE(unit.hyps.empty());
  EXPECT_EQ(unit.goal, rm::unit());

  EXPECT_THROW(parse_rm_judgement("x |- y |- z"), ParseError);
}

TEST(ParseRm, DivisionIsNonAssociative) {
  EXPECT_THROW(parse_rm_term("x \\ y \\ z"), ParseError);
  EXPECT_EQ(parse_rm_term("(x \\ y) / z"), rm::rdiv(rm::ldiv(rm::var("x"), rm::var("y")), rm::var("z")));
  EXPECT_EQ(parse_rm_term("x \\/ y /\\ z"), rm::join(rm::var("x"), rm::meet(rm::var("y"), rm::var("z"))));
}

TEST(ParseRm, Inequation) {
  const RmInequation q = parse_rm_inequation("S.(top \\ R) <= top.R");
  EXPECT_EQ(q.lhs, rm::dot(rm::var("S"), rm::ldiv(rm::top(), rm::var("R"))));
  EXPECT_EQ(q.rhs, rm::dot(rm::top(), rm::var("R")));
}

TEST(ParseEnv, Examples) {
  const TypeEnv e = parse_env("x : n -> m\ny : m -> p");
  ASSERT_EQ(e.size(), 2u);
  EXPECT_EQ(e.at("x").first, ObjectTerm::constant("n"));
  EXPECT_EQ(e.at("x").second, ObjectTerm::constant("m"));
  EXPECT_EQ(e.at("y").first, ObjectTerm::constant("m"));
  EXPECT_EQ(e.at("y").second, ObjectTerm::constant("p"));
  EXPECT_TRUE(parse_env("").empty());
  EXPECT_THROW(parse_env("x : n -> m\nx : p -> q"), DuplicateBinding);
}

TEST(ParseEnv, CommentsAndLineNumbers) {
  EXPECT_EQ(parse_env("# header\n\nx : a -> b  # trailing\n").size(), 1u);
  try {
    parse_env("x : a -> b\n\ny : a b\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.span().line, 3u);
  }
}

TEST(Render, Examples) {
  EXPECT_EQ(render(parse_formula("((x * y) | ~y) * y")), "(x * y | ~y) * y");
  EXPECT_EQ(render(parse_formula("x * (y * z)")), "x * (y * z)");
  EXPECT_EQ(render(parse_sequent("~x, x")), "~x, x");
  EXPECT_EQ(render(parse_ka_term("(x + y)*.x")), "(x + y)*.x");
  EXPECT_EQ(render(parse_rm_judgement("x, x \\ y |- y")), "x, x \\ y |- y");
  EXPECT_EQ(render(parse_rm_judgement("|- 1")), "|- 1");
}

TEST(RoundTrip, Formulas) {
  SplitMix64 rng(1);
  gen::FormulaOpts o;
  o.vars = 3;
  o.additives = true;
  o.constants = true;
  for (int i = 0; i < 2000; ++i) {
    const Sequent s = gen::sequent(rng, static_cast<std::uint32_t>(rng.between(1, 12)), o);
    ASSERT_EQ(parse_sequent(render(s)), s) << render(s);
  }
}

TEST(RoundTrip, KaTerms) {
  SplitMix64 rng(2);
  for (int i = 0; i < 2000; ++i) {
    const KaTerm t = gen::ka(rng, static_cast<std::uint32_t>(rng.between(1, 10)), 3);
    ASSERT_EQ(parse_ka_term(render(t)), t) << render(t);
  }
}

TEST(RoundTrip, RmTerms) {
  SplitMix64 rng(3);
  for (int i = 0; i < 2000; ++i) {
    const RmTerm t = gen::rm(rng, static_cast<std::uint32_t>(rng.between(1, 10)), 3, true);
    ASSERT_EQ(parse_rm_term(render(t)), t) << render(t);
  }
}

TEST(RoundTrip, Environments) {
  SplitMix64 rng(4);
  for (int i = 0; i < 200; ++i) {
    const TypeEnv e = gen::env(rng, static_cast<std::uint32_t>(rng.below(5)), 4);
    ASSERT_EQ(parse_env(render(e)), e);
  }
}

// Arbitrary bytes either parse or raise ParseError; nothing else escapes.
TEST(Fuzz, ParsersAreTotal) {
  static constexpr char kAlphabet[] = "xy~*|+&.()01,\\/<=-> top bot\n:#\x01\xff";
  SplitMix64 rng(5);
  for (int i = 0; i < 20000; ++i) {
    std::string s;
    const auto len = rng.below(16);
    for (std::uint64_t k = 0; k < len; ++k) s.push_back(kAlphabet[rng.below(sizeof kAlphabet - 1)]);
    auto total = [&](auto&& f) {
      try {
        f();
      } catch (const ParseError&) {
      } catch (const DuplicateBinding&) {
      }
    };
    total([&] { parse_sequent(s); });
    total([&] { parse_ka_term(s); });
    total([&] { parse_rm_term(s); });
    total([&] { parse_rm_judgement(s); });
    total([&] { parse_rm_inequation(s); });
    total([&] { parse_env(s); });
  }
}
