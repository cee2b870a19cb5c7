#include <gtest/gtest.h>

#include "exhaustive.hpp"
#include "generators.hpp"
#include "tycl/tycl.hpp"

using namespace tycl;

namespace {
ObjectTerm obj(const char* n) { return ObjectTerm::constant(n); }

SearchConfig no_prune() {
  SearchConfig c;
  c.prune = false;
  return c;
}

const char* const kWorked = "~y | bot | ~x, ((x * y) | ~y) * y";
const char* const kTopCounterexample = "~x * top, ~y, top * x";

bool all_polarized(const Sequent& s) {
  for (const auto& f : s)
    if (polarity(f) == Polarity::Neither) return false;
  return true;
}

bool has_output(const Sequent& s) {
  for (const auto& f : s)
    if (polarity(f) == Polarity::Output) return true;
  return false;
}
}  // namespace

TEST(Prove, Examples) {
  EXPECT_TRUE(prove(parse_sequent("~x, x")).provable());
  EXPECT_TRUE(prove(parse_sequent(kWorked)).provable());
  EXPECT_TRUE(prove(parse_sequent("1")).provable());
  EXPECT_FALSE(prove(parse_sequent("~x, y")).provable());
  EXPECT_FALSE(prove(parse_sequent("")).provable());
  EXPECT_FALSE(prove(parse_sequent("x")).provable());
  // rings, not lists: both orders are the same sequent up to rotation
  EXPECT_TRUE(prove(parse_sequent("x, ~x")).provable());
  EXPECT_FALSE(prove(parse_sequent("x * y, ~x, ~y")).provable());
  EXPECT_TRUE(prove(parse_sequent("x * y, ~y, ~x")).provable());
}

TEST(Prove, AxiomProofShape) {
  const SearchResult r = prove(parse_sequent("~x, x"));
  ASSERT_TRUE(r.provable());
  EXPECT_EQ(r.proof->rule, Rule::Axiom);
  EXPECT_TRUE(r.proof->premises.empty());
}

TEST(Prove, TopCounterexampleNeedsPruningOff) {
  const Sequent s = parse_sequent(kTopCounterexample);
  EXPECT_TRUE(prove(s, no_prune()).provable());
  EXPECT_TRUE(prove_naive(s, no_prune()).provable());
  EXPECT_THROW(prove(s), PruneUnsound);
  EXPECT_TRUE(is_square(infer_sequent(s)));
}

TEST(Prove, Additives) {
  EXPECT_TRUE(prove(parse_sequent("~x, x + y")).provable());
  EXPECT_TRUE(prove(parse_sequent("~x, y + x")).provable());
  EXPECT_TRUE(prove(parse_sequent("~x + ~y, x & y"), no_prune()).provable());
  EXPECT_FALSE(prove(parse_sequent("~x, x & y")).provable());
  EXPECT_TRUE(prove(parse_sequent("top, x, y"), no_prune()).provable());
  EXPECT_FALSE(prove(parse_sequent("0, x"), no_prune()).provable());
}

TEST(Prove, PruningCutsTheRoot) {
  const SearchResult r = prove(parse_sequent("~x, y"));
  EXPECT_TRUE(r.stats.pruned_at_root);
  EXPECT_GE(r.stats.prune_hits, 1u);
  EXPECT_EQ(prove(parse_sequent("~x, y"), no_prune()).stats.prune_hits, 0u);
}

TEST(Prove, BudgetIsAThirdVerdict) {
  SearchConfig c = no_prune();
  c.node_budget = 1;
  const SearchResult r = prove(parse_sequent("(x * y) | (~y * ~x), x * y | ~y * ~x"), c);
  EXPECT_EQ(r.verdict, Verdict::BudgetExceeded);
  EXPECT_FALSE(r.proof);
  EXPECT_EQ(prove_naive(parse_sequent("x * ~x, x * ~x, x | ~x"), c).verdict, Verdict::BudgetExceeded);
}

TEST(ProofChecker, AcceptsFoundProofsAndRejectsTampering) {
  const SearchResult r = prove(parse_sequent(kWorked));
  ASSERT_TRUE(r.provable());
  EXPECT_TRUE(check_proof(*r.proof));
  ProofNode bad = *r.proof;
  bad.conclusion.push_back(Formula::one());
  EXPECT_FALSE(check_proof(bad));
  ProofNode wrong_rule = *r.proof;
  wrong_rule.rule = Rule::Axiom;
  EXPECT_FALSE(check_proof(wrong_rule));
}

TEST(PrintProof, AxiomGolden) {
  const SearchResult r = prove(parse_sequent("~x, x"));
  ASSERT_TRUE(r.provable());
  EXPECT_EQ(print_proof(*r.proof), "Axiom[0] |- ~x, x\n");
}

TEST(Decorate, Axiom) {
  const SearchResult r = prove(parse_sequent("~x, x"));
  const TypeEnv env = parse_env("x : n -> m");
  const TypedProof t = decorate(r.proof, env, obj("m"));
  EXPECT_EQ(t.object, obj("m"));
  EXPECT_TRUE(check_typed_proof(t, env));
}

TEST(Decorate, WorkedExample) {
  const SearchResult r = prove(parse_sequent(kWorked));
  const TypeEnv env = parse_env("x : n -> m\ny : m -> p");
  const TypedProof t = decorate(r.proof, env, obj("p"));
  EXPECT_EQ(t.object, obj("p"));
  EXPECT_TRUE(check_typed_proof(t, env));
  EXPECT_THROW(decorate(r.proof, env, obj("n")), PreconditionViolated);
}

TEST(Decorate, TopCounterexampleFailsWithDistinctObjects) {
  const SearchResult r = prove(parse_sequent(kTopCounterexample), no_prune());
  ASSERT_TRUE(r.provable());
  EXPECT_THROW(decorate(r.proof, parse_env("x : n -> m\ny : p -> q"), obj("m")), DecorationFailed);
  // the search finds the proof whose top closes top;~y, which types once n = p
  EXPECT_NO_THROW(decorate(r.proof, parse_env("x : n -> m\ny : n -> q"), obj("m")));
  EXPECT_THROW(decorate(r.proof, parse_env("x : n -> m\ny : p -> n"), obj("m")), DecorationFailed);
}

TEST(ProveRm, Examples) {
  EXPECT_TRUE(prove_rm({rm::var("x"), parse_rm_term("x \\ y")}, rm::var("y")));
  EXPECT_TRUE(prove_rm({}, rm::unit()));
  EXPECT_FALSE(prove_rm({rm::var("x")}, rm::var("y")));
  EXPECT_TRUE(prove_rm({parse_rm_term("x / y"), rm::var("y")}, rm::var("x")));
  EXPECT_FALSE(prove_rm({rm::var("y"), parse_rm_term("x / y")}, rm::var("x")));
  EXPECT_THROW(prove_rm({}, parse_rm_term("x \\/ y")), PreconditionViolated);
}

TEST(ProveRmViaMll, Examples) {
  EXPECT_TRUE(prove_rm_via_mll({rm::var("x"), parse_rm_term("x \\ y")}, rm::var("y")));
  EXPECT_FALSE(prove_rm_via_mll({}, rm::var("x")));
  EXPECT_TRUE(prove_rm_via_mll({parse_rm_term("y.(top \\ x)")}, parse_rm_term("top.x"), no_prune()));
  EXPECT_TRUE(prove_rm_via_mll({rm::var("x")}, parse_rm_term("x \\/ y")));
}

// The focused search, the unfocused search, with and without memo and
// pruning all agree on every small MLL sequent.
TEST(Properties, ExhaustiveAgreementUpToFourLeaves) {
  exhaustive::MllSequents all(4, {"x", "y"});
  SearchConfig memo_off;
  memo_off.memo = false;
  std::size_t provable = 0, seen = 0;
  all.for_each([&](const Sequent& s) {
    ++seen;
    const bool a = prove(s).provable();
    ASSERT_EQ(a, prove_naive(s).provable()) << render(s);
    ASSERT_EQ(a, prove(s, no_prune()).provable()) << render(s);
    ASSERT_EQ(a, prove(s, memo_off).provable()) << render(s);
    provable += a;
  });
  EXPECT_EQ(seen, 89755u);
  EXPECT_GT(provable, 0u);
}

TEST(Properties, RandomMallAgreement) {
  SplitMix64 rng(31);
  gen::FormulaOpts o;
  o.additives = true;
  for (int i = 0; i < 2000; ++i) {
    const Sequent s = gen::sequent(rng, static_cast<std::uint32_t>(rng.between(1, 9)), o);
    const SearchResult on = prove(s), off = prove(s, no_prune());
    ASSERT_EQ(on.provable(), off.provable()) << render(s);
    ASSERT_EQ(on.provable(), prove_naive(s).provable()) << render(s);
    ASSERT_LE(on.stats.nodes_expanded, off.stats.nodes_expanded) << render(s);
    if (on.provable()) {
      ASSERT_TRUE(check_proof(*on.proof)) << proof_error(*on.proof);
      ASSERT_TRUE(check_proof(*off.proof)) << proof_error(*off.proof);
    }
  }
}

TEST(Properties, AdditiveConstantsAgreeWithoutPruning) {
  SplitMix64 rng(32);
  gen::FormulaOpts o;
  o.additives = true;
  o.constants = true;
  for (int i = 0; i < 1500; ++i) {
    const Sequent s = gen::sequent(rng, static_cast<std::uint32_t>(rng.between(1, 7)), o);
    const SearchResult r = prove(s, no_prune());
    ASSERT_EQ(r.provable(), prove_naive(s, no_prune()).provable()) << render(s);
    if (r.provable()) {
      ASSERT_TRUE(check_proof(*r.proof)) << proof_error(*r.proof);
    }
  }
}

TEST(Properties, ProvableSequentsAreSquare) {
  SplitMix64 rng(33);
  gen::FormulaOpts o;
  o.additives = true;
  int provable = 0;
  for (int i = 0; i < 4000; ++i) {
    const Sequent s = gen::sequent(rng, static_cast<std::uint32_t>(rng.between(2, 10)), o);
    if (!prove(s, no_prune()).provable()) continue;
    ++provable;
    ASSERT_TRUE(is_square(infer_sequent(s))) << render(s);
  }
  EXPECT_GT(provable, 100);
}
// Restricted to sequents made of input and output formulas; "x | x, ~x * ~x"
// is provable and has no formula of either polarity.
TEST(Properties, PolarizedProvableSequentsHaveAnOutput) {
  EXPECT_TRUE(prove(parse_sequent("x | x, ~x * ~x")).provable());
  exhaustive::MllSequents all(5, {"x", "y"});
  std::size_t checked = 0;
  all.for_each([&](const Sequent& s) {
    if (!all_polarized(s) || !prove(s).provable()) return;
    ++checked;
    ASSERT_TRUE(has_output(s)) << render(s);
  });
  EXPECT_GT(checked, 1000u);
}

TEST(Properties, DecorationIsTotal) {
  SplitMix64 rng(34);
  gen::FormulaOpts o;
  o.vars = 3;
  int done = 0;
  for (int i = 0; i < 100000 && done < 300; ++i) {
    const Sequent s = gen::sequent(rng, static_cast<std::uint32_t>(rng.between(2, 10)), o);
    const SearchResult r = prove(s);
    if (!r.provable()) continue;
    const TypeEnv env = gen::instance(rng, infer_sequent(s), 4);
    // a sequent without variables leaves its endpoint free; any object works
    const Mgu typed = infer_sequent(s, env);
    const ObjectTerm end = typed.resolve(typed.start);
    const ObjectTerm root = end.is_constant() ? end : obj("o0");
    const TypedProof t = decorate(r.proof, env, root);
    ASSERT_TRUE(check_typed_proof(t, env)) << render(s);
    ++done;
  }
  EXPECT_EQ(done, 300);
}

TEST(Properties, FragmentEquivalenceSmall) {
  SplitMix64 rng(35);
  for (int i = 0; i < 1500; ++i) {
    std::vector<RmTerm> hyps;
    const auto n = rng.below(3);
    for (std::uint64_t k = 0; k < n; ++k) hyps.push_back(gen::rm(rng, static_cast<std::uint32_t>(rng.between(1, 2)), 2));
    const RmTerm goal = gen::rm(rng, static_cast<std::uint32_t>(rng.between(1, 3)), 2);
    ASSERT_EQ(prove_rm(hyps, goal), prove_rm_via_mll(hyps, goal)) << render(RmJudgement{hyps, goal});
  }
}
