// One PASS/FAIL line per acceptance criterion. Exit status is nonzero when
// any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "exhaustive.hpp"
#include "generators.hpp"
#include "tycl/tycl.hpp"
#include "word_oracle.hpp"

using namespace tycl;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

void report(int n, bool ok, const std::string& detail) {
  std::cout << "criterion " << n << ": " << (ok ? "PASS" : "FAIL") << "  " << detail << std::endl;
  failures += !ok;
}

SearchConfig config(bool prune, bool memo = true) {
  SearchConfig c;
  c.prune = prune;
  c.memo = memo;
  return c;
}

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

// Shared by 1, 2 and 7.
struct Exhaustive {
  std::uint64_t sequents = 0, provable = 0, mismatches = 0;
  std::uint64_t nonsquare = 0;
  std::uint64_t polarized = 0, no_output = 0, unpolarized = 0;
  double seconds = 0;
};

Exhaustive run_exhaustive() {
  Exhaustive e;
  exhaustive::MllSequents all(6, {"x", "y"});
  // memo lookups cost more than they save on sequents this small
  const SearchConfig focused = config(true, false), naive = config(false, false);
  const auto t0 = Clock::now();
  all.for_each([&](const Sequent& s) {
    ++e.sequents;
    const bool a = prove(s, focused).provable();
    const bool b = prove_naive(s, naive).provable();
    e.mismatches += a != b;
    if (!b) return;
    ++e.provable;
    e.nonsquare += !is_square(infer_sequent(s));
    if (!all_polarized(s)) {
      ++e.unpolarized;
      return;
    }
    ++e.polarized;
    e.no_output += !has_output(s);
  });
  e.seconds = seconds_since(t0);
  return e;
}

std::vector<Sequent> random_mall(std::size_t n) {
  SplitMix64 rng(2024);
  gen::FormulaOpts o;
  o.vars = 2;
  o.additives = true;
  std::vector<Sequent> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(gen::sequent(rng, static_cast<std::uint32_t>(rng.between(1, 12)), o));
  return out;
}

/// Every monoid term over {x, y, 1} with exactly k leaves.
std::vector<std::vector<RmTerm>> monoid_terms(std::size_t max) {
  std::vector<std::vector<RmTerm>> by(max + 1);
  if (max == 0) return by;
  by[1] = {rm::var("x"), rm::var("y"), rm::unit()};
  for (std::size_t k = 2; k <= max; ++k)
    for (std::size_t i = 1; i < k; ++i)
      for (const auto& a : by[i])
        for (const auto& b : by[k - i]) {
          by[k].push_back(rm::dot(a, b));
          by[k].push_back(rm::ldiv(a, b));
          by[k].push_back(rm::rdiv(a, b));
        }
  return by;
}

void criterion_6() {
  const std::size_t max = 5;
  const auto by = monoid_terms(max);
  std::uint64_t judgements = 0, mismatches = 0, provable = 0;
  std::vector<RmTerm> hyps;
  const SearchConfig cfg = config(true, false);
  std::function<void(std::size_t)> fill = [&](std::size_t left) {
    for (std::size_t g = 1; g <= left; ++g)
      for (const auto& goal : by[g]) {
        ++judgements;
        const bool a = prove_rm(hyps, goal);
        mismatches += a != prove_rm_via_mll(hyps, goal, cfg);
        provable += a;
      }
    for (std::size_t k = 1; k < left; ++k)
      for (const auto& h : by[k]) {
        hyps.push_back(h);
        fill(left - k);
        hyps.pop_back();
      }
  };
  const auto t0 = Clock::now();
  fill(max);
  std::ostringstream d;
  d << judgements << " judgements up to " << max << " leaves, " << provable << " provable, " << mismatches
    << " mismatches (" << seconds_since(t0) << " s)";
  report(6, mismatches == 0, d.str());
}

KaTerm equal_variant(SplitMix64& rng, const KaTerm& a) {
  if (a.is(KaOp::Star) && rng.coin()) {
    const KaTerm& s = a.lhs();
    switch (rng.below(3)) {
      case 0: return ka::plus(ka::one(), ka::dot(s, a));
      case 1: return ka::dot(a, a);
      default: return ka::star(a);
    }
  }
  switch (rng.below(6)) {
    case 0: return ka::plus(a, a);
    case 1: return ka::dot(ka::one(), a);
    case 2: return ka::dot(a, ka::one());
    case 3: return ka::plus(a, ka::zero());
    case 4: return ka::plus(ka::zero(), a);
    default: return ka::plus(a, ka::dot(a, ka::zero()));
  }
}

void criterion_8() {
  auto t = [](const char* s) { return parse_ka_term(s); };
  struct Case {
    const char *a, *b;
    bool equal;
  };
  const Case ids[] = {{"1 + a.a*", "a*", true},
                      {"(x + y)*", "(x*.y)*.x*", true},
                      {"x.(y.x)*", "(x.y)*.x", true},
                      {"x.y", "y.x", false},
                      {"x", "x + y", false}};
  std::size_t id_wrong = 0;
  for (const auto& c : ids) id_wrong += decide_untyped(t(c.a), t(c.b)) != c.equal;

  SplitMix64 rng(8);
  std::size_t mismatches = 0, equal = 0;
  for (int i = 0; i < 200; ++i) {
    const KaTerm a = gen::ka(rng, static_cast<std::uint32_t>(rng.between(1, 6)), 2);
    const KaTerm b = i % 2 == 0 ? equal_variant(rng, a) : gen::ka(rng, static_cast<std::uint32_t>(rng.between(1, 6)), 2);
    const bool d = decide_untyped(a, b);
    equal += d;
    mismatches += d != (oracle::words(a, 8) == oracle::words(b, 8));
  }
  std::ostringstream d;
  d << id_wrong << " of 5 identities misdecided; 200 random pairs (" << equal << " equal), " << mismatches
    << " oracle mismatches";
  report(8, id_wrong == 0 && mismatches == 0, d.str());
}

void criterion_9() {
  SplitMix64 rng(9);
  std::size_t mismatches = 0, typed = 0, lost = 0, evaluated = 0, open = 0;
  while (evaluated < 500) {
    const KaTerm a = gen::ka(rng, static_cast<std::uint32_t>(rng.between(1, 8)), 3);
    const KaTerm c = clean(a);
    const TypeEnv shape = most_general_shape(a, c);
    const Valuation v = gen::valuation(rng, shape, 0, 3);
    try {
      const auto [l, r] = eval_both(a, c, v);
      mismatches += !(l == r);
      ++evaluated;
    } catch (const TypeMismatch&) {
      // an object inside a is fixed by nothing, e.g. the far side of x.0
      ++open;
      continue;
    }

    const TypeEnv env = gen::env(rng, 3, 2);
    const ObjectTerm n = gen::object(rng, 2), m = gen::object(rng, 2);
    if (check_ka(a, env, n, m)) {
      ++typed;
      lost += !check_ka(c, env, n, m);
    }
  }
  std::ostringstream d;
  d << "500 terms (" << open << " with an open object skipped), " << mismatches << " eval mismatches; " << typed << " typed instances, " << lost
    << " lost their type after clean";
  report(9, mismatches == 0 && lost == 0, d.str());
}

void criterion_10() {
  const RmTerm lhs = parse_rm_term("S.(top \\ R)"), rhs = parse_rm_term("top.R");
  const TypeEnv shape = most_general_shape(lhs, rhs);
  const auto t0 = Clock::now();
  ModelSearchStats with, without;
  const auto found = search_counterexample(lhs, rhs, shape, 2, true, &with);
  const auto none = search_counterexample(lhs, rhs, shape, 2, false, &without);
  const double secs = seconds_since(t0);
  bool empty_carrier = false;
  if (found)
    for (const auto& [o, k] : found->carriers) empty_carrier |= k == 0;
  std::ostringstream d;
  d << "allow-empty: " << (found ? "witness" : "none") << " after " << with.valuations << " valuations; nonempty: "
    << (none ? "witness" : "none") << " after " << without.valuations << " valuations; " << secs << " s";
  report(10, found && empty_carrier && !none && secs < 60, d.str());
}

void criterion_11() {
  GenParams p;
  p.leaves = 30;
  p.var_pool = 20;
  p.fragment = Fragment::MLL;
  p.seed = 7;
  const auto t0 = Clock::now();
  const auto records = run_bench(p, 1000);
  const BenchSummary s = bench_summary(records);
  const Distribution dist = summarize(records);
  bool monotone = true;
  for (std::size_t i = 1; i < dist.bounds_s.size(); ++i)
    monotone &= dist.unpruned[i - 1] <= dist.unpruned[i] && dist.pruned[i - 1] <= dist.pruned[i];
  const double rate = s.rejection_rate();
  std::ostringstream d;
  d << "rejection rate " << rate << " (" << s.pruned_at_root << "/" << s.measured << "), time pruned "
    << s.time_pruned_ns * 1e-9 << " s vs unpruned " << s.time_unpruned_ns * 1e-9 << " s, distribution "
    << (monotone ? "monotone" : "NOT monotone") << ", " << s.verdict_mismatches << " verdict mismatches, "
    << s.budget_exceeded << " over budget (" << seconds_since(t0) << " s)";
  report(11,
         rate >= 0.40 && rate <= 0.90 && s.time_pruned_ns <= s.time_unpruned_ns && monotone &&
             s.verdict_mismatches == 0 && s.budget_exceeded == 0,
         d.str());
}

}  // namespace

int main() {
  const Exhaustive e = run_exhaustive();
  {
    std::ostringstream d;
    d << e.sequents << " sequents up to 6 leaves, " << e.provable << " provable, " << e.mismatches << " mismatches, "
      << e.seconds << " s";
    report(1, e.mismatches == 0 && e.seconds < 600, d.str());
  }

  const std::vector<Sequent> sample = random_mall(10000);
  {
    std::uint64_t provable = 0, nonsquare = 0;
    for (const auto& s : sample) {
      if (!prove(s, config(false)).provable()) continue;
      ++provable;
      nonsquare += !is_square(infer_sequent(s));
    }
    std::ostringstream d;
    d << e.provable << " exhaustive + " << provable << " random provable sequents, " << e.nonsquare + nonsquare
      << " not square";
    report(2, e.nonsquare + nonsquare == 0, d.str());
  }
  {
    std::uint64_t differ = 0, more_nodes = 0, pruned = 0;
    for (const auto& s : sample) {
      const SearchResult on = prove(s, config(true)), off = prove(s, config(false));
      differ += on.verdict != off.verdict;
      more_nodes += on.stats.nodes_expanded > off.stats.nodes_expanded;
      pruned += on.stats.prune_hits > 0;
    }
    std::ostringstream d;
    d << "10000 sequents, " << pruned << " with prune hits, " << differ << " verdict differences, " << more_nodes
      << " records with more nodes when pruned";
    report(3, differ == 0 && more_nodes == 0, d.str());
  }
  {
    SplitMix64 rng(4);
    gen::FormulaOpts o;
    o.vars = 3;
    o.additives = true;
    std::uint64_t decorated = 0, failed = 0, rejected = 0, tries = 0;
    while (decorated + failed < 1000 && tries < 1000000) {
      ++tries;
      const Sequent s = gen::sequent(rng, static_cast<std::uint32_t>(rng.between(2, 12)), o);
      const SearchResult r = prove(s);
      if (!r.provable()) continue;
      const TypeEnv env = gen::instance(rng, infer_sequent(s), 4);
      const Mgu typed = infer_sequent(s, env);
      const ObjectTerm end = typed.resolve(typed.start);
      const ObjectTerm n = end.is_constant() ? end : ObjectTerm::constant("o0");
      try {
        const TypedProof t = decorate(r.proof, env, n);
        if (check_typed_proof(t, env)) {
          ++decorated;
        } else {
          ++rejected;
          ++failed;
        }
      } catch (const DecorationFailed&) {
        ++failed;
      }
    }
    std::ostringstream d;
    d << decorated + failed << " provable sequents, " << failed << " DecorationFailed or rejected (" << rejected
      << " by the typed checker)";
    report(4, decorated == 1000 && failed == 0, d.str());
  }
  {
    const Sequent s = parse_sequent("~x * top, ~y, top * x");
    const SearchResult r = prove(s, config(false));
    const bool square = is_square(infer_sequent(s));
    bool failed = false;
    if (r.provable()) {
      try {
        decorate(r.proof, parse_env("x : n -> m\ny : p -> q"), ObjectTerm::constant("m"));
      } catch (const DecorationFailed&) {
        failed = true;
      }
    }
    std::ostringstream d;
    d << "no-prune verdict " << (r.provable() ? "provable" : "unprovable") << ", " << (square ? "SQUARE" : "NON-SQUARE")
      << ", decoration with distinct objects " << (failed ? "fails" : "succeeds");
    report(5, r.provable() && square && failed, d.str());
  }
  criterion_6();
  {
    std::ostringstream d;
    d << e.polarized << " provable sequents of input/output formulas, " << e.no_output << " without an output ("
      << e.unpolarized << " other provable sequents have a formula of neither polarity)";
    report(7, e.no_output == 0 && e.polarized > 0, d.str());
  }
  criterion_8();
  criterion_9();
  criterion_10();
  criterion_11();
  std::cout << (failures == 0 ? "all criteria pass" : std::to_string(failures) + " criteria fail") << std::endl;
  return failures == 0 ? 0 : 1;
}
