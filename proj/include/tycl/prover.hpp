#pragma once

#include <cstdint>
#include <cstring>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "formula.hpp"
#include "logic.hpp"
#include "objects.hpp"
#include "syntax.hpp"
#include "terms.hpp"
#include "typecheck.hpp"

namespace tycl {

/// Rules of one-sided cyclic MALL. Logical rules act on the first formula of
/// their conclusion, except Tensor, whose principal formula sits at index
/// `principal` (l;a*b;k). Exchange with principal k has premise
/// rotate(conclusion, k), i.e. k consecutive cyclic exchanges.
enum class Rule : std::uint8_t { One, Bot, Tensor, Par, Axiom, Exchange, PlusL, PlusR, With, Top };

inline const char* rule_name(Rule r) {
  switch (r) {
    case Rule::One: return "One";
    case Rule::Bot: return "Bot";
    case Rule::Tensor: return "Tensor";
    case Rule::Par: return "Par";
    case Rule::Axiom: return "Axiom";
    case Rule::Exchange: return "Exchange";
    case Rule::PlusL: return "PlusL";
    case Rule::PlusR: return "PlusR";
    case Rule::With: return "With";
    case Rule::Top: return "Top";
  }
  return "?";
}

inline std::size_t rule_arity(Rule r) {
  switch (r) {
    case Rule::One:
    case Rule::Axiom:
    case Rule::Top: return 0;
    case Rule::Tensor:
    case Rule::With: return 2;
    default: return 1;
  }
}

struct ProofNode;
using ProofPtr = std::shared_ptr<const ProofNode>;

struct ProofNode {
  Rule rule = Rule::One;
  std::size_t principal = 0;
  Sequent conclusion;
  std::vector<ProofPtr> premises;
};

struct SearchConfig {
  bool prune = true;
  bool memo = true;
  TypeEnv env;
  std::optional<std::uint64_t> node_budget;
};

struct SearchStats {
  std::uint64_t nodes_expanded = 0;
  std::uint64_t prune_hits = 0;
  bool pruned_at_root = false;
  std::uint64_t memo_hits = 0;
};

enum class Verdict { Provable, Unprovable, BudgetExceeded };

struct SearchResult {
  Verdict verdict = Verdict::Unprovable;
  ProofPtr proof;  ///< set iff verdict == Provable
  SearchStats stats;

  bool provable() const noexcept { return verdict == Verdict::Provable; }
};

class PruneUnsound : public std::invalid_argument {
 public:
  PruneUnsound()
      : std::invalid_argument(
            "square-type pruning is unsound in the presence of top/0; rerun without pruning") {}
};

class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded() : std::runtime_error("node budget exhausted before a verdict was reached") {}
};

namespace detail {

struct BudgetSignal {};

inline ProofPtr make_node(Rule r, std::size_t principal, Sequent conclusion, std::vector<ProofPtr> premises) {
  auto n = std::make_shared<ProofNode>();
  n->rule = r;
  n->principal = principal;
  n->conclusion = std::move(conclusion);
  n->premises = std::move(premises);
  return n;
}

/// Proof of `conclusion` from a proof of rotate(conclusion, k).
/// Consecutive exchanges are merged into one.
inline ProofPtr exchange(const Sequent& conclusion, std::size_t k, ProofPtr premise) {
  const std::size_t n = conclusion.size();
  if (n == 0) return premise;
  k %= n;
  if (premise->rule == Rule::Exchange) {
    k = (k + premise->principal) % n;
    premise = premise->premises[0];
  }
  if (k == 0) return premise;
  return make_node(Rule::Exchange, k, conclusion, {std::move(premise)});
}

/// Replacing s[i] by `repl`, written in place (the ring the search continues
/// on).
inline void replace_into(Sequent& out, const Sequent& s, std::size_t i, std::initializer_list<Formula> repl) {
  out.clear();
  out.reserve(s.size() - 1 + repl.size());
  out.insert(out.end(), s.begin(), s.begin() + static_cast<std::ptrdiff_t>(i));
  out.insert(out.end(), repl.begin(), repl.end());
  out.insert(out.end(), s.begin() + static_cast<std::ptrdiff_t>(i) + 1, s.end());
}

/// The same replacement with `repl` in front, the shape the logical rules
/// expect, wrapped around a proof of the in-place ring.
inline ProofPtr front_premise(const Sequent& s, std::size_t i, std::initializer_list<Formula> repl,
                              ProofPtr in_place) {
  const std::size_t n = s.size();
  Sequent front;
  front.reserve(n - 1 + repl.size());
  front.insert(front.end(), repl.begin(), repl.end());
  front.insert(front.end(), s.begin() + static_cast<std::ptrdiff_t>(i) + 1, s.end());
  front.insert(front.end(), s.begin(), s.begin() + static_cast<std::ptrdiff_t>(i));
  if (front.empty()) return in_place;
  const std::size_t shift = (repl.size() + n - 1 - i) % front.size();
  return exchange(front, shift, std::move(in_place));
}

inline bool is_axiom(const Formula& a, const Formula& b) {
  return a.is(Connective::Dual) && b.is(Connective::Atom) && a.name() == b.name();
}

inline bool is_axiom(const Sequent& s) {
  return s.size() == 2 && is_axiom(s[0], s[1]);
}

/// Shared machinery of both searches: node accounting, the verdict memo
/// keyed by canonical rotation, and proof assembly.
class SearchBase {
 public:
  explicit SearchBase(const SearchConfig& cfg) : cfg_(cfg) {}

  SearchStats stats;

 protected:
  struct MemoEntry {
    ProofPtr proof;  // null when unprovable
    std::size_t shift = 0;
  };

  void tick() {
    ++stats.nodes_expanded;
    if (cfg_.node_budget && stats.nodes_expanded > *cfg_.node_budget) throw BudgetSignal{};
  }

  template <class Expand>
  ProofPtr memoised(const Sequent& s, Expand&& expand) {
    if (!cfg_.memo) {
      tick();
      return expand(s);
    }
    ids_.clear();
    for (const auto& f : s) ids_.push_back(intern(f));
    const std::size_t n = s.size();
    const std::size_t shift = least_rotation_by<std::vector<std::uint32_t>>(
        n, [&](std::size_t i) -> const std::uint32_t& { return ids_[i]; });
    std::string key(4 * n, '\0');
    for (std::size_t i = 0; i < n; ++i) std::memcpy(&key[4 * i], &ids_[(shift + i) % n], 4);
    if (auto it = memo_.find(key); it != memo_.end()) {
      ++stats.memo_hits;
      if (!it->second.proof) return nullptr;
      return exchange(s, (shift + n - it->second.shift) % n, it->second.proof);
    }
    tick();
    ProofPtr p = expand(s);
    memo_.emplace(std::move(key), MemoEntry{p, shift});
    return p;
  }

  // Rule applications shared by both searches. `prove` is the recursive call.
  template <class Prove>
  ProofPtr apply_unary(const Sequent& s, std::size_t i, Rule rule, std::initializer_list<Formula> repl,
                       Prove&& prove) {
    ProofPtr sub = prove_replaced(s, i, repl, prove);
    if (!sub) return nullptr;
    ProofPtr node = make_node(rule, 0, rotate(s, i), {front_premise(s, i, repl, std::move(sub))});
    return exchange(s, i, std::move(node));
  }

  template <class Prove>
  ProofPtr apply_with(const Sequent& s, std::size_t i, Prove&& prove) {
    const Formula& f = s[i];
    ProofPtr pa = prove_replaced(s, i, {f.lhs()}, prove);
    if (!pa) return nullptr;
    ProofPtr pb = prove_replaced(s, i, {f.rhs()}, prove);
    if (!pb) return nullptr;
    ProofPtr node = make_node(Rule::With, 0, rotate(s, i),
                              {front_premise(s, i, {f.lhs()}, std::move(pa)), front_premise(s, i, {f.rhs()}, std::move(pb))});
    return exchange(s, i, std::move(node));
  }

  /// Tensor at ring position p; `j` context formulas (those just before it)
  /// go to the left premise l;a, the rest to the right premise b;k.
  template <class Prove>
  ProofPtr apply_tensor(const Sequent& s, std::size_t p, std::size_t j, Prove&& prove) {
    const std::size_t n = s.size();
    const std::size_t r = (p + n - j) % n;
    const Formula& f = s[p];
    Sequent x = scratch();
    for (std::size_t t = 0; t < j; ++t) x.push_back(s[(r + t) % n]);
    x.push_back(f.lhs());
    ProofPtr pl = prove(x);
    x.clear();
    if (pl) {
      x.push_back(f.rhs());
      for (std::size_t t = j + 1; t < n; ++t) x.push_back(s[(r + t) % n]);
    }
    ProofPtr pr = pl ? prove(x) : nullptr;
    recycle(std::move(x));
    if (!pr) return nullptr;
    return exchange(s, r, make_node(Rule::Tensor, j, rotate(s, r), {std::move(pl), std::move(pr)}));
  }

  ProofPtr try_close(const Sequent& s) {
    if (s.size() == 1 && s[0].is(Connective::One)) return make_node(Rule::One, 0, s, {});
    if (s.size() == 2) {
      if (is_axiom(s)) return make_node(Rule::Axiom, 0, s, {});
      if (is_axiom(s[1], s[0])) return exchange(s, 1, make_node(Rule::Axiom, 0, rotate(s, 1), {}));
    }
    return nullptr;
  }

  const SearchConfig& cfg_;

 private:
  // Premise sequents are built in recycled vectors, shared by all searches
  // of a thread; failed branches, the common case, then cost no allocation.
  static std::vector<Sequent>& pool() {
    thread_local std::vector<Sequent> p;
    return p;
  }
  static Sequent scratch() {
    auto& p = pool();
    if (p.empty()) return {};
    Sequent x = std::move(p.back());
    p.pop_back();
    return x;
  }
  static void recycle(Sequent&& x) {
    x.clear();
    pool().push_back(std::move(x));
  }

  template <class Prove>
  ProofPtr prove_replaced(const Sequent& s, std::size_t i, std::initializer_list<Formula> repl, Prove& prove) {
    Sequent x = scratch();
    replace_into(x, s, i, repl);
    ProofPtr p = prove(x);
    recycle(std::move(x));
    return p;
  }

  /// Dense id per distinct formula of this search; structurally equal
  /// formulas share an id whatever node they live in.
  std::uint32_t intern(const Formula& f) {
    if (auto it = by_node_.find(f.identity()); it != by_node_.end()) return it->second;
    keep_.push_back(f);
    auto [it, inserted] = by_key_.try_emplace(f.key(), static_cast<std::uint32_t>(by_key_.size()));
    by_node_.emplace(f.identity(), it->second);
    return it->second;
  }

  std::unordered_map<std::string, MemoEntry> memo_;
  std::unordered_map<const void*, std::uint32_t> by_node_;
  std::unordered_map<std::string_view, std::uint32_t> by_key_;
  std::vector<Formula> keep_;  // keeps interned nodes alive and addresses unique
  std::vector<std::uint32_t> ids_;
};

/// Focused search: decompose the leftmost asynchronous formula (par, bot,
/// with, top) until none is left, then branch over synchronous rules.
class FocusedSearch : public SearchBase {
 public:
  using SearchBase::SearchBase;

  ProofPtr prove(const Sequent& s) {
    return memoised(s, [this](const Sequent& x) { return expand(x); });
  }

 private:
  ProofPtr expand(const Sequent& s) {
    auto rec = [this](const Sequent& x) { return prove(x); };
    for (std::size_t i = 0; i < s.size(); ++i) {
      const Formula& f = s[i];
      switch (f.kind()) {
        case Connective::Par: return apply_unary(s, i, Rule::Par, {f.lhs(), f.rhs()}, rec);
        case Connective::Bot: return apply_unary(s, i, Rule::Bot, {}, rec);
        case Connective::With: return apply_with(s, i, rec);
        case Connective::Top: return exchange(s, i, make_node(Rule::Top, 0, rotate(s, i), {}));
        default: break;
      }
    }
    if (cfg_.prune && has_nonsquare_type(s, cfg_.env)) {
      ++stats.prune_hits;
      return nullptr;
    }
    if (ProofPtr p = try_close(s)) return p;
    for (std::size_t p = 0; p < s.size(); ++p) {
      const Formula& f = s[p];
      if (f.is(Connective::Tensor)) {
        for (std::size_t j = 0; j < s.size(); ++j)
          if (ProofPtr q = apply_tensor(s, p, j, rec)) return q;
      } else if (f.is(Connective::Plus)) {
        if (ProofPtr q = apply_unary(s, p, Rule::PlusL, {f.lhs()}, rec)) return q;
        if (ProofPtr q = apply_unary(s, p, Rule::PlusR, {f.rhs()}, rec)) return q;
      }
    }
    return nullptr;
  }
};

/// Unfocused reference search: every rule at every position, no pruning.
class NaiveSearch : public SearchBase {
 public:
  using SearchBase::SearchBase;

  ProofPtr prove(const Sequent& s) {
    return memoised(s, [this](const Sequent& x) { return expand(x); });
  }

 private:
  ProofPtr expand(const Sequent& s) {
    auto rec = [this](const Sequent& x) { return prove(x); };
    if (ProofPtr p = try_close(s)) return p;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const Formula& f = s[i];
      ProofPtr q;
      switch (f.kind()) {
        case Connective::Top: return exchange(s, i, make_node(Rule::Top, 0, rotate(s, i), {}));
        case Connective::Bot: q = apply_unary(s, i, Rule::Bot, {}, rec); break;
        case Connective::Par: q = apply_unary(s, i, Rule::Par, {f.lhs(), f.rhs()}, rec); break;
        case Connective::With: q = apply_with(s, i, rec); break;
        case Connective::Plus:
          q = apply_unary(s, i, Rule::PlusL, {f.lhs()}, rec);
          if (!q) q = apply_unary(s, i, Rule::PlusR, {f.rhs()}, rec);
          break;
        case Connective::Tensor:
          for (std::size_t j = 0; j < s.size() && !q; ++j) q = apply_tensor(s, i, j, rec);
          break;
        default: break;
      }
      if (q) return q;
    }
    return nullptr;
  }
};

template <class Search>
SearchResult run_search(const Sequent& seq, const SearchConfig& cfg, bool root_prune) {
  Search search(cfg);
  SearchResult out;
  try {
    if (root_prune && cfg.prune && has_nonsquare_type(seq, cfg.env)) {
      search.stats.nodes_expanded = 1;
      search.stats.prune_hits = 1;
      search.stats.pruned_at_root = true;
      out.verdict = Verdict::Unprovable;
    } else {
      out.proof = search.prove(seq);
      out.verdict = out.proof ? Verdict::Provable : Verdict::Unprovable;
    }
  } catch (const BudgetSignal&) {
    out.verdict = Verdict::BudgetExceeded;
    out.proof = nullptr;
  }
  out.stats = search.stats;
  return out;
}

}  // namespace detail

/// Focused proof search for cyclic MALL. With `cfg.prune`, every entry into
/// a synchronous phase (and the root) first checks that the most general
/// type is square and fails the branch otherwise; this is only sound without
/// top/0, so such inputs raise PruneUnsound.
inline SearchResult prove(const Sequent& seq, const SearchConfig& cfg = {}) {
  if (cfg.prune && has_additive_constants(seq)) throw PruneUnsound();
  if (cfg.node_budget && *cfg.node_budget == 0) throw std::invalid_argument("node_budget must be positive");
  return detail::run_search<detail::FocusedSearch>(seq, cfg, true);
}

/// Unfocused exhaustive search; `cfg.prune` is ignored.
inline SearchResult prove_naive(const Sequent& seq, const SearchConfig& cfg = {}) {
  if (cfg.node_budget && *cfg.node_budget == 0) throw std::invalid_argument("node_budget must be positive");
  return detail::run_search<detail::NaiveSearch>(seq, cfg, false);
}

// Proof checking ------------------------------------------------------------

namespace detail {
inline bool starts_with(const Sequent& s, Connective c) { return !s.empty() && s[0].is(c); }

inline bool tail_equals(const Sequent& premise, std::size_t skip, const Sequent& concl, std::size_t from) {
  if (premise.size() < skip || premise.size() - skip != concl.size() - from) return false;
  for (std::size_t i = 0; i + from < concl.size(); ++i)
    if (!(premise[skip + i] == concl[from + i])) return false;
  return true;
}

inline std::string check_node(const ProofNode& p) {
  const Sequent& c = p.conclusion;
  if (p.premises.size() != rule_arity(p.rule)) return "wrong premise count";
  for (const auto& q : p.premises)
    if (!q) return "null premise";
  if (p.rule != Rule::Tensor && p.rule != Rule::Exchange && p.principal != 0) return "principal must be 0";
  auto prem = [&](std::size_t i) -> const Sequent& { return p.premises[i]->conclusion; };
  switch (p.rule) {
    case Rule::One:
      return c.size() == 1 && c[0].is(Connective::One) ? "" : "One: conclusion is not [1]";
    case Rule::Axiom: return is_axiom(c) ? "" : "Axiom: conclusion is not [~x, x]";
    case Rule::Top: return starts_with(c, Connective::Top) ? "" : "Top: no leading top";
    case Rule::Bot:
      return starts_with(c, Connective::Bot) && tail_equals(prem(0), 0, c, 1) ? "" : "Bot: shape mismatch";
    case Rule::Par:
      if (!starts_with(c, Connective::Par) || prem(0).size() < 2) return "Par: shape mismatch";
      return prem(0)[0] == c[0].lhs() && prem(0)[1] == c[0].rhs() && tail_equals(prem(0), 2, c, 1)
                 ? ""
                 : "Par: shape mismatch";
    case Rule::PlusL:
    case Rule::PlusR: {
      if (!starts_with(c, Connective::Plus) || prem(0).empty()) return "Plus: shape mismatch";
      const Formula chosen = p.rule == Rule::PlusL ? c[0].lhs() : c[0].rhs();
      return prem(0)[0] == chosen && tail_equals(prem(0), 1, c, 1) ? "" : "Plus: shape mismatch";
    }
    case Rule::With:
      if (!starts_with(c, Connective::With) || prem(0).empty() || prem(1).empty()) return "With: shape mismatch";
      return prem(0)[0] == c[0].lhs() && prem(1)[0] == c[0].rhs() && tail_equals(prem(0), 1, c, 1) &&
                     tail_equals(prem(1), 1, c, 1)
                 ? ""
                 : "With: shape mismatch";
    case Rule::Exchange:
      if (p.principal == 0 || p.principal >= c.size()) return "Exchange: shift out of range";
      return prem(0) == rotate(c, p.principal) ? "" : "Exchange: premise is not the rotation";
    case Rule::Tensor: {
      const std::size_t j = p.principal;
      if (j >= c.size() || !c[j].is(Connective::Tensor)) return "Tensor: principal is not a tensor";
      Sequent l(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(j));
      l.push_back(c[j].lhs());
      Sequent r{c[j].rhs()};
      r.insert(r.end(), c.begin() + static_cast<std::ptrdiff_t>(j) + 1, c.end());
      return prem(0) == l && prem(1) == r ? "" : "Tensor: premises do not split the conclusion";
    }
  }
  return "unknown rule";
}
}  // namespace detail

/// Empty string when every node of the proof follows its rule shape,
/// otherwise a description of the first offending node.
inline std::string proof_error(const ProofNode& p) {
  if (std::string e = detail::check_node(p); !e.empty()) return e + " at |- " + render(p.conclusion);
  for (const auto& q : p.premises)
    if (std::string e = proof_error(*q); !e.empty()) return e;
  return {};
}

inline bool check_proof(const ProofNode& p) { return proof_error(p).empty(); }

inline std::size_t proof_size(const ProofNode& p) {
  std::size_t n = 1;
  for (const auto& q : p.premises) n += proof_size(*q);
  return n;
}

/// Indented, one rule per line: `Rule[principal] |- sequent`.
inline std::string print_proof(const ProofNode& p, std::size_t depth = 0) {
  std::string s(2 * depth, ' ');
  s += rule_name(p.rule);
  s += "[" + std::to_string(p.principal) + "] |- " + render(p.conclusion) + "\n";
  for (const auto& q : p.premises) s += print_proof(*q, depth + 1);
  return s;
}

// Typed reconstruction --------------------------------------------------------

/// A proof whose every node carries the object n of its judgement |-_n l and
/// the boundary objects b0..bk of its conclusion (l_i : b_i -> b_{i+1}).
struct TypedProof {
  ProofPtr node;
  ObjectTerm object = ObjectTerm::meta(0);
  std::vector<ObjectTerm> boundaries;
  std::vector<TypedProof> premises;
};

class DecorationFailed : public std::runtime_error {
 public:
  explicit DecorationFailed(ProofPtr node)
      : std::runtime_error(std::string("no typed rule instance for ") + rule_name(node->rule) + " at |- " +
                           render(node->conclusion)),
        node_(std::move(node)) {}
  const ProofPtr& node() const noexcept { return node_; }

 private:
  ProofPtr node_;
};

namespace detail {
struct DecorationSlots {
  ProofPtr node;
  Unifier::Id object = 0;
  std::vector<Unifier::Id> boundaries;
  std::vector<DecorationSlots> premises;
};

inline DecorationSlots collect(TypingSession& s, const ProofPtr& p, Unifier::Id object) {
  DecorationSlots d;
  d.node = p;
  d.object = object;
  d.boundaries.push_back(object);
  for (const auto& f : p->conclusion) {
    const auto next = s.fresh();
    s.formula(f, d.boundaries.back(), next);
    d.boundaries.push_back(next);
  }
  s.unify(d.boundaries.back(), object);
  if (!s.consistent()) throw DecorationFailed(p);
  for (const auto& q : p->premises) {
    const Unifier::Id child = p->rule == Rule::Exchange ? d.boundaries[p->principal] : object;
    d.premises.push_back(collect(s, q, child));
  }
  return d;
}

inline TypedProof resolve(const Unifier& uf, const DecorationSlots& d) {
  TypedProof t;
  t.node = d.node;
  t.object = uf.resolve(d.object);
  for (auto b : d.boundaries) t.boundaries.push_back(uf.resolve(b));
  for (const auto& q : d.premises) t.premises.push_back(resolve(uf, q));
  return t;
}
}  // namespace detail

/// Turns an untyped proof of l, with l : n -> n under `env`, into a typed
/// derivation of |-_n l. The typed rules only add equalities between
/// objects, so a single union-find over all nodes decides them; a clash is
/// reported at the first node (in pre-order) where it appears.
inline TypedProof decorate(const ProofPtr& p, const TypeEnv& env, const ObjectTerm& n) {
  if (!p) throw std::invalid_argument("decorate: null proof");
  if (!check_sequent(p->conclusion, env, n, n))
    throw PreconditionViolated("decorate: conclusion does not have type " + n.str() + " -> " + n.str());
  TypingSession s(env, true);
  const auto root = s.object(n);
  detail::DecorationSlots slots = detail::collect(s, p, root);
  return detail::resolve(s.unifier(), slots);
}

/// Independent check of a decoration against the typed rules, using concrete
/// objects only.
inline bool check_typed_proof(const TypedProof& t, const TypeEnv& env) {
  const ProofNode& p = *t.node;
  const Sequent& c = p.conclusion;
  if (t.boundaries.size() != c.size() + 1) return false;
  if (!(t.boundaries.front() == t.object) || !(t.boundaries.back() == t.object)) return false;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i].has_additive_constants()) continue;
    if (!t.boundaries[i].is_constant() || !t.boundaries[i + 1].is_constant()) return false;
    if (!check_formula(c[i], env, t.boundaries[i], t.boundaries[i + 1])) return false;
  }
  if (t.premises.size() != p.premises.size()) return false;
  for (std::size_t i = 0; i < t.premises.size(); ++i) {
    const ObjectTerm& want = p.rule == Rule::Exchange ? t.boundaries[p.principal] : t.object;
    if (!(t.premises[i].object == want)) return false;
    if (!check_typed_proof(t.premises[i], env)) return false;
  }
  if (p.rule == Rule::Axiom) {
    auto it = env.find(c[1].name());
    if (it == env.end() || !(it->second.second == t.object)) return false;
  }
  return true;
}

inline std::string print_typed_proof(const TypedProof& t, std::size_t depth = 0) {
  std::string s(2 * depth, ' ');
  s += rule_name(t.node->rule);
  s += "[" + std::to_string(t.node->principal) + "] |-_" + t.object.str() + " " + render(t.node->conclusion) + "\n";
  for (const auto& q : t.premises) s += print_typed_proof(q, depth + 1);
  return s;
}

// Residuated monoids ----------------------------------------------------------

namespace detail {
/// Backward search in the cut-free Gentzen system for residuated monoids
/// (axiom, introduction and elimination rules for 1, ., /, \).
class GentzenSearch {
 public:
  bool derive(const std::vector<RmTerm>& l, const RmTerm& a) {
    std::string key;
    for (const auto& t : l) {
      key += t.key();
      key.push_back('\xff');
    }
    key.push_back('\xfe');
    key += a.key();
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    const bool r = expand(l, a);
    memo_.emplace(std::move(key), r);
    return r;
  }

 private:
  using List = std::vector<RmTerm>;

  static List slice(const List& l, std::size_t from, std::size_t to) {
    return List(l.begin() + static_cast<std::ptrdiff_t>(from), l.begin() + static_cast<std::ptrdiff_t>(to));
  }

  bool expand(const List& l, const RmTerm& a) {
    const std::size_t n = l.size();
    switch (a.op()) {
      case RmOp::Var:
        if (n == 1 && l[0] == a) return true;
        break;
      case RmOp::Unit:
        if (n == 0) return true;
        break;
      case RmOp::Dot:
        for (std::size_t i = 0; i <= n; ++i)
          if (derive(slice(l, 0, i), a.lhs()) && derive(slice(l, i, n), a.rhs())) return true;
        break;
      case RmOp::RDiv: {  // l;b |- c  gives  l |- c/b
        List m = l;
        m.push_back(a.rhs());
        if (derive(m, a.lhs())) return true;
        break;
      }
      case RmOp::LDiv: {  // b;l |- c  gives  l |- b\c
        List m{a.lhs()};
        m.insert(m.end(), l.begin(), l.end());
        if (derive(m, a.rhs())) return true;
        break;
      }
      default: break;
    }
    for (std::size_t j = 0; j < n; ++j) {
      const RmTerm& h = l[j];
      switch (h.op()) {
        case RmOp::Unit: {
          List m = slice(l, 0, j);
          m.insert(m.end(), l.begin() + static_cast<std::ptrdiff_t>(j) + 1, l.end());
          if (derive(m, a)) return true;
          break;
        }
        case RmOp::Dot: {
          List m = slice(l, 0, j);
          m.push_back(h.lhs());
          m.push_back(h.rhs());
          m.insert(m.end(), l.begin() + static_cast<std::ptrdiff_t>(j) + 1, l.end());
          if (derive(m, a)) return true;
          break;
        }
        case RmOp::RDiv:  // l;c/b;k;l'  from  k |- b  and  l;c;l' |- a
          for (std::size_t e = j + 1; e <= n; ++e) {
            if (!derive(slice(l, j + 1, e), h.rhs())) continue;
            List m = slice(l, 0, j);
            m.push_back(h.lhs());
            m.insert(m.end(), l.begin() + static_cast<std::ptrdiff_t>(e), l.end());
            if (derive(m, a)) return true;
          }
          break;
        case RmOp::LDiv:  // l;k;b\c;l'  from  k |- b  and  l;c;l' |- a
          for (std::size_t b = 0; b <= j; ++b) {
            if (!derive(slice(l, b, j), h.lhs())) continue;
            List m = slice(l, 0, b);
            m.push_back(h.rhs());
            m.insert(m.end(), l.begin() + static_cast<std::ptrdiff_t>(j) + 1, l.end());
            if (derive(m, a)) return true;
          }
          break;
        default: break;
      }
    }
    return false;
  }

  std::unordered_map<std::string, bool> memo_;
};
}  // namespace detail

/// Cut-free provability of hyps |- goal in residuated monoids.
inline bool prove_rm(const std::vector<RmTerm>& hyps, const RmTerm& goal) {
  for (const auto& h : hyps)
    if (!rm::is_monoid_term(h)) throw PreconditionViolated("prove_rm: lattice operators or bounds in hypotheses");
  if (!rm::is_monoid_term(goal)) throw PreconditionViolated("prove_rm: lattice operators or bounds in goal");
  return detail::GentzenSearch{}.derive(hyps, goal);
}

/// The one-sided sequent <hyps>~ ; <goal> whose provability matches hyps |- goal.
inline Sequent rm_sequent(const std::vector<RmTerm>& hyps, const RmTerm& goal) {
  Sequent enc;
  enc.reserve(hyps.size());
  for (const auto& h : hyps) enc.push_back(encode_rm(h));
  Sequent s = negate_list(enc);
  s.push_back(encode_rm(goal));
  return s;
}

inline bool prove_rm_via_mll(const std::vector<RmTerm>& hyps, const RmTerm& goal, const SearchConfig& cfg = {}) {
  SearchResult r = prove(rm_sequent(hyps, goal), cfg);
  if (r.verdict == Verdict::BudgetExceeded) throw BudgetExceeded();
  return r.provable();
}

}  // namespace tycl
