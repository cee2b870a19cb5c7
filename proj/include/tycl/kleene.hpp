#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "normalize.hpp"
#include "objects.hpp"
#include "terms.hpp"
#include "typecheck.hpp"

namespace tycl {

/// Variables of a term, sorted.
inline std::set<std::string> variables(const KaTerm& t) {
  std::set<std::string> out;
  std::vector<const KaTerm*> todo{&t};
  while (!todo.empty()) {
    const KaTerm* u = todo.back();
    todo.pop_back();
    switch (u->op()) {
      case KaOp::Var: out.insert(u->name()); break;
      case KaOp::Dot:
      case KaOp::Plus: todo.push_back(&u->rhs()); [[fallthrough]];
      case KaOp::Star: todo.push_back(&u->lhs()); break;
      default: break;
    }
  }
  return out;
}

inline bool nullable(const KaTerm& t) {
  switch (t.op()) {
    case KaOp::One:
    case KaOp::Star: return true;
    case KaOp::Var:
    case KaOp::Zero: return false;
    case KaOp::Dot: return nullable(t.lhs()) && nullable(t.rhs());
    case KaOp::Plus: return nullable(t.lhs()) || nullable(t.rhs());
  }
  return false;
}

/// Antimirov automaton: states are terms (partial derivatives of the roots),
/// a state accepts when its term is nullable, and state i steps on letter j
/// to every term of the partial derivative.
class TermNfa {
 public:
  using State = std::uint32_t;

  /// Builds the automaton reachable from `roots` over `alphabet`.
  TermNfa(const std::vector<KaTerm>& roots, std::vector<std::string> alphabet) : alphabet_(std::move(alphabet)) {
    for (const auto& r : roots) roots_.push_back(intern(r));
    for (State s = 0; s < terms_.size(); ++s) {
      std::vector<std::vector<State>> row;
      row.reserve(alphabet_.size());
      for (const auto& letter : alphabet_) {
        std::vector<State> next;
        for (const KaTerm& d : derivative(terms_[s], letter)) next.push_back(intern(d));
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        row.push_back(std::move(next));
      }
      delta_.push_back(std::move(row));
    }
  }

  std::size_t size() const noexcept { return terms_.size(); }
  const std::vector<std::string>& alphabet() const noexcept { return alphabet_; }
  const KaTerm& term(State s) const { return terms_[s]; }
  State root(std::size_t i) const { return roots_[i]; }
  bool accepting(State s) const { return accepting_[s]; }
  const std::vector<State>& step(State s, std::size_t letter) const { return delta_[s][letter]; }

  /// Partial derivative with the simplifications 1.a = a and 0-free unions.
  static std::vector<KaTerm> derivative(const KaTerm& t, const std::string& letter) {
    std::vector<KaTerm> out;
    derive_into(t, letter, out);
    return out;
  }

 private:
  static KaTerm then(const KaTerm& d, const KaTerm& rest) {
    if (d.is(KaOp::One)) return rest;
    return ka::dot(d, rest);
  }

  static void derive_into(const KaTerm& t, const std::string& letter, std::vector<KaTerm>& out) {
    switch (t.op()) {
      case KaOp::Zero:
      case KaOp::One: return;
      case KaOp::Var:
        if (t.name() == letter) out.push_back(ka::one());
        return;
      case KaOp::Plus:
        derive_into(t.lhs(), letter, out);
        derive_into(t.rhs(), letter, out);
        return;
      case KaOp::Dot: {
        std::vector<KaTerm> left;
        derive_into(t.lhs(), letter, left);
        for (const auto& d : left) out.push_back(then(d, t.rhs()));
        if (nullable(t.lhs())) derive_into(t.rhs(), letter, out);
        return;
      }
      case KaOp::Star: {
        std::vector<KaTerm> inner;
        derive_into(t.lhs(), letter, inner);
        for (const auto& d : inner) out.push_back(then(d, t));
        return;
      }
    }
  }

  State intern(const KaTerm& t) {
    auto [it, inserted] = ids_.try_emplace(t.key(), static_cast<State>(terms_.size()));
    if (inserted) {
      terms_.push_back(t);
      accepting_.push_back(nullable(t));
    }
    return it->second;
  }

  std::vector<std::string> alphabet_;
  std::vector<State> roots_;
  std::vector<KaTerm> terms_;
  std::vector<bool> accepting_;
  std::vector<std::vector<std::vector<State>>> delta_;
  std::unordered_map<std::string, State> ids_;
};

/// Language equality of two regular expressions over the variables of both:
/// Hopcroft-Karp on the subset construction of one shared Antimirov
/// automaton, with a union-find over determinised states.
inline bool decide_untyped(const KaTerm& a, const KaTerm& b) {
  std::set<std::string> letters = variables(a);
  letters.merge(variables(b));
  const TermNfa nfa({a, b}, std::vector<std::string>(letters.begin(), letters.end()));

  using Set = std::vector<TermNfa::State>;
  std::map<Set, Unifier::Id> ids;
  Unifier uf;
  auto id = [&](const Set& s) {
    auto [it, inserted] = ids.try_emplace(s, 0);
    if (inserted) it->second = uf.fresh();
    return it->second;
  };
  auto accepts = [&](const Set& s) {
    return std::any_of(s.begin(), s.end(), [&](TermNfa::State q) { return nfa.accepting(q); });
  };
  auto step = [&](const Set& s, std::size_t letter) {
    Set out;
    for (auto q : s) {
      const auto& next = nfa.step(q, letter);
      out.insert(out.end(), next.begin(), next.end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  };

  std::vector<std::pair<Set, Set>> todo{{Set{nfa.root(0)}, Set{nfa.root(1)}}};
  while (!todo.empty()) {
    auto [x, y] = std::move(todo.back());
    todo.pop_back();
    const auto ix = id(x), iy = id(y);
    if (uf.same(ix, iy)) continue;
    if (accepts(x) != accepts(y)) return false;
    uf.unify(ix, iy);
    for (std::size_t l = 0; l < nfa.alphabet().size(); ++l) todo.emplace_back(step(x, l), step(y, l));
  }
  return true;
}

enum class KaSide { Left, Right };

struct KaVerdict {
  enum class Kind { Equal, NotEqual, IllTyped };
  Kind kind = Kind::Equal;
  KaSide side = KaSide::Left;  ///< meaningful for IllTyped only

  static KaVerdict equal() { return {Kind::Equal, KaSide::Left}; }
  static KaVerdict not_equal() { return {Kind::NotEqual, KaSide::Left}; }
  static KaVerdict ill_typed(KaSide s) { return {Kind::IllTyped, s}; }

  friend bool operator==(const KaVerdict& x, const KaVerdict& y) {
    return x.kind == y.kind && (x.kind != Kind::IllTyped || x.side == y.side);
  }
};

inline std::string to_string(const KaVerdict& v) {
  switch (v.kind) {
    case KaVerdict::Kind::Equal: return "Equal";
    case KaVerdict::Kind::NotEqual: return "NotEqual";
    case KaVerdict::Kind::IllTyped: return v.side == KaSide::Left ? "IllTyped(left)" : "IllTyped(right)";
  }
  return "?";
}

/// Typed equality a = b : n -> m. Both sides must check at (n, m); then the
/// typed equation holds iff the untyped one does, so types are erased and
/// the languages compared.
inline KaVerdict decide_typed(const KaTerm& a, const KaTerm& b, const TypeEnv& env, const ObjectTerm& n,
                              const ObjectTerm& m) {
  if (!check_ka(a, env, n, m)) return KaVerdict::ill_typed(KaSide::Left);
  if (!check_ka(b, env, n, m)) return KaVerdict::ill_typed(KaSide::Right);
  return decide_untyped(a, b) ? KaVerdict::equal() : KaVerdict::not_equal();
}

}  // namespace tycl
