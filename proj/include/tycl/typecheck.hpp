#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "formula.hpp"
#include "normalize.hpp"
#include "objects.hpp"
#include "terms.hpp"

namespace tycl {

class UnboundVariable : public std::invalid_argument {
 public:
  explicit UnboundVariable(const std::string& var)
      : std::invalid_argument("unbound variable '" + var + "'"), var_(var) {}
  const std::string& variable() const noexcept { return var_; }

 private:
  std::string var_;
};

class PreconditionViolated : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Most general type of a sequent or term: the solved equality constraints,
/// the outer endpoints, and the endpoint slots of every variable.
struct Mgu {
  Unifier partition;
  Unifier::Id start = 0;
  Unifier::Id end = 0;
  bool consistent = true;
  std::map<std::string, std::pair<Unifier::Id, Unifier::Id>, std::less<>> vars;

  ObjectTerm resolve(Unifier::Id x) const { return partition.resolve(x); }
};

/// True iff the constraints are satisfiable and force start = end.
inline bool is_square(const Mgu& m) { return m.consistent && m.partition.find(m.start) == m.partition.find(m.end); }

/// One inference session: generates the equality constraints of the typing
/// rules into a union-find. Variables bound in the environment use its
/// objects; unbound ones get two fresh slots, unless `strict` is set, in
/// which case they raise UnboundVariable.
///
///   x : n->m        from=n, to=m           x~ : m->n   (mirrored)
///   1, bot          from=to                0, top      unconstrained
///   a*b, a|b, a.b   fresh midpoint         a+b, a&b    shared endpoints
///   a*              a : from->from, from=to
///   a\c : p->m      a : n->p, c : n->m     c/b : n->p  c : n->m, b : p->m
class TypingSession {
 public:
  using Id = Unifier::Id;

  explicit TypingSession(const TypeEnv& env, bool strict = false) : env_(&env), strict_(strict) {}

  /// Starts over against `env`, reusing the storage of the previous session.
  void reset(const TypeEnv& env, bool strict = false) {
    env_ = &env;
    strict_ = strict;
    uf_.clear();
    // clearing a hash map wipes its bucket array even when it is empty
    if (!metas_.empty()) metas_.clear();
    vars_.clear();
    if (!index_.empty()) index_.clear();
  }

  Unifier& unifier() noexcept { return uf_; }
  Id fresh() { return uf_.fresh(); }
  bool unify(Id a, Id b) { return uf_.unify(a, b); }
  bool consistent() const noexcept { return uf_.consistent(); }

  Id object(const ObjectTerm& o) {
    if (o.is_constant()) return uf_.constant(o.name());
    auto [it, inserted] = metas_.try_emplace(o.id(), 0);
    if (inserted) it->second = uf_.fresh();
    return it->second;
  }

  std::pair<Id, Id> variable(std::string_view name) {
    if (index_.empty()) {
      for (const auto& [n, slots] : vars_)
        if (n == name) return slots;
    } else if (auto it = index_.find(name); it != index_.end()) {
      return vars_[it->second].second;
    }
    std::pair<Id, Id> slots;
    if (auto e = env_->find(name); e != env_->end()) {
      slots = {object(e->second.first), object(e->second.second)};
    } else if (strict_) {
      throw UnboundVariable(std::string(name));
    } else {
      slots.first = uf_.fresh();
      slots.second = uf_.fresh();
    }
    vars_.emplace_back(name, slots);
    if (vars_.size() == kLinearScan) {
      for (std::size_t i = 0; i < vars_.size(); ++i) index_.emplace(vars_[i].first, i);
    } else if (vars_.size() > kLinearScan) {
      index_.emplace(name, vars_.size() - 1);
    }
    return slots;
  }

  void formula(const Formula& f, Id from, Id to) {
    switch (f.kind()) {
      case Connective::Atom: {
        auto [n, m] = variable(f.name());
        uf_.unify(from, n);
        uf_.unify(to, m);
        return;
      }
      case Connective::Dual: {
        auto [n, m] = variable(f.name());
        uf_.unify(from, m);
        uf_.unify(to, n);
        return;
      }
      case Connective::One:
      case Connective::Bot: uf_.unify(from, to); return;
      case Connective::Zero:
      case Connective::Top: return;
      case Connective::Tensor:
      case Connective::Par: {
        const Id mid = uf_.fresh();
        formula(f.lhs(), from, mid);
        formula(f.rhs(), mid, to);
        return;
      }
      case Connective::Plus:
      case Connective::With:
        formula(f.lhs(), from, to);
        formula(f.rhs(), from, to);
        return;
    }
  }

  /// Types the list left to right from `from`; returns the end slot.
  Id sequent(const Sequent& s, Id from) {
    for (const auto& f : s) {
      const Id next = uf_.fresh();
      formula(f, from, next);
      from = next;
    }
    return from;
  }

  void ka(const KaTerm& t, Id from, Id to) {
    switch (t.op()) {
      case KaOp::Var: {
        auto [n, m] = variable(t.name());
        uf_.unify(from, n);
        uf_.unify(to, m);
        return;
      }
      case KaOp::Zero: return;
      case KaOp::One: uf_.unify(from, to); return;
      case KaOp::Dot: {
        const Id mid = uf_.fresh();
        ka(t.lhs(), from, mid);
        ka(t.rhs(), mid, to);
        return;
      }
      case KaOp::Plus:
        ka(t.lhs(), from, to);
        ka(t.rhs(), from, to);
        return;
      case KaOp::Star:
        uf_.unify(from, to);
        ka(t.lhs(), from, from);
        return;
    }
  }

  void rm(const RmTerm& t, Id from, Id to) {
    switch (t.op()) {
      case RmOp::Var: {
        auto [n, m] = variable(t.name());
        uf_.unify(from, n);
        uf_.unify(to, m);
        return;
      }
      case RmOp::Unit: uf_.unify(from, to); return;
      case RmOp::Zero:
      case RmOp::Top: return;
      case RmOp::Dot: {
        const Id mid = uf_.fresh();
        rm(t.lhs(), from, mid);
        rm(t.rhs(), mid, to);
        return;
      }
      case RmOp::LDiv: {
        const Id n = uf_.fresh();
        rm(t.lhs(), n, from);
        rm(t.rhs(), n, to);
        return;
      }
      case RmOp::RDiv: {
        const Id m = uf_.fresh();
        rm(t.lhs(), from, m);
        rm(t.rhs(), to, m);
        return;
      }
      case RmOp::Join:
      case RmOp::Meet:
        rm(t.lhs(), from, to);
        rm(t.rhs(), from, to);
        return;
    }
  }

  Mgu finish(Id start, Id end) && {
    Mgu m;
    m.start = start;
    m.end = end;
    m.consistent = uf_.consistent();
    for (const auto& [name, slots] : vars_) m.vars.emplace(std::string(name), slots);
    m.partition = std::move(uf_);
    return m;
  }

 private:
  const TypeEnv* env_;
  bool strict_;
  Unifier uf_;
  std::unordered_map<std::uint32_t, Id> metas_;
  // Variables in first-use order; hashed once there are many of them.
  static constexpr std::size_t kLinearScan = 16;
  std::vector<std::pair<std::string_view, std::pair<Id, Id>>> vars_;
  std::unordered_map<std::string_view, std::size_t> index_;
};

inline Mgu infer_sequent(const Sequent& seq, const TypeEnv& partial = {}) {
  TypingSession s(partial);
  const auto start = s.fresh();
  const auto end = s.sequent(seq, start);
  return std::move(s).finish(start, end);
}

/// Pruning test: the sequent's most general type is consistent and not square.
/// Cheaper than building an Mgu; agrees with `!is_square(infer_sequent(..))`
/// whenever inference is consistent.
inline bool has_nonsquare_type(const Sequent& seq, const TypeEnv& partial = {}) {
  // called at every synchronous step of the search, so the session is reused
  thread_local TypingSession s(partial);
  s.reset(partial);
  s.unifier().reserve(3 * leaf_count(seq) + 1);
  const auto start = s.fresh();
  const auto end = s.sequent(seq, start);
  return s.consistent() && !s.unifier().same(start, end);
}

inline bool check_formula(const Formula& f, const TypeEnv& env, const ObjectTerm& n, const ObjectTerm& m) {
  TypingSession s(env, true);
  s.formula(f, s.object(n), s.object(m));
  return s.consistent();
}

inline bool check_sequent(const Sequent& l, const TypeEnv& env, const ObjectTerm& n, const ObjectTerm& m) {
  TypingSession s(env, true);
  const auto start = s.object(n);
  const auto end = s.sequent(l, start);
  s.unify(end, s.object(m));
  return s.consistent();
}

inline Mgu infer_ka(const KaTerm& t, const TypeEnv& partial = {}) {
  TypingSession s(partial);
  const auto start = s.fresh(), end = s.fresh();
  s.ka(t, start, end);
  return std::move(s).finish(start, end);
}

inline bool check_ka(const KaTerm& t, const TypeEnv& env, const ObjectTerm& n, const ObjectTerm& m) {
  TypingSession s(env, true);
  s.ka(t, s.object(n), s.object(m));
  return s.consistent();
}

inline Mgu infer_rm(const RmTerm& t, const TypeEnv& partial = {}) {
  TypingSession s(partial);
  const auto start = s.fresh(), end = s.fresh();
  s.rm(t, start, end);
  return std::move(s).finish(start, end);
}

inline bool check_rm(const RmTerm& t, const TypeEnv& env, const ObjectTerm& n, const ObjectTerm& m) {
  TypingSession s(env, true);
  s.rm(t, s.object(n), s.object(m));
  return s.consistent();
}

/// Type of a strict term. Both endpoints are returned as resolved objects:
/// constants where the environment determines them, otherwise metavariables
/// (shared when the endpoints are forced equal). Absent if untypeable.
inline std::optional<std::pair<ObjectTerm, ObjectTerm>> type_of_strict(const KaTerm& t, const TypeEnv& env) {
  if (!is_strict(t)) throw PreconditionViolated("type_of_strict: term is not strict");
  Mgu m = infer_ka(t, env);
  if (!m.consistent) return std::nullopt;
  return std::pair{m.resolve(m.start), m.resolve(m.end)};
}

}  // namespace tycl
