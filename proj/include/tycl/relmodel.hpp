#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <type_traits>
#include <utility>
#include <vector>

#include "objects.hpp"
#include "syntax.hpp"
#include "terms.hpp"
#include "typecheck.hpp"

namespace tycl {

struct Carrier {
  std::string name;
  std::size_t size = 0;

  friend bool operator==(const Carrier&, const Carrier&) = default;
};

/// Finite relation between two carriers, stored as one bit row per source
/// element. Carriers may be empty; codomains are limited to 64 elements.
class Rel {
 public:
  using Row = std::uint64_t;
  static constexpr std::size_t kMaxCarrier = 64;

  Rel(Carrier dom, Carrier cod) : dom_(std::move(dom)), cod_(std::move(cod)), rows_(dom_.size, 0) {
    if (cod_.size > kMaxCarrier) throw std::invalid_argument("Rel: carriers are limited to 64 elements");
  }

  static Rel empty(Carrier dom, Carrier cod) { return Rel(std::move(dom), std::move(cod)); }
  static Rel full(Carrier dom, Carrier cod) {
    Rel r(std::move(dom), std::move(cod));
    for (auto& row : r.rows_) row = r.mask();
    return r;
  }
  static Rel identity(const Carrier& c) {
    Rel r(c, c);
    for (std::size_t i = 0; i < c.size; ++i) r.rows_[i] = Row{1} << i;
    return r;
  }
  /// Relation whose pair (i, j) is bit i * |cod| + j of `bits`.
  static Rel from_bits(Carrier dom, Carrier cod, std::uint64_t bits) {
    Rel r(std::move(dom), std::move(cod));
    for (std::size_t i = 0; i < r.dom_.size; ++i)
      for (std::size_t j = 0; j < r.cod_.size; ++j)
        if (bits >> (i * r.cod_.size + j) & 1) r.insert(i, j);
    return r;
  }

  const Carrier& dom() const noexcept { return dom_; }
  const Carrier& cod() const noexcept { return cod_; }

  bool contains(std::size_t i, std::size_t j) const { return i < dom_.size && j < cod_.size && (rows_[i] >> j & 1); }
  void insert(std::size_t i, std::size_t j) {
    if (i >= dom_.size || j >= cod_.size)
      throw std::out_of_range("Rel: pair (" + std::to_string(i) + "," + std::to_string(j) + ") outside " +
                              dom_.name + " x " + cod_.name);
    rows_[i] |= Row{1} << j;
  }
  Row row(std::size_t i) const { return rows_[i]; }
  Row mask() const noexcept { return cod_.size == 64 ? ~Row{0} : (Row{1} << cod_.size) - 1; }

  std::vector<std::pair<std::size_t, std::size_t>> pairs() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < dom_.size; ++i)
      for (std::size_t j = 0; j < cod_.size; ++j)
        if (contains(i, j)) out.emplace_back(i, j);
    return out;
  }
  bool is_empty() const {
    for (auto r : rows_)
      if (r) return false;
    return true;
  }

  bool subset_of(const Rel& o) const {
    same_shape(o);
    for (std::size_t i = 0; i < rows_.size(); ++i)
      if (rows_[i] & ~o.rows_[i]) return false;
    return true;
  }

  friend bool operator==(const Rel& a, const Rel& b) {
    return a.dom_.size == b.dom_.size && a.cod_.size == b.cod_.size && a.rows_ == b.rows_;
  }

  friend Rel operator|(const Rel& a, const Rel& b) {
    a.same_shape(b);
    Rel r = a;
    for (std::size_t i = 0; i < r.rows_.size(); ++i) r.rows_[i] |= b.rows_[i];
    return r;
  }
  friend Rel operator&(const Rel& a, const Rel& b) {
    a.same_shape(b);
    Rel r = a;
    for (std::size_t i = 0; i < r.rows_.size(); ++i) r.rows_[i] &= b.rows_[i];
    return r;
  }

  /// a ; b
  static Rel compose(const Rel& a, const Rel& b) {
    if (a.cod_.size != b.dom_.size) throw std::invalid_argument("Rel::compose: inner carriers differ");
    Rel r(a.dom_, b.cod_);
    for (std::size_t i = 0; i < a.dom_.size; ++i)
      for (std::size_t k = 0; k < a.cod_.size; ++k)
        if (a.rows_[i] >> k & 1) r.rows_[i] |= b.rows_[k];
    return r;
  }

  /// t \ r = {(i,j) | for all k, (k,i) in t implies (k,j) in r}
  static Rel ldiv(const Rel& t, const Rel& r) {
    if (t.dom_.size != r.dom_.size) throw std::invalid_argument("Rel::ldiv: sources differ");
    Rel out(t.cod_, r.cod_);
    for (std::size_t i = 0; i < t.cod_.size; ++i) {
      Row acc = out.mask();
      for (std::size_t k = 0; k < t.dom_.size; ++k)
        if (t.rows_[k] >> i & 1) acc &= r.rows_[k];
      out.rows_[i] = acc;
    }
    return out;
  }

  /// c / b = {(i,j) | for all k, (j,k) in b implies (i,k) in c}
  static Rel rdiv(const Rel& c, const Rel& b) {
    if (c.cod_.size != b.cod_.size) throw std::invalid_argument("Rel::rdiv: targets differ");
    Rel out(c.dom_, b.dom_);
    for (std::size_t i = 0; i < c.dom_.size; ++i)
      for (std::size_t j = 0; j < b.dom_.size; ++j)
        if ((b.rows_[j] & ~c.rows_[i]) == 0) out.rows_[i] |= Row{1} << j;
    return out;
  }

  /// Reflexive-transitive closure, by squaring 1 + a until it is stable.
  static Rel star(const Rel& a) {
    if (a.dom_.size != a.cod_.size) throw std::invalid_argument("Rel::star: relation is not square");
    Rel r = identity(a.dom_) | a;
    for (;;) {
      Rel next = compose(r, r);
      if (next == r) return r;
      r = std::move(next);
    }
  }

 private:
  void same_shape(const Rel& o) const {
    if (dom_.size != o.dom_.size || cod_.size != o.cod_.size)
      throw std::invalid_argument("Rel: relations have different shapes");
  }

  Carrier dom_, cod_;
  std::vector<Row> rows_;
};

/// "{(0,0),(1,1)}"
inline std::string render(const Rel& r) {
  std::string s = "{";
  bool first = true;
  for (auto [i, j] : r.pairs()) {
    if (!first) s += ",";
    first = false;
    s += "(" + std::to_string(i) + "," + std::to_string(j) + ")";
  }
  return s + "}";
}

/// Carriers for objects and relations for variables; `env` records each
/// variable's objects.
struct Valuation {
  TypeEnv env;
  std::map<std::string, std::size_t, std::less<>> carriers;
  std::map<std::string, Rel, std::less<>> rels;

  Carrier carrier(const std::string& object) const {
    auto it = carriers.find(object);
    if (it == carriers.end()) throw std::invalid_argument("valuation: no carrier for object '" + object + "'");
    return {object, it->second};
  }

  void bind(const std::string& var, const std::string& from, const std::string& to, Rel r) {
    env.insert_or_assign(var, std::pair{ObjectTerm::constant(from), ObjectTerm::constant(to)});
    rels.insert_or_assign(var, std::move(r));
  }
};

class TypeMismatch : public std::runtime_error {
 public:
  TypeMismatch(const std::string& subterm, const std::string& why)
      : std::runtime_error("type mismatch at '" + subterm + "': " + why), subterm_(subterm) {}
  const std::string& subterm() const noexcept { return subterm_; }

 private:
  std::string subterm_;
};

namespace detail {

/// Types every subterm (in pre-order) against the valuation, reporting the
/// innermost subterm at which the constraints become unsatisfiable.
class Annotator {
 public:
  using Id = Unifier::Id;

  explicit Annotator(const TypeEnv& env) : session_(env, true) {}

  TypingSession& session() { return session_; }

  void rm(const RmTerm& t, Id from, Id to) {
    slots_.emplace_back(from, to);
    switch (t.op()) {
      case RmOp::Var:
        var(t.name(), from, to);
        break;
      case RmOp::Unit: session_.unify(from, to); break;
      case RmOp::Zero:
      case RmOp::Top: break;
      case RmOp::Dot: {
        const Id mid = session_.fresh();
        rm(t.lhs(), from, mid);
        rm(t.rhs(), mid, to);
        break;
      }
      case RmOp::LDiv: {
        const Id n = session_.fresh();
        rm(t.lhs(), n, from);
        rm(t.rhs(), n, to);
        break;
      }
      case RmOp::RDiv: {
        const Id m = session_.fresh();
        rm(t.lhs(), from, m);
        rm(t.rhs(), to, m);
        break;
      }
      case RmOp::Join:
      case RmOp::Meet:
        rm(t.lhs(), from, to);
        rm(t.rhs(), from, to);
        break;
    }
    if (!session_.consistent()) throw TypeMismatch(render(t), "no consistent choice of objects");
  }

  void ka(const KaTerm& t, Id from, Id to) {
    slots_.emplace_back(from, to);
    switch (t.op()) {
      case KaOp::Var: var(t.name(), from, to); break;
      case KaOp::Zero: break;
      case KaOp::One: session_.unify(from, to); break;
      case KaOp::Dot: {
        const Id mid = session_.fresh();
        ka(t.lhs(), from, mid);
        ka(t.rhs(), mid, to);
        break;
      }
      case KaOp::Plus:
        ka(t.lhs(), from, to);
        ka(t.rhs(), from, to);
        break;
      case KaOp::Star:
        session_.unify(from, to);
        ka(t.lhs(), from, to);
        break;
    }
    if (!session_.consistent()) throw TypeMismatch(render(t), "no consistent choice of objects");
  }

  void annotate(const RmTerm& t, Id from, Id to) { rm(t, from, to); }
  void annotate(const KaTerm& t, Id from, Id to) { ka(t, from, to); }

  const std::vector<std::pair<Id, Id>>& slots() const { return slots_; }

 private:
  void var(const std::string& name, Id from, Id to) {
    auto [n, m] = session_.variable(name);
    session_.unify(from, n);
    session_.unify(to, m);
  }

  TypingSession session_;
  std::vector<std::pair<Id, Id>> slots_;
};

template <class T>
class Evaluator {
 public:
  Evaluator(const Valuation& v, const Annotator& a, const Unifier& uf) : v_(v), a_(a), uf_(uf) {}

  Rel eval(const T& t) {
    const auto [from, to] = a_.slots()[next_++];
    const Carrier dom = carrier(t, from), cod = carrier(t, to);
    if constexpr (std::is_same_v<T, RmTerm>) {
      switch (t.op()) {
        case RmOp::Var: return v_.rels.at(t.name());
        case RmOp::Unit: return Rel::identity(dom);
        case RmOp::Zero: return Rel::empty(dom, cod);
        case RmOp::Top: return Rel::full(dom, cod);
        case RmOp::Dot: {
          Rel a = eval(t.lhs());
          return Rel::compose(a, eval(t.rhs()));
        }
        case RmOp::LDiv: {
          Rel a = eval(t.lhs());
          return Rel::ldiv(a, eval(t.rhs()));
        }
        case RmOp::RDiv: {
          Rel a = eval(t.lhs());
          return Rel::rdiv(a, eval(t.rhs()));
        }
        case RmOp::Join: {
          Rel a = eval(t.lhs());
          return a | eval(t.rhs());
        }
        case RmOp::Meet: {
          Rel a = eval(t.lhs());
          return a & eval(t.rhs());
        }
      }
    } else {
      switch (t.op()) {
        case KaOp::Var: return v_.rels.at(t.name());
        case KaOp::One: return Rel::identity(dom);
        case KaOp::Zero: return Rel::empty(dom, cod);
        case KaOp::Dot: {
          Rel a = eval(t.lhs());
          return Rel::compose(a, eval(t.rhs()));
        }
        case KaOp::Plus: {
          Rel a = eval(t.lhs());
          return a | eval(t.rhs());
        }
        case KaOp::Star: return Rel::star(eval(t.lhs()));
      }
    }
    throw std::logic_error("eval: unknown operator");
  }

 private:
  Carrier carrier(const T& t, Unifier::Id slot) const {
    auto name = uf_.constant_of(slot);
    if (!name) throw TypeMismatch(render(t), "its type is not determined by the valuation");
    return v_.carrier(*name);
  }

  const Valuation& v_;
  const Annotator& a_;
  const Unifier& uf_;
  std::size_t next_ = 0;
};

inline void check_valuation(const Valuation& v) {
  for (const auto& [x, ty] : v.env) {
    auto it = v.rels.find(x);
    if (it == v.rels.end()) throw std::invalid_argument("valuation: no relation for variable '" + x + "'");
    if (!ty.first.is_constant() || !ty.second.is_constant())
      throw std::invalid_argument("valuation: variable '" + x + "' has an abstract type");
    const Carrier d = v.carrier(ty.first.name()), c = v.carrier(ty.second.name());
    if (it->second.dom().size != d.size || it->second.cod().size != c.size)
      throw std::invalid_argument("valuation: relation for '" + x + "' does not fit " + d.name + " -> " + c.name);
  }
}

template <class T>
std::pair<Rel, Rel> eval_pair(const T& lhs, const T* rhs, const Valuation& v) {
  check_valuation(v);
  Annotator a(v.env);
  const auto from = a.session().fresh(), to = a.session().fresh();
  a.annotate(lhs, from, to);
  if (rhs) a.annotate(*rhs, from, to);
  Evaluator<T> e(v, a, a.session().unifier());
  Rel l = e.eval(lhs);
  if (!rhs) return {l, l};
  Rel r = e.eval(*rhs);
  return {std::move(l), std::move(r)};
}

}  // namespace detail

/// Denotation of a term. Every subterm's type must be fixed by the
/// valuation; 1, 0 and top take their carriers from that type.
inline Rel eval(const RmTerm& t, const Valuation& v) { return detail::eval_pair<RmTerm>(t, nullptr, v).first; }
inline Rel eval(const KaTerm& t, const Valuation& v) { return detail::eval_pair<KaTerm>(t, nullptr, v).first; }

/// Both sides are typed together at one type; true iff lhs is contained in rhs.
template <class T>
bool check_le(const T& lhs, const T& rhs, const Valuation& v) {
  auto [l, r] = detail::eval_pair<T>(lhs, &rhs, v);
  return l.subset_of(r);
}

template <class T>
std::pair<Rel, Rel> eval_both(const T& lhs, const T& rhs, const Valuation& v) {
  return detail::eval_pair<T>(lhs, &rhs, v);
}

// Counterexample search -------------------------------------------------------

/// Most general typing of lhs <= rhs. Object classes are named o0, o1, ...
/// walking the variables in name order, source before target.
template <class T>
TypeEnv most_general_shape(const T& lhs, const T& rhs) {
  const TypeEnv none;
  TypingSession x(none);
  const auto f = x.fresh(), t = x.fresh();
  if constexpr (std::is_same_v<T, RmTerm>) {
    x.rm(lhs, f, t);
    x.rm(rhs, f, t);
  } else {
    x.ka(lhs, f, t);
    x.ka(rhs, f, t);
  }
  Mgu m = std::move(x).finish(f, t);
  if (!m.consistent) throw TypeMismatch(render(lhs) + " <= " + render(rhs), "the two sides have no common type");
  std::map<Unifier::Id, std::string> names;
  auto name = [&](Unifier::Id slot) {
    const auto root = m.partition.find(slot);
    auto [it, inserted] = names.try_emplace(root, "");
    if (inserted) it->second = "o" + std::to_string(names.size() - 1);
    return ObjectTerm::constant(it->second);
  };
  TypeEnv env;
  for (const auto& [x, slots] : m.vars) env.emplace(x, std::pair{name(slots.first), name(slots.second)});
  return env;
}

struct ModelSearchStats {
  std::uint64_t valuations = 0;  ///< valuations tried
};

/// Objects of a shape in name order.
inline std::vector<std::string> shape_objects(const TypeEnv& shape) {
  std::set<std::string> objs;
  for (const auto& [x, ty] : shape) {
    if (!ty.first.is_constant() || !ty.second.is_constant())
      throw std::invalid_argument("shape: variable '" + x + "' needs named objects");
    objs.insert(ty.first.name());
    objs.insert(ty.second.name());
  }
  return {objs.begin(), objs.end()};
}

/// Exhaustive search for a valuation under which lhs <= rhs fails.
///
/// Order: carrier-size tuples (objects in name order) lexicographically,
/// each size ranging over [allow_empty ? 0 : 1, max_size]; for each tuple,
/// relations for the variables in name order, the first variable varying
/// slowest, each relation counting through its bitsets 0 .. 2^(|dom||cod|)-1
/// with pair (i, j) as bit i*|cod|+j. The first failing valuation is returned.
/// A variable of the shape absent from both sides is still enumerated.
template <class T>
std::optional<Valuation> search_counterexample(const T& lhs, const T& rhs, const TypeEnv& shape, std::size_t max_size,
                                               bool allow_empty, ModelSearchStats* stats = nullptr) {
  const std::vector<std::string> objects = shape_objects(shape);
  const std::size_t lo = allow_empty ? 0 : 1;
  if (max_size > 7) throw std::invalid_argument("search_counterexample: max_size above 7 is not enumerable");
  if (lo > max_size) return std::nullopt;
  std::vector<std::string> vars;
  for (const auto& [x, _] : shape) vars.push_back(x);

  {
    // the query must type under the shape; report it once, not per valuation
    detail::Annotator a(shape);
    const auto f = a.session().fresh(), t = a.session().fresh();
    a.annotate(lhs, f, t);
    a.annotate(rhs, f, t);
  }

  std::vector<std::size_t> sizes(objects.size(), lo);
  Valuation v;
  v.env = shape;
  for (;;) {
    for (std::size_t i = 0; i < objects.size(); ++i) v.carriers.insert_or_assign(objects[i], sizes[i]);
    std::vector<Carrier> dom, cod;
    std::vector<std::uint64_t> limit;
    for (const auto& x : vars) {
      const auto& ty = shape.at(x);
      dom.push_back(v.carrier(ty.first.name()));
      cod.push_back(v.carrier(ty.second.name()));
      const std::size_t bits = dom.back().size * cod.back().size;
      if (bits > 62) throw std::invalid_argument("search_counterexample: relation space too large");
      limit.push_back(std::uint64_t{1} << bits);
    }
    std::vector<std::uint64_t> counter(vars.size(), 0);
    for (;;) {
      for (std::size_t i = 0; i < vars.size(); ++i)
        v.rels.insert_or_assign(vars[i], Rel::from_bits(dom[i], cod[i], counter[i]));
      if (stats) ++stats->valuations;
      if (!check_le(lhs, rhs, v)) return v;
      std::size_t i = vars.size();
      while (i > 0 && ++counter[i - 1] == limit[i - 1]) counter[--i] = 0;
      if (i == 0) break;
    }
    std::size_t k = objects.size();
    while (k > 0 && ++sizes[k - 1] > max_size) sizes[--k] = lo;
    if (k == 0) break;
  }
  return std::nullopt;
}

/// Number of valuations the search visits when nothing fails:
/// sum over size tuples of prod over variables of 2^(|dom||cod|).
inline std::uint64_t count_valuations(const TypeEnv& shape, std::size_t max_size, bool allow_empty) {
  const std::vector<std::string> objects = shape_objects(shape);
  const std::size_t lo = allow_empty ? 0 : 1;
  if (lo > max_size) return 0;
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < objects.size(); ++i) index[objects[i]] = i;
  std::vector<std::size_t> sizes(objects.size(), lo);
  std::uint64_t total = 0;
  for (;;) {
    std::uint64_t prod = 1;
    for (const auto& [x, ty] : shape) prod <<= sizes[index[ty.first.name()]] * sizes[index[ty.second.name()]];
    total += prod;
    std::size_t k = objects.size();
    while (k > 0 && ++sizes[k - 1] > max_size) sizes[--k] = lo;
    if (k == 0) break;
  }
  return total;
}

// Valuation files ----------------------------------------------------------------
//
//   A = 2                      carrier sizes
//   S : D -> A = {(0,1),(1,0)} relations, pairs as (source, target) indices

inline Valuation parse_valuation(std::string_view text) {
  Valuation v;
  std::vector<std::tuple<std::size_t, std::string, std::string, std::string, std::vector<std::pair<std::size_t, std::size_t>>>>
      pending;
  for (const auto& [lineno, line] : content_lines(text)) {
    try {
      detail::Parser p(line);
      if (p.peek().kind != detail::Token::Kind::Ident) p.fail("an object or variable name");
      std::string name = p.take().text;
      auto number = [&] {
        if (p.peek().kind != detail::Token::Kind::Number) p.fail("a number");
        return static_cast<std::size_t>(std::stoull(p.take().text));
      };
      if (p.accept("=")) {
        const std::size_t n = number();
        p.expect_end();
        if (v.carriers.contains(name)) throw DuplicateBinding(name);
        v.carriers.emplace(std::move(name), n);
        continue;
      }
      p.expect(":");
      std::string from = p.object_name();
      p.expect("->");
      std::string to = p.object_name();
      p.expect("=");
      p.expect("{");
      std::vector<std::pair<std::size_t, std::size_t>> pairs;
      if (!p.peek().is("}")) {
        do {
          p.expect("(");
          const std::size_t i = number();
          p.expect(",");
          const std::size_t j = number();
          p.expect(")");
          pairs.emplace_back(i, j);
        } while (p.accept(","));
      }
      p.expect("}");
      p.expect_end();
      pending.emplace_back(lineno, std::move(name), std::move(from), std::move(to), std::move(pairs));
    } catch (const ParseError& e) {
      SourceSpan span = e.span();
      span.line = lineno;
      throw ParseError(span, e.expected(), e.found());
    }
  }
  for (auto& [lineno, x, from, to, pairs] : pending) {
    if (v.rels.contains(x)) throw DuplicateBinding(x);
    Rel r(v.carrier(from), v.carrier(to));
    for (auto [i, j] : pairs) r.insert(i, j);
    v.bind(x, from, to, std::move(r));
  }
  return v;
}

inline std::string render(const Valuation& v) {
  std::string s;
  for (const auto& [o, n] : v.carriers) s += o + " = " + std::to_string(n) + "\n";
  for (const auto& [x, ty] : v.env) {
    auto it = v.rels.find(x);
    if (it == v.rels.end()) continue;
    s += x + " : " + ty.first.str() + " -> " + ty.second.str() + " = " + render(it->second) + "\n";
  }
  return s;
}

}  // namespace tycl
