#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>

namespace tycl {

/// Residuated-lattice signature. Top and Zero are the bounds of bounded
/// residuated lattices.
enum class RmOp : std::uint8_t { Var = 1, Unit, Zero, Top, Dot, LDiv, RDiv, Join, Meet };

/// Kleene-algebra signature.
enum class KaOp : std::uint8_t { Var = 1, Zero, One, Dot, Plus, Star };

constexpr int arity(RmOp op) noexcept {
  switch (op) {
    case RmOp::Var:
    case RmOp::Unit:
    case RmOp::Zero:
    case RmOp::Top: return 0;
    default: return 2;
  }
}

constexpr int arity(KaOp op) noexcept {
  switch (op) {
    case KaOp::Var:
    case KaOp::Zero:
    case KaOp::One: return 0;
    case KaOp::Star: return 1;
    default: return 2;
  }
}

/// Immutable term tree over the operator set `Op`, with the same keyed
/// serialisation as Formula (tag byte, children, NUL-terminated names).
template <class Op>
class Term {
 public:
  using op_type = Op;

  static Term var(std::string name) {
    if (name.empty() || name.find('\0') != std::string::npos)
      throw std::invalid_argument("Term: variable names must be non-empty and NUL-free");
    auto n = make(Op::Var);
    n->key += name;
    n->key.push_back('\0');
    n->name = std::move(name);
    return Term(std::move(n));
  }

  static Term constant(Op op) {
    if (op == Op::Var || arity(op) != 0) throw std::invalid_argument("Term::constant: not a constant");
    return Term(make(op));
  }

  static Term unary(Op op, Term a) {
    if (arity(op) != 1) throw std::invalid_argument("Term::unary: arity mismatch");
    auto n = make(op);
    n->leaves = a.leaves();
    n->key += a.key();
    n->lhs = std::move(a);
    return Term(std::move(n));
  }

  static Term binary(Op op, Term a, Term b) {
    if (arity(op) != 2) throw std::invalid_argument("Term::binary: arity mismatch");
    auto n = make(op);
    n->leaves = a.leaves() + b.leaves();
    n->key.reserve(1 + a.key().size() + b.key().size());
    n->key += a.key();
    n->key += b.key();
    n->lhs = std::move(a);
    n->rhs = std::move(b);
    return Term(std::move(n));
  }

  Op op() const noexcept { return node_->op; }
  bool is(Op op) const noexcept { return node_->op == op; }
  const std::string& name() const noexcept { return node_->name; }
  const Term& lhs() const noexcept { return node_->lhs; }
  const Term& rhs() const noexcept { return node_->rhs; }
  std::uint32_t leaves() const noexcept { return node_->leaves; }
  const std::string& key() const noexcept { return node_->key; }

  friend bool operator==(const Term& a, const Term& b) noexcept {
    return a.node_ == b.node_ || a.node_->key == b.node_->key;
  }
  friend std::strong_ordering operator<=>(const Term& a, const Term& b) noexcept {
    return a.node_->key <=> b.node_->key;
  }

 private:
  struct Node;

  Term() = default;
  explicit Term(std::shared_ptr<const Node> n) noexcept : node_(std::move(n)) {}

  static std::shared_ptr<Node> make(Op op) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->key.push_back(static_cast<char>(op));
    return n;
  }

  std::shared_ptr<const Node> node_;
};

template <class Op>
struct Term<Op>::Node {
  Op op{};
  std::string name;
  Term lhs, rhs;
  std::string key;
  std::uint32_t leaves = 1;
};

using RmTerm = Term<RmOp>;
using KaTerm = Term<KaOp>;

namespace rm {
inline RmTerm var(std::string x) { return RmTerm::var(std::move(x)); }
inline RmTerm unit() { return RmTerm::constant(RmOp::Unit); }
inline RmTerm zero() { return RmTerm::constant(RmOp::Zero); }
inline RmTerm top() { return RmTerm::constant(RmOp::Top); }
inline RmTerm dot(RmTerm a, RmTerm b) { return RmTerm::binary(RmOp::Dot, std::move(a), std::move(b)); }
/// a \ b
inline RmTerm ldiv(RmTerm a, RmTerm b) { return RmTerm::binary(RmOp::LDiv, std::move(a), std::move(b)); }
/// a / b
inline RmTerm rdiv(RmTerm a, RmTerm b) { return RmTerm::binary(RmOp::RDiv, std::move(a), std::move(b)); }
inline RmTerm join(RmTerm a, RmTerm b) { return RmTerm::binary(RmOp::Join, std::move(a), std::move(b)); }
inline RmTerm meet(RmTerm a, RmTerm b) { return RmTerm::binary(RmOp::Meet, std::move(a), std::move(b)); }

/// True when the term only uses the residuated-monoid operators.
inline bool is_monoid_term(const RmTerm& t) {
  switch (t.op()) {
    case RmOp::Var:
    case RmOp::Unit: return true;
    case RmOp::Dot:
    case RmOp::LDiv:
    case RmOp::RDiv: return is_monoid_term(t.lhs()) && is_monoid_term(t.rhs());
    default: return false;
  }
}
}  // namespace rm

namespace ka {
inline KaTerm var(std::string x) { return KaTerm::var(std::move(x)); }
inline KaTerm zero() { return KaTerm::constant(KaOp::Zero); }
inline KaTerm one() { return KaTerm::constant(KaOp::One); }
inline KaTerm dot(KaTerm a, KaTerm b) { return KaTerm::binary(KaOp::Dot, std::move(a), std::move(b)); }
inline KaTerm plus(KaTerm a, KaTerm b) { return KaTerm::binary(KaOp::Plus, std::move(a), std::move(b)); }
inline KaTerm star(KaTerm a) { return KaTerm::unary(KaOp::Star, std::move(a)); }
}  // namespace ka

}  // namespace tycl
