#pragma once

#include "terms.hpp"

namespace tycl {

/// Normal form under the annihilator rules
///   a+0 -> a,  0+a -> a,  0.a -> 0,  a.0 -> 0,  0* -> 1
/// applied innermost-first. The result is 0 or has no 0 subterm.
inline KaTerm clean(const KaTerm& t) {
  switch (t.op()) {
    case KaOp::Var:
    case KaOp::Zero:
    case KaOp::One: return t;
    case KaOp::Star: {
      KaTerm a = clean(t.lhs());
      if (a.is(KaOp::Zero)) return ka::one();
      return a == t.lhs() ? t : ka::star(std::move(a));
    }
    case KaOp::Plus: {
      KaTerm a = clean(t.lhs()), b = clean(t.rhs());
      if (b.is(KaOp::Zero)) return a;
      if (a.is(KaOp::Zero)) return b;
      return a == t.lhs() && b == t.rhs() ? t : ka::plus(std::move(a), std::move(b));
    }
    case KaOp::Dot: {
      KaTerm a = clean(t.lhs());
      if (a.is(KaOp::Zero)) return a;
      KaTerm b = clean(t.rhs());
      if (b.is(KaOp::Zero)) return b;
      return a == t.lhs() && b == t.rhs() ? t : ka::dot(std::move(a), std::move(b));
    }
  }
  return t;
}

/// A term is strict when its normal form is not 0.
inline bool is_strict(const KaTerm& t) { return !clean(t).is(KaOp::Zero); }

}  // namespace tycl
