#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "formula.hpp"
#include "terms.hpp"

namespace tycl {

/// Linear negation. Binary connectives are mirrored: (a*b)~ = b~ | a~, and
/// likewise for the additives, (a+b)~ = b~ & a~.
inline Formula negate(const Formula& f) {
  switch (f.kind()) {
    case Connective::Atom: return Formula::dual(f.name());
    case Connective::Dual: return Formula::atom(f.name());
    case Connective::One: return Formula::bot();
    case Connective::Bot: return Formula::one();
    case Connective::Zero: return Formula::top();
    case Connective::Top: return Formula::zero();
    case Connective::Tensor: return Formula::par(negate(f.rhs()), negate(f.lhs()));
    case Connective::Par: return Formula::tensor(negate(f.rhs()), negate(f.lhs()));
    case Connective::Plus: return Formula::with(negate(f.rhs()), negate(f.lhs()));
    case Connective::With: return Formula::plus(negate(f.rhs()), negate(f.lhs()));
  }
  throw std::logic_error("negate: unknown connective");
}

/// (a;l)~ = l~;a~
inline Sequent negate_list(const Sequent& l) {
  Sequent out;
  out.reserve(l.size());
  for (auto it = l.rbegin(); it != l.rend(); ++it) out.push_back(negate(*it));
  return out;
}

class IndexOutOfRange : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// [l_k .. l_end ; l_0 .. l_{k-1}]
inline Sequent rotate(const Sequent& l, std::size_t k) {
  if (k > l.size())
    throw IndexOutOfRange("rotate: shift " + std::to_string(k) + " exceeds length " +
                          std::to_string(l.size()));
  Sequent out;
  out.reserve(l.size());
  out.insert(out.end(), l.begin() + static_cast<std::ptrdiff_t>(k), l.end());
  out.insert(out.end(), l.begin(), l.begin() + static_cast<std::ptrdiff_t>(k));
  return out;
}

/// Start index of the lexicographically least rotation of any sequence of
/// totally ordered items (Booth's algorithm).
template <class Seq, class At>
std::size_t least_rotation_by(std::size_t n, At&& at) {
  if (n < 2) return 0;
  std::vector<std::ptrdiff_t> fail(2 * n, -1);
  std::size_t k = 0;
  for (std::size_t j = 1; j < 2 * n; ++j) {
    const auto& sj = at(j % n);
    std::ptrdiff_t i = fail[j - k - 1];
    while (i != -1 && sj != at((k + static_cast<std::size_t>(i) + 1) % n)) {
      if (sj < at((k + static_cast<std::size_t>(i) + 1) % n)) k = j - static_cast<std::size_t>(i) - 1;
      i = fail[static_cast<std::size_t>(i)];
    }
    if (i == -1 && sj != at(k % n)) {
      if (sj < at(k % n)) k = j;
      fail[j - k] = -1;
    } else {
      fail[j - k] = i + 1;
    }
  }
  return k % n;
}

/// Least rotation of a sequent, comparing items by their serialisation.
inline std::size_t least_rotation(const Sequent& s) {
  return least_rotation_by<Sequent>(s.size(), [&](std::size_t i) -> const std::string& { return s[i].key(); });
}

struct CanonicalRotation {
  Sequent sequent;
  std::size_t shift = 0;  ///< sequent == rotate(input, shift)
};

inline CanonicalRotation canonical_rotation(const Sequent& l) {
  const std::size_t k = least_rotation(l);
  return {rotate(l, k), k};
}

/// Byte key of the canonical rotation; equal for exactly the rotations of a ring.
inline std::string canonical_key(const Sequent& l) {
  const std::size_t n = l.size(), k = least_rotation(l);
  std::size_t len = n;
  for (const auto& f : l) len += f.key().size();
  std::string key;
  key.reserve(len);
  for (std::size_t i = 0; i < n; ++i) {
    key += l[(k + i) % n].key();
    key.push_back('\xff');
  }
  return key;
}

enum class Polarity { Input, Output, Neither };

/// Input/output classification:
///   i ::= x~ | bot | 0 | i|i | i*o | o*i | i+i | i&i
///   o ::= x  | 1   | top | o*o | i|o | o|i | o+o | o&o
inline Polarity polarity(const Formula& f) {
  using P = Polarity;
  switch (f.kind()) {
    case Connective::Atom:
    case Connective::One:
    case Connective::Top: return P::Output;
    case Connective::Dual:
    case Connective::Bot:
    case Connective::Zero: return P::Input;
    default: break;
  }
  const P a = polarity(f.lhs());
  if (a == P::Neither) return P::Neither;
  const P b = polarity(f.rhs());
  if (b == P::Neither) return P::Neither;
  switch (f.kind()) {
    case Connective::Tensor:
      if (a == P::Output && b == P::Output) return P::Output;
      return a != b ? P::Input : P::Neither;
    case Connective::Par:
      if (a == P::Input && b == P::Input) return P::Input;
      return a != b ? P::Output : P::Neither;
    default: return a == b ? a : P::Neither;
  }
}

/// Residuated-lattice terms as output formulas:
///   <a.b> = <a>*<b>   <a/b> = <a> | <b>~   <a\b> = <a>~ | <b>
///   <a\/b> = <a>+<b>  <a/\b> = <a>&<b>     x, 1, top, 0 map to themselves.
inline Formula encode_rm(const RmTerm& t) {
  switch (t.op()) {
    case RmOp::Var: return Formula::atom(t.name());
    case RmOp::Unit: return Formula::one();
    case RmOp::Zero: return Formula::zero();
    case RmOp::Top: return Formula::top();
    case RmOp::Dot: return Formula::tensor(encode_rm(t.lhs()), encode_rm(t.rhs()));
    case RmOp::RDiv: return Formula::par(encode_rm(t.lhs()), negate(encode_rm(t.rhs())));
    case RmOp::LDiv: return Formula::par(negate(encode_rm(t.lhs())), encode_rm(t.rhs()));
    case RmOp::Join: return Formula::plus(encode_rm(t.lhs()), encode_rm(t.rhs()));
    case RmOp::Meet: return Formula::with(encode_rm(t.lhs()), encode_rm(t.rhs()));
  }
  throw std::logic_error("encode_rm: unknown operator");
}

class NotOutput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Inverse of encode_rm on output formulas.
inline RmTerm decode_output(const Formula& f) {
  if (polarity(f) != Polarity::Output) throw NotOutput("decode_output: formula is not an output formula");
  switch (f.kind()) {
    case Connective::Atom: return rm::var(f.name());
    case Connective::One: return rm::unit();
    case Connective::Top: return rm::top();
    case Connective::Tensor: return rm::dot(decode_output(f.lhs()), decode_output(f.rhs()));
    case Connective::Plus: return rm::join(decode_output(f.lhs()), decode_output(f.rhs()));
    case Connective::With: return rm::meet(decode_output(f.lhs()), decode_output(f.rhs()));
    case Connective::Par:
      if (polarity(f.lhs()) == Polarity::Input)
        return rm::ldiv(decode_output(negate(f.lhs())), decode_output(f.rhs()));
      return rm::rdiv(decode_output(f.lhs()), decode_output(negate(f.rhs())));
    default: break;
  }
  throw std::logic_error("decode_output: unreachable");
}

}  // namespace tycl
