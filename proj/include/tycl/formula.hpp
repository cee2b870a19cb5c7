#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tycl {

/// Constructors of cyclic MALL formulas. The numeric value doubles as the tag
/// byte of the serialisation used for canonical ordering.
enum class Connective : std::uint8_t {
  Atom = 1,
  Dual = 2,
  One = 3,
  Bot = 4,
  Zero = 5,
  Top = 6,
  Tensor = 7,
  Par = 8,
  Plus = 9,
  With = 10,
};

constexpr bool is_binary(Connective c) noexcept {
  return c == Connective::Tensor || c == Connective::Par || c == Connective::Plus ||
         c == Connective::With;
}

/// Immutable formula tree with shared structure.
///
/// Every node carries its serialisation ("key"): the tag byte of its
/// connective followed by the keys of its children left to right; atoms and
/// duals append their name bytes and a terminating NUL. Comparing keys
/// bytewise gives the fixed total order used for canonical rotations, and
/// key equality is structural equality.
class Formula {
 public:
  static Formula atom(std::string name) { return leaf(Connective::Atom, std::move(name)); }
  static Formula dual(std::string name) { return leaf(Connective::Dual, std::move(name)); }
  static Formula one() { return leaf(Connective::One, {}); }
  static Formula bot() { return leaf(Connective::Bot, {}); }
  static Formula zero() { return leaf(Connective::Zero, {}); }
  static Formula top() { return leaf(Connective::Top, {}); }
  static Formula tensor(Formula a, Formula b) { return binary(Connective::Tensor, std::move(a), std::move(b)); }
  static Formula par(Formula a, Formula b) { return binary(Connective::Par, std::move(a), std::move(b)); }
  static Formula plus(Formula a, Formula b) { return binary(Connective::Plus, std::move(a), std::move(b)); }
  static Formula with(Formula a, Formula b) { return binary(Connective::With, std::move(a), std::move(b)); }

  static Formula binary(Connective c, Formula a, Formula b);

  Connective kind() const noexcept;
  /// Variable name; empty for anything but Atom and Dual.
  const std::string& name() const noexcept;
  const Formula& lhs() const noexcept;
  const Formula& rhs() const noexcept;
  std::uint32_t leaves() const noexcept;
  const std::string& key() const noexcept;
  bool has_additive_constants() const noexcept;

  bool is(Connective c) const noexcept { return kind() == c; }
  /// Address of the shared node; equal addresses imply equal formulas.
  const void* identity() const noexcept { return node_.get(); }

  friend bool operator==(const Formula& a, const Formula& b) noexcept {
    return a.node_ == b.node_ || a.key() == b.key();
  }
  friend std::strong_ordering operator<=>(const Formula& a, const Formula& b) noexcept {
    return a.key() <=> b.key();
  }

 private:
  struct Node;

  Formula() = default;
  explicit Formula(std::shared_ptr<const Node> n) noexcept : node_(std::move(n)) {}

  static Formula leaf(Connective c, std::string name);

  std::shared_ptr<const Node> node_;
};

struct Formula::Node {
  Connective kind = Connective::One;
  std::string name;
  Formula lhs, rhs;
  std::string key;
  std::uint32_t leaves = 1;
  bool additive_constants = false;
};

inline Connective Formula::kind() const noexcept { return node_->kind; }
inline const std::string& Formula::name() const noexcept { return node_->name; }
inline const Formula& Formula::lhs() const noexcept { return node_->lhs; }
inline const Formula& Formula::rhs() const noexcept { return node_->rhs; }
inline std::uint32_t Formula::leaves() const noexcept { return node_->leaves; }
inline const std::string& Formula::key() const noexcept { return node_->key; }
inline bool Formula::has_additive_constants() const noexcept { return node_->additive_constants; }

inline Formula Formula::binary(Connective c, Formula a, Formula b) {
  if (!is_binary(c)) throw std::invalid_argument("Formula::binary: not a binary connective");
  auto n = std::make_shared<Node>();
  n->kind = c;
  n->leaves = a.leaves() + b.leaves();
  n->additive_constants = a.has_additive_constants() || b.has_additive_constants();
  n->key.reserve(1 + a.key().size() + b.key().size());
  n->key.push_back(static_cast<char>(c));
  n->key += a.key();
  n->key += b.key();
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return Formula(std::move(n));
}

inline Formula Formula::leaf(Connective c, std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = c;
  n->additive_constants = c == Connective::Zero || c == Connective::Top;
  n->key.push_back(static_cast<char>(c));
  if (c == Connective::Atom || c == Connective::Dual) {
    if (name.empty() || name.find('\0') != std::string::npos)
      throw std::invalid_argument("Formula: variable names must be non-empty and NUL-free");
    n->key += name;
    n->key.push_back('\0');
  }
  n->name = std::move(name);
  return Formula(std::move(n));
}

/// One-sided sequent: an ordered list of formulas, read up to rotation.
using Sequent = std::vector<Formula>;

inline std::uint32_t leaf_count(const Sequent& s) noexcept {
  std::uint32_t n = 0;
  for (const auto& f : s) n += f.leaves();
  return n;
}

inline bool has_additive_constants(const Sequent& s) noexcept {
  for (const auto& f : s)
    if (f.has_additive_constants()) return true;
  return false;
}

/// True iff no additive connective or constant occurs.
inline bool is_multiplicative(const Formula& f) noexcept {
  switch (f.kind()) {
    case Connective::Zero:
    case Connective::Top:
    case Connective::Plus:
    case Connective::With: return false;
    case Connective::Tensor:
    case Connective::Par: return is_multiplicative(f.lhs()) && is_multiplicative(f.rhs());
    default: return true;
  }
}

inline bool is_multiplicative(const Sequent& s) noexcept {
  for (const auto& f : s)
    if (!is_multiplicative(f)) return false;
  return true;
}

}  // namespace tycl
