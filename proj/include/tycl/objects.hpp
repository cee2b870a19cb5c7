#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

namespace tycl {

/// An object of the typing discipline: a named constant, or a metavariable
/// standing for an unknown object.
class ObjectTerm {
 public:
  static ObjectTerm constant(std::string name) { return ObjectTerm(std::move(name)); }
  static ObjectTerm meta(std::uint32_t id) { return ObjectTerm(id); }

  bool is_constant() const noexcept { return std::holds_alternative<std::string>(v_); }
  const std::string& name() const { return std::get<std::string>(v_); }
  std::uint32_t id() const { return std::get<std::uint32_t>(v_); }

  std::string str() const { return is_constant() ? name() : "?" + std::to_string(id()); }

  friend bool operator==(const ObjectTerm&, const ObjectTerm&) = default;
  friend auto operator<=>(const ObjectTerm&, const ObjectTerm&) = default;

 private:
  explicit ObjectTerm(std::string n) : v_(std::move(n)) {}
  explicit ObjectTerm(std::uint32_t id) : v_(id) {}
  std::variant<std::string, std::uint32_t> v_;
};

/// Type environment: variable -> (source object, target object).
using TypeEnv = std::map<std::string, std::pair<ObjectTerm, ObjectTerm>, std::less<>>;

/// Union-find over object slots with path compression and union by rank.
/// A class holds at most one constant; merging two classes holding distinct
/// constants clears `consistent()` instead of failing loudly, so callers can
/// treat inconsistency as an ordinary answer.
class Unifier {
 public:
  using Id = std::uint32_t;

  Id fresh() {
    const Id id = static_cast<Id>(slots_.size());
    slots_.push_back({id, kNone, 0});
    return id;
  }

  void reserve(std::size_t n) { slots_.reserve(n); }

  /// Forgets every slot but keeps the storage.
  void clear() {
    slots_.clear();
    names_.clear();
    constants_.clear();
    consistent_ = true;
  }

  /// Slot for a named constant; the same name always yields the same slot.
  Id constant(std::string_view name) {
    if (auto it = constants_.find(name); it != constants_.end()) return it->second;
    const Id id = fresh();
    const auto idx = static_cast<std::uint32_t>(names_.size());
    names_.emplace_back(name);
    slots_[id].constant = idx;
    constants_.emplace(names_.back(), id);
    return id;
  }

  Id find(Id x) {
    Id root = x;
    while (slots_[root].parent != root) root = slots_[root].parent;
    while (slots_[x].parent != root) {
      const Id next = slots_[x].parent;
      slots_[x].parent = root;
      x = next;
    }
    return root;
  }

  Id find(Id x) const {
    while (slots_[x].parent != x) x = slots_[x].parent;
    return x;
  }

  /// Merges the classes of a and b; returns false on a constant clash.
  bool unify(Id a, Id b) {
    a = find(a);
    b = find(b);
    if (a == b) return true;
    const std::uint32_t ca = slots_[a].constant, cb = slots_[b].constant;
    if (ca != kNone && cb != kNone) {
      consistent_ = false;
      return false;
    }
    if (slots_[a].rank < slots_[b].rank) std::swap(a, b);
    slots_[b].parent = a;
    if (slots_[a].rank == slots_[b].rank) ++slots_[a].rank;
    if (slots_[a].constant == kNone) slots_[a].constant = ca != kNone ? ca : cb;
    return true;
  }

  bool same(Id a, Id b) { return find(a) == find(b); }
  bool same(Id a, Id b) const { return find(a) == find(b); }
  bool consistent() const noexcept { return consistent_; }
  std::size_t size() const noexcept { return slots_.size(); }

  /// The constant of x's class, if any.
  std::optional<std::string> constant_of(Id x) const {
    const std::uint32_t c = slots_[find(x)].constant;
    if (c == kNone) return std::nullopt;
    return names_[c];
  }

  /// The class of x as an ObjectTerm: its constant, or a metavariable named
  /// by the class representative.
  ObjectTerm resolve(Id x) const {
    const Id r = find(x);
    if (slots_[r].constant != kNone) return ObjectTerm::constant(names_[slots_[r].constant]);
    return ObjectTerm::meta(r);
  }

 private:
  static constexpr std::uint32_t kNone = ~std::uint32_t{0};

  struct Slot {
    Id parent;
    std::uint32_t constant;
    std::uint8_t rank;
  };

  std::vector<Slot> slots_;
  std::vector<std::string> names_;
  std::map<std::string, Id, std::less<>> constants_;
  bool consistent_ = true;
};

}  // namespace tycl
