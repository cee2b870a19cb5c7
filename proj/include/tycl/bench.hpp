#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "formula.hpp"
#include "prover.hpp"
#include "rng.hpp"
#include "syntax.hpp"
#include "typecheck.hpp"

namespace tycl {

enum class Fragment { MLL, MALL };

struct GenParams {
  std::uint32_t leaves = 1;
  std::uint32_t var_pool = 1;
  Fragment fragment = Fragment::MLL;
  std::uint64_t seed = 0;
};

inline void validate(const GenParams& p) {
  if (p.leaves < 1) throw std::invalid_argument("leaves must be at least 1");
  if (p.var_pool < 1) throw std::invalid_argument("var_pool must be at least 1");
}

namespace detail {

/// Uniform binary tree with `leaves` leaves (Remy's algorithm). Node 0 is
/// the first leaf; children are -1 at leaves.
struct Shape {
  std::vector<int> left, right, parent;
  int root = 0;
};

inline Shape remy(std::uint32_t leaves, SplitMix64& rng) {
  Shape s;
  s.left.push_back(-1);
  s.right.push_back(-1);
  s.parent.push_back(-1);
  for (std::uint32_t i = 1; i < leaves; ++i) {
    const int x = static_cast<int>(rng.below(s.left.size()));
    const int inner = static_cast<int>(s.left.size());
    const int leaf = inner + 1;
    s.left.push_back(-1);
    s.right.push_back(-1);
    s.parent.push_back(s.parent[x]);
    s.left.push_back(-1);
    s.right.push_back(-1);
    s.parent.push_back(inner);
    if (const int p = s.parent[x]; p < 0) {
      s.root = inner;
    } else if (s.left[p] == x) {
      s.left[p] = inner;
    } else {
      s.right[p] = inner;
    }
    s.parent[x] = inner;
    if (rng.coin()) {
      s.left[inner] = x;
      s.right[inner] = leaf;
    } else {
      s.left[inner] = leaf;
      s.right[inner] = x;
    }
  }
  return s;
}

class SequentGenerator {
 public:
  SequentGenerator(const GenParams& p, SplitMix64& rng) : p_(p), rng_(rng) {}

  Formula leaf(Connective parent) {
    for (;;) {
      const std::uint64_t k = rng_.below(2 * std::uint64_t{p_.var_pool} + 2);
      if (k < p_.var_pool) return Formula::atom("x" + std::to_string(k + 1));
      if (k < 2 * std::uint64_t{p_.var_pool}) return Formula::dual("x" + std::to_string(k - p_.var_pool + 1));
      if (k == 2 * std::uint64_t{p_.var_pool}) {
        if (parent == Connective::Tensor) continue;
        return Formula::one();
      }
      if (parent == Connective::Par) continue;
      return Formula::bot();
    }
  }

  Connective connective() {
    static constexpr Connective kMll[] = {Connective::Tensor, Connective::Par};
    static constexpr Connective kMall[] = {Connective::Tensor, Connective::Par, Connective::Plus, Connective::With};
    if (p_.fragment == Fragment::MLL) return kMll[rng_.below(2)];
    return kMall[rng_.below(4)];
  }

  /// Connectives and leaves are drawn in pre-order.
  Formula build(const Shape& s, int node, Connective parent) {
    if (s.left[node] < 0) return leaf(parent);
    const Connective c = connective();
    Formula a = build(s, s.left[node], c);
    Formula b = build(s, s.right[node], c);
    return Formula::binary(c, std::move(a), std::move(b));
  }

  Formula formula(std::uint32_t leaves) {
    const Shape s = remy(leaves, rng_);
    // Connective::One stands for "no parent": a lone leaf is unconstrained
    return build(s, s.root, Connective::One);
  }

 private:
  const GenParams& p_;
  SplitMix64& rng_;
};

}  // namespace detail

/// Random sequent with exactly p.leaves leaves over x1..xv, in normal form
/// for the multiplicative units (no 1 under a tensor, no bot under a par).
///
/// Draw order: list length L uniform in [1, leaves]; L-1 distinct cut points
/// among 1..leaves-1 (partial Fisher-Yates) splitting the leaves into parts;
/// then per formula, a uniform tree shape (Remy), followed by connectives and
/// leaves in pre-order. A leaf is uniform over the 2v+2 choices
/// x1..xv, ~x1..~xv, 1, bot and is redrawn when it breaks the unit normal
/// form. MALL draws each connective uniformly from *, |, +, &; top and 0 are
/// never produced.
inline Sequent gen_sequent(const GenParams& p, SplitMix64& rng) {
  validate(p);
  const auto length = static_cast<std::uint32_t>(rng.between(1, p.leaves));
  std::vector<std::uint32_t> points(p.leaves - 1);
  for (std::uint32_t i = 0; i < points.size(); ++i) points[i] = i + 1;
  for (std::uint32_t i = 0; i + 1 < length; ++i) {
    const auto j = i + static_cast<std::uint32_t>(rng.below(points.size() - i));
    std::swap(points[i], points[j]);
  }
  std::vector<std::uint32_t> cuts(points.begin(), points.begin() + (length - 1));
  std::sort(cuts.begin(), cuts.end());
  cuts.push_back(p.leaves);

  detail::SequentGenerator g(p, rng);
  Sequent s;
  std::uint32_t prev = 0;
  for (auto c : cuts) {
    s.push_back(g.formula(c - prev));
    prev = c;
  }
  return s;
}

inline Sequent gen_sequent(const GenParams& p) {
  SplitMix64 rng(p.seed);
  return gen_sequent(p, rng);
}

struct BenchRecord {
  std::uint64_t seed = 0;  ///< regenerates the sequent via SplitMix64(seed)
  std::size_t index = 0;
  std::string sequent;
  bool pruned_at_root = false;
  bool provable = false;
  std::uint64_t time_unpruned_ns = 0;
  std::uint64_t time_pruned_ns = 0;
  std::uint64_t nodes_unpruned = 0;
  std::uint64_t nodes_pruned = 0;
  bool budget_exceeded = false;
  bool verdicts_agree = true;
};

/// Record i uses the i-th output of SplitMix64(p.seed) as its own seed.
/// Each sequent is searched without and then with pruning, each with a
/// fresh memo; times are the minimum over `repeat` runs.
inline std::vector<BenchRecord> run_bench(const GenParams& p, std::size_t count, std::optional<std::uint64_t> budget = {},
                                          unsigned repeat = 1) {
  validate(p);
  if (count < 1) throw std::invalid_argument("count must be at least 1");
  if (repeat < 1) throw std::invalid_argument("repeat must be at least 1");
  SplitMix64 master(p.seed);
  std::vector<BenchRecord> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    BenchRecord r;
    r.seed = master.next();
    r.index = i;
    SplitMix64 rng(r.seed);
    const Sequent seq = gen_sequent(p, rng);
    r.sequent = render(seq);

    auto timed = [&](bool prune, std::uint64_t& ns) {
      SearchConfig cfg;
      cfg.prune = prune;
      cfg.node_budget = budget;
      SearchResult res;
      for (unsigned k = 0; k < repeat; ++k) {
        const auto t0 = std::chrono::steady_clock::now();
        res = prove(seq, cfg);
        const auto t1 = std::chrono::steady_clock::now();
        const auto d = static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count());
        ns = k == 0 ? d : std::min(ns, d);
      }
      return res;
    };
    const SearchResult off = timed(false, r.time_unpruned_ns);
    const SearchResult on = timed(true, r.time_pruned_ns);
    r.nodes_unpruned = off.stats.nodes_expanded;
    r.nodes_pruned = on.stats.nodes_expanded;
    r.pruned_at_root = on.stats.pruned_at_root;
    r.budget_exceeded = off.verdict == Verdict::BudgetExceeded || on.verdict == Verdict::BudgetExceeded;
    if (!r.budget_exceeded) {
      r.provable = on.provable();
      r.verdicts_agree = off.provable() == on.provable();
    }
    out.push_back(std::move(r));
  }
  return out;
}

inline std::string csv_quote(const std::string& s) {
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

inline void write_csv(std::ostream& os, const std::vector<BenchRecord>& records) {
  os << "seed,index,sequent,pruned_at_root,provable,time_unpruned_ns,time_pruned_ns,nodes_unpruned,nodes_pruned,"
        "budget_exceeded\n";
  for (const auto& r : records) {
    os << r.seed << ',' << r.index << ',' << csv_quote(r.sequent) << ',' << r.pruned_at_root << ',' << r.provable
       << ',' << r.time_unpruned_ns << ',' << r.time_pruned_ns << ',' << r.nodes_unpruned << ',' << r.nodes_pruned
       << ',' << r.budget_exceeded << '\n';
  }
}

struct BenchSummary {
  std::size_t total = 0;
  std::size_t budget_exceeded = 0;
  std::size_t measured = 0;  ///< total - budget_exceeded
  std::size_t pruned_at_root = 0;
  std::size_t provable = 0;
  std::size_t verdict_mismatches = 0;
  std::size_t node_violations = 0;  ///< records with nodes_pruned > nodes_unpruned
  std::uint64_t time_unpruned_ns = 0;
  std::uint64_t time_pruned_ns = 0;

  double rejection_rate() const { return measured ? static_cast<double>(pruned_at_root) / measured : 0.0; }
};

inline BenchSummary bench_summary(const std::vector<BenchRecord>& records) {
  BenchSummary s;
  s.total = records.size();
  for (const auto& r : records) {
    if (r.budget_exceeded) {
      ++s.budget_exceeded;
      continue;
    }
    ++s.measured;
    s.pruned_at_root += r.pruned_at_root;
    s.provable += r.provable;
    s.verdict_mismatches += !r.verdicts_agree;
    s.node_violations += r.nodes_pruned > r.nodes_unpruned;
    s.time_unpruned_ns += r.time_unpruned_ns;
    s.time_pruned_ns += r.time_pruned_ns;
  }
  return s;
}

class EmptyInput : public std::invalid_argument {
 public:
  EmptyInput() : std::invalid_argument("summarize: no records") {}
};

/// Cumulative fraction of sequents solved within each time bound.
struct Distribution {
  std::vector<double> bounds_s;
  std::vector<double> unpruned;
  std::vector<double> pruned;
  std::size_t count = 0;  ///< records counted by both columns
};

/// Buckets are 10 per decade from 1e-6 s to 1e2 s. Budget-exceeded records
/// count as never solved.
inline Distribution summarize(const std::vector<BenchRecord>& records) {
  if (records.empty()) throw EmptyInput();
  Distribution d;
  d.count = records.size();
  for (int k = -60; k <= 20; ++k) d.bounds_s.push_back(std::pow(10.0, k / 10.0));
  auto column = [&](auto time_of) {
    std::vector<double> col;
    for (double b : d.bounds_s) {
      std::size_t n = 0;
      for (const auto& r : records)
        if (!r.budget_exceeded && static_cast<double>(time_of(r)) * 1e-9 <= b) ++n;
      col.push_back(static_cast<double>(n) / static_cast<double>(records.size()));
    }
    return col;
  };
  d.unpruned = column([](const BenchRecord& r) { return r.time_unpruned_ns; });
  d.pruned = column([](const BenchRecord& r) { return r.time_pruned_ns; });
  return d;
}

inline void write_csv(std::ostream& os, const Distribution& d) {
  os << "bound_s,unpruned,pruned\n";
  for (std::size_t i = 0; i < d.bounds_s.size(); ++i) os << d.bounds_s[i] << ',' << d.unpruned[i] << ',' << d.pruned[i] << '\n';
}

}  // namespace tycl
