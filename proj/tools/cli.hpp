#pragma once

// Command-line frontend. `run_cli` takes the arguments after the program
// name and returns the exit status:
//   0 positive verdict, 1 negative verdict, 2 input or usage error, 3 budget.

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "tycl/tycl.hpp"

namespace tycl::cli {

enum ExitStatus : int { kPositive = 0, kNegative = 1, kUsage = 2, kBudget = 3 };

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline TypeEnv read_env(const std::string& path) { return parse_env(read_file(path)); }

/// Names every class of an Mgu: its constant if it has one, otherwise ?k in
/// order of first appearance.
class ClassNames {
 public:
  explicit ClassNames(const Mgu& m) : m_(m) {}

  std::string operator()(Unifier::Id slot) {
    const ObjectTerm o = m_.resolve(slot);
    if (o.is_constant()) return o.name();
    auto [it, inserted] = metas_.try_emplace(m_.partition.find(slot), "");
    if (inserted) it->second = "?" + std::to_string(metas_.size() - 1);
    return it->second;
  }

 private:
  const Mgu& m_;
  std::map<Unifier::Id, std::string> metas_;
};

struct ProveArgs {
  std::string logic = "mall";
  bool no_prune = false;
  std::string env;
  bool proof = false;
  std::optional<std::uint64_t> budget;
  std::string sequent;
};

inline int cmd_prove(const ProveArgs& a, std::ostream& out) {
  const Sequent seq = parse_sequent(a.sequent);
  if (a.logic == "mll" && !is_multiplicative(seq))
    throw std::invalid_argument("additive connectives or constants are not allowed with --logic mll");
  SearchConfig cfg;
  cfg.prune = !a.no_prune;
  cfg.node_budget = a.budget;
  const SearchResult r = prove(seq, cfg);
  if (r.verdict == Verdict::BudgetExceeded) {
    out << "budget exceeded\n";
    return kBudget;
  }
  if (!r.provable()) {
    out << "unprovable\n";
    return kNegative;
  }
  out << "provable\n";
  if (a.proof) out << print_proof(*r.proof);
  if (a.env.empty()) return kPositive;

  const TypeEnv env = read_env(a.env);
  const Mgu m = infer_sequent(seq, env);
  if (!is_square(m)) {
    out << "typed: skipped (not square-typed)\n";
    return kPositive;
  }
  const ObjectTerm n = m.resolve(m.start);
  try {
    const TypedProof t = decorate(r.proof, env, n);
    out << "typed: |-_" << n.str() << " " << render(seq) << "\n";
    if (a.proof) out << print_typed_proof(t);
  } catch (const UnboundVariable& e) {
    out << "typed: skipped (" << e.what() << ")\n";
  } catch (const DecorationFailed& e) {
    out << "typed: failed (" << e.what() << ")\n";
  }
  return kPositive;
}

inline int cmd_infer(const std::string& sequent, const std::string& env_path, std::ostream& out) {
  const Sequent seq = parse_sequent(sequent);
  const TypeEnv env = env_path.empty() ? TypeEnv{} : read_env(env_path);
  const Mgu m = infer_sequent(seq, env);
  if (!m.consistent) {
    out << "inconsistent\nNON-SQUARE\n";
    return kNegative;
  }
  ClassNames name(m);
  const std::string start = name(m.start);
  for (const auto& [x, slots] : m.vars) out << x << " : " << name(slots.first) << " -> " << name(slots.second) << "\n";
  out << "sequent : " << start << " -> " << name(m.end) << "\n";
  const bool square = is_square(m);
  out << (square ? "SQUARE" : "NON-SQUARE") << "\n";
  return square ? kPositive : kNegative;
}

inline int cmd_ka(const std::string& lhs, const std::string& rhs, const std::string& env_path,
                  const std::vector<std::string>& at, std::ostream& out) {
  const KaTerm a = parse_ka_term(lhs);
  const KaTerm b = parse_ka_term(rhs);
  if (env_path.empty() != at.empty()) throw std::invalid_argument("--env and --at must be given together");
  KaVerdict v;
  if (env_path.empty()) {
    v = decide_untyped(a, b) ? KaVerdict::equal() : KaVerdict::not_equal();
  } else {
    v = decide_typed(a, b, read_env(env_path), ObjectTerm::constant(at[0]), ObjectTerm::constant(at[1]));
  }
  out << to_string(v) << "\n";
  switch (v.kind) {
    case KaVerdict::Kind::Equal: return kPositive;
    case KaVerdict::Kind::NotEqual: return kNegative;
    case KaVerdict::Kind::IllTyped: return kUsage;
  }
  return kUsage;
}

inline int cmd_model_check(const std::string& inequation, const std::string& val_path, std::ostream& out) {
  const RmInequation q = parse_rm_inequation(inequation);
  const Valuation v = parse_valuation(read_file(val_path));
  const auto [l, r] = eval_both(q.lhs, q.rhs, v);
  const bool holds = l.subset_of(r);
  out << (holds ? "holds" : "fails") << "\n";
  out << "lhs = " << render(l) << "\n";
  out << "rhs = " << render(r) << "\n";
  return holds ? kPositive : kNegative;
}

inline int cmd_model_search(const std::string& inequation, const std::string& shape_path, std::size_t max_size,
                            bool allow_empty, std::ostream& out) {
  const RmInequation q = parse_rm_inequation(inequation);
  const TypeEnv shape = shape_path.empty() ? most_general_shape(q.lhs, q.rhs) : read_env(shape_path);
  ModelSearchStats stats;
  const auto w = search_counterexample(q.lhs, q.rhs, shape, max_size, allow_empty, &stats);
  out << "valuations tried: " << stats.valuations << "\n";
  if (!w) {
    out << "none up to bound " << max_size << "\n";
    return kPositive;
  }
  const auto [l, r] = eval_both(q.lhs, q.rhs, *w);
  out << "witness:\n" << render(*w);
  out << "lhs = " << render(l) << "\n";
  out << "rhs = " << render(r) << "\n";
  return kNegative;
}

struct BenchArgs {
  GenParams gen;
  std::string fragment = "mll";
  std::size_t count = 1;
  std::string out;
  std::string dist;
  std::optional<std::uint64_t> budget;
  unsigned repeat = 1;
};

inline int cmd_bench(BenchArgs a, std::ostream& out) {
  a.gen.fragment = a.fragment == "mall" ? Fragment::MALL : Fragment::MLL;
  validate(a.gen);
  std::ofstream csv(a.out);
  if (!csv) throw std::runtime_error("cannot write '" + a.out + "'");
  const auto records = run_bench(a.gen, a.count, a.budget, a.repeat);
  write_csv(csv, records);
  if (!csv.flush()) throw std::runtime_error("write to '" + a.out + "' failed");
  if (!a.dist.empty()) {
    std::ofstream d(a.dist);
    if (!d) throw std::runtime_error("cannot write '" + a.dist + "'");
    write_csv(d, summarize(records));
  }
  const BenchSummary s = bench_summary(records);
  out << "records: " << s.total << "\n";
  out << "budget exceeded: " << s.budget_exceeded << "\n";
  out << "rejected at root: " << s.pruned_at_root << "/" << s.measured << "\n";
  out << "rejection rate: " << std::fixed << std::setprecision(3) << s.rejection_rate() << "\n";
  out << "provable: " << s.provable << "\n";
  out << "verdict mismatches: " << s.verdict_mismatches << "\n";
  out << "total time unpruned: " << std::setprecision(6) << static_cast<double>(s.time_unpruned_ns) * 1e-9 << " s\n";
  out << "total time pruned: " << static_cast<double>(s.time_pruned_ns) * 1e-9 << " s\n";
  return kPositive;
}

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Typed cyclic linear logic: prover, type inference, Kleene algebra and relation models", "tycl"};
  app.require_subcommand(1);

  ProveArgs pa;
  auto* prove_cmd = app.add_subcommand("prove", "Decide provability of a one-sided sequent");
  prove_cmd->add_option("--logic", pa.logic, "Fragment")->check(CLI::IsMember({"mll", "mall"}));
  prove_cmd->add_flag("--no-prune", pa.no_prune, "Disable square-type pruning");
  prove_cmd->add_option("--env", pa.env, "Type environment file");
  prove_cmd->add_flag("--proof", pa.proof, "Print the proof");
  prove_cmd->add_option("--budget", pa.budget, "Node budget")->check(CLI::PositiveNumber);
  prove_cmd->add_option("sequent", pa.sequent, "Comma-separated formulas")->required();

  std::string infer_seq, infer_env;
  auto* infer_cmd = app.add_subcommand("infer", "Most general type of a sequent");
  infer_cmd->add_option("--env", infer_env, "Partial type environment file");
  infer_cmd->add_option("sequent", infer_seq, "Comma-separated formulas")->required();

  auto* ka_cmd = app.add_subcommand("ka", "Kleene algebra");
  ka_cmd->require_subcommand(1);
  std::string ka_lhs, ka_rhs, ka_env;
  std::vector<std::string> ka_at;
  auto* ka_eq = ka_cmd->add_subcommand("eq", "Decide A = B");
  ka_eq->add_option("--env", ka_env, "Type environment file");
  ka_eq->add_option("--at", ka_at, "Source and target objects")->expected(2);
  ka_eq->add_option("lhs", ka_lhs)->required();
  ka_eq->add_option("rhs", ka_rhs)->required();

  auto* model_cmd = app.add_subcommand("model", "Finite relation models");
  model_cmd->require_subcommand(1);
  std::string mc_val, mc_ineq;
  auto* model_check = model_cmd->add_subcommand("check", "Evaluate lhs <= rhs under a valuation");
  model_check->add_option("--val", mc_val, "Valuation file")->required();
  model_check->add_option("inequation", mc_ineq, "\"lhs <= rhs\"")->required();
  std::string ms_shape, ms_ineq;
  std::size_t ms_max = 2;
  bool ms_empty = false;
  auto* model_search = model_cmd->add_subcommand("search", "Search for a counterexample to lhs <= rhs");
  model_search->add_option("--shape", ms_shape, "Typing of the variables (inferred if absent)");
  model_search->add_option("--max-size", ms_max, "Largest carrier size")->required();
  model_search->add_flag("--allow-empty", ms_empty, "Allow empty carriers");
  model_search->add_option("inequation", ms_ineq, "\"lhs <= rhs\"")->required();

  BenchArgs ba;
  auto* bench_cmd = app.add_subcommand("bench", "Random sequents, proved with and without pruning");
  bench_cmd->add_option("--leaves", ba.gen.leaves)->required()->check(CLI::PositiveNumber);
  bench_cmd->add_option("--vars", ba.gen.var_pool)->required()->check(CLI::PositiveNumber);
  bench_cmd->add_option("--count", ba.count)->required()->check(CLI::PositiveNumber);
  bench_cmd->add_option("--seed", ba.gen.seed)->required();
  bench_cmd->add_option("--out", ba.out, "CSV of per-sequent records")->required();
  bench_cmd->add_option("--fragment", ba.fragment)->check(CLI::IsMember({"mll", "mall"}));
  bench_cmd->add_option("--budget", ba.budget, "Node budget per search")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--repeat", ba.repeat, "Timing repetitions")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--dist", ba.dist, "CSV of the cumulative time distribution");

  std::vector<const char*> argv{"tycl"};
  for (const auto& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kPositive;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kPositive;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (prove_cmd->parsed()) return cmd_prove(pa, out);
    if (infer_cmd->parsed()) return cmd_infer(infer_seq, infer_env, out);
    if (ka_eq->parsed()) return cmd_ka(ka_lhs, ka_rhs, ka_env, ka_at, out);
    if (model_check->parsed()) return cmd_model_check(mc_ineq, mc_val, out);
    if (model_search->parsed()) return cmd_model_search(ms_ineq, ms_shape, ms_max, ms_empty, out);
    if (bench_cmd->parsed()) return cmd_bench(ba, out);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const BudgetExceeded& e) {
    err << "error: " << e.what() << "\n";
    return kBudget;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace tycl::cli
