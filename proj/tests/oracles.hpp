#pragma once

// Independent reference implementations used only by tests. Everything here
// is written as plainly as possible (recursive walks, exhaustive loops) so it
// can serve as an oracle for the production paths.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "las/dsl.hpp"

namespace oracle {

// --- naive tree-walking evaluator (cross-checks the compiled tape) ---------

inline std::optional<double> eval_expr(const las::dsl::Expr& e,
                                       std::map<std::string, double>& env) {
  using las::dsl::ExprKind;
  using las::dsl::Builtin;
  auto fin = [](double v) -> std::optional<double> {
    if (!std::isfinite(v)) return std::nullopt;
    return v;
  };
  switch (e.kind) {
    case ExprKind::Num: return fin(e.num);
    case ExprKind::Var: return fin(env.at(e.name));
    default: break;
  }
  std::vector<double> args;
  for (const auto& a : e.args) {
    auto v = eval_expr(a, env);
    if (!v) return std::nullopt;
    args.push_back(*v);
  }
  switch (e.kind) {
    case ExprKind::Neg: return fin(-args[0]);
    case ExprKind::Add: return fin(args[0] + args[1]);
    case ExprKind::Sub: return fin(args[0] - args[1]);
    case ExprKind::Mul: return fin(args[0] * args[1]);
    case ExprKind::Div: {
      double d = std::max(std::fabs(args[1]), 1e-9);
      if (args[1] < 0) d = -d;
      return fin(args[0] / d);
    }
    case ExprKind::Call:
      switch (e.fn) {
        case Builtin::Min: return fin(std::min(args[0], args[1]));
        case Builtin::Max: return fin(std::max(args[0], args[1]));
        case Builtin::Abs: return fin(std::fabs(args[0]));
        case Builtin::Sqrt: return fin(std::sqrt(std::fabs(args[0])));
        case Builtin::Exp: return fin(std::exp(std::min(args[0], 50.0)));
        case Builtin::Log: return fin(std::log(std::max(args[0], 1e-9)));
        case Builtin::Pow: {
          double m = std::exp(std::min(args[1] * std::log(std::fabs(args[0]) + 1e-9), 50.0));
          bool odd = args[1] == std::nearbyint(args[1]) &&
                     std::fmod(std::fabs(args[1]), 2.0) == 1.0;
          return fin(args[0] < 0 && odd ? -m : m);
        }
        case Builtin::IfGt: return fin(args[0] > args[1] ? args[2] : args[3]);
      }
      return std::nullopt;
    default: return std::nullopt;
  }
}

// nullopt = some operation produced a non-finite value.
inline std::optional<double> eval_program(const las::dsl::Program& p,
                                          std::map<std::string, double> env) {
  for (const auto& s : p.statements) {
    auto v = eval_expr(s.value, env);
    if (!v) return std::nullopt;
    env[s.name] = *v;
  }
  return eval_expr(p.result, env);
}

// --- brute-force n-gram counting for BLEU ----------------------------------

inline std::map<std::vector<std::string>, int> ngrams(const std::vector<std::string>& toks,
                                                      std::size_t n) {
  std::map<std::vector<std::string>, int> out;
  if (toks.size() < n) return out;
  for (std::size_t i = 0; i + n <= toks.size(); ++i) {
    out[std::vector<std::string>(toks.begin() + i, toks.begin() + i + n)]++;
  }
  return out;
}

// Plain BLEU recomputation: clipped precisions, add-one smoothing on n>=2
// only when the raw numerator is zero, brevity penalty exp(1 - r/c) for c < r.
inline double bleu(const std::vector<std::string>& ref, const std::vector<std::string>& cand) {
  if (ref.empty() || cand.empty()) return 0.0;
  double product = 1.0;
  for (std::size_t n = 1; n <= 4; ++n) {
    auto rg = ngrams(ref, n);
    auto cg = ngrams(cand, n);
    long long num = 0, den = 0;
    for (const auto& [gram, count] : cg) {
      den += count;
      auto it = rg.find(gram);
      if (it != rg.end()) num += std::min(count, it->second);
    }
    double p;
    if (n == 1) {
      p = den > 0 ? static_cast<double>(num) / den : 0.0;
    } else if (num == 0) {
      p = static_cast<double>(num + 1) / static_cast<double>(den + 1);
    } else {
      p = static_cast<double>(num) / den;
    }
    product *= p;
  }
  double bp = cand.size() < ref.size()
                  ? std::exp(1.0 - static_cast<double>(ref.size()) / cand.size())
                  : 1.0;
  return bp * std::pow(product, 0.25);
}

// --- exhaustive subtree enumeration for AST match --------------------------

inline std::string subtree_key(const las::dsl::Expr& e) {
  using las::dsl::ExprKind;
  switch (e.kind) {
    case ExprKind::Num: return "NUM";
    case ExprKind::Var: return "ID";
    case ExprKind::Neg: return "(neg " + subtree_key(e.args[0]) + ")";
    case ExprKind::Add: return "(+ " + subtree_key(e.args[0]) + " " + subtree_key(e.args[1]) + ")";
    case ExprKind::Sub: return "(- " + subtree_key(e.args[0]) + " " + subtree_key(e.args[1]) + ")";
    case ExprKind::Mul: return "(* " + subtree_key(e.args[0]) + " " + subtree_key(e.args[1]) + ")";
    case ExprKind::Div: return "(/ " + subtree_key(e.args[0]) + " " + subtree_key(e.args[1]) + ")";
    case ExprKind::Call: {
      std::string out = "(";
      out += las::dsl::builtin_info(e.fn).name;
      for (const auto& a : e.args) out += " " + subtree_key(a);
      return out + ")";
    }
  }
  return "?";
}

inline void collect_subtrees(const las::dsl::Expr& e, std::map<std::string, int>& out) {
  out[subtree_key(e)]++;
  for (const auto& a : e.args) collect_subtrees(a, out);
}

inline std::map<std::string, int> program_subtrees(const las::dsl::Program& p) {
  std::map<std::string, int> out;
  std::string root = "(program";
  for (const auto& s : p.statements) {
    collect_subtrees(s.value, out);
    std::string let = "(let ID " + subtree_key(s.value) + ")";
    out[let]++;
    root += " " + let;
  }
  collect_subtrees(p.result, out);
  root += " (return " + subtree_key(p.result) + "))";
  out[root]++;
  return out;
}

inline double ast_match(const las::dsl::Program& ref, const las::dsl::Program& cand) {
  auto rs = program_subtrees(ref);
  auto cs = program_subtrees(cand);
  long long total = 0, hit = 0;
  for (const auto& [k, c] : rs) {
    total += c;
    auto it = cs.find(k);
    if (it != cs.end()) hit += std::min(c, it->second);
  }
  if (total == 0) return 1.0;
  return static_cast<double>(hit) / total;
}

// --- independent dataflow-edge walk -----------------------------------------

inline void dfg_uses(const las::dsl::Expr& e, const std::map<std::string, std::string>& rename,
                     const std::string& def,
                     std::vector<std::pair<std::string, std::string>>& out) {
  if (e.kind == las::dsl::ExprKind::Var) {
    auto it = rename.find(e.name);
    out.emplace_back(def, it == rename.end() ? e.name : it->second);
    return;
  }
  for (const auto& a : e.args) dfg_uses(a, rename, def, out);
}

inline std::vector<std::pair<std::string, std::string>> dfg_edges(const las::dsl::Program& p) {
  std::set<std::string> taken(p.input_vars.begin(), p.input_vars.end());
  std::map<std::string, std::string> rename;
  std::vector<std::pair<std::string, std::string>> out;
  int next = 0;
  for (const auto& s : p.statements) {
    std::string fresh;
    do {
      fresh = "v" + std::to_string(next++);
    } while (taken.count(fresh));
    dfg_uses(s.value, rename, fresh, out);
    rename[s.name] = fresh;
  }
  dfg_uses(p.result, rename, "ret", out);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace oracle
