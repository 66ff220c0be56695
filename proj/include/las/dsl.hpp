#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "las/rng.hpp"

namespace las::dsl {

// ---------------------------------------------------------------------------
// AST
// ---------------------------------------------------------------------------

enum class ExprKind { Num, Var, Neg, Add, Sub, Mul, Div, Call };

enum class Builtin { Min, Max, Abs, Sqrt, Exp, Log, Pow, IfGt };

struct BuiltinInfo {
  const char* name;
  Builtin fn;
  int arity;
};

inline constexpr std::array<BuiltinInfo, 8> kBuiltins{{
    {"min", Builtin::Min, 2},
    {"max", Builtin::Max, 2},
    {"abs", Builtin::Abs, 1},
    {"sqrt", Builtin::Sqrt, 1},
    {"exp", Builtin::Exp, 1},
    {"log", Builtin::Log, 1},
    {"pow", Builtin::Pow, 2},
    {"if_gt", Builtin::IfGt, 4},
}};

const BuiltinInfo* find_builtin(std::string_view name);
const BuiltinInfo& builtin_info(Builtin fn);

struct Expr {
  ExprKind kind = ExprKind::Num;
  double num = 0.0;           // Num
  std::string name;           // Var
  Builtin fn = Builtin::Min;  // Call
  std::vector<Expr> args;     // Neg: 1, binary ops: 2, Call: builtin arity

  bool operator==(const Expr&) const = default;

  static Expr number(double v);
  static Expr var(std::string name);
  static Expr unary(Expr e);
  static Expr binary(ExprKind op, Expr lhs, Expr rhs);
  static Expr call(Builtin fn, std::vector<Expr> args);
};

struct LetBinding {
  std::string name;
  Expr value;
  bool operator==(const LetBinding&) const = default;
};

struct Program {
  std::vector<LetBinding> statements;
  Expr result;
  std::vector<std::string> input_vars;

  bool operator==(const Program&) const = default;
};

// Max expression depth over all statements and the result (leaf = 1).
int depth(const Expr& e);
int depth(const Program& p);

// ---------------------------------------------------------------------------
// Tokens
// ---------------------------------------------------------------------------

enum class TokenKind { Keyword, Identifier, Number, FunctionName, Punct };

struct Token {
  TokenKind kind;
  std::string text;
  int line = 0;
  int col = 0;

  bool operator==(const Token& o) const { return kind == o.kind && text == o.text; }
};

// Lexes the source; classification: keywords {let, return}, built-in names as
// FunctionName, numbers, identifiers, everything else Punct. Throws LexError.
std::vector<Token> tokenize(std::string_view source);

// ---------------------------------------------------------------------------
// Parse / print
// ---------------------------------------------------------------------------

// Grammar:
//   program := { "let" ident "=" expr ";" } "return" expr
//   expr    := term  (("+"|"-") term)*
//   term    := unary (("*"|"/") unary)*
//   unary   := "-" unary | primary
//   primary := number | ident | builtin "(" expr {"," expr} ")" | "(" expr ")"
// Built-in names are reserved and cannot be bound.
Program parse(std::string_view source, std::vector<std::string> input_vars);

// Canonical spacing with the program's own names: one statement per line,
// single spaces around binary operators, ';' after each let, final line
// "return <expr>", no trailing newline. Minimal parentheses.
std::string serialize(const Program& p);

struct CanonicalForm {
  std::string text;  // serialize() of the alpha-renamed program
  std::string id;    // sha256 hex of text
};

// Renames let-bound variables to v0, v1, ... in definition order (skipping
// any name already taken by an input variable).
Program alpha_rename(const Program& p);

CanonicalForm canonicalize(const Program& p);

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------
// Guarded total semantics:
//   x / y      -> x / (sign(y) * max(|y|, 1e-9)), sign(0) = +1
//   sqrt(x)    -> sqrt(|x|)
//   log(x)     -> ln(max(x, 1e-9))
//   exp(x)     -> exp(min(x, 50))
//   pow(x, y)  -> exp(min(y * ln(|x| + 1e-9), 50)), negated when x < 0 and y
//                 is an odd integer
//   if_gt(a, b, x, y) -> x when a > b else y
// Every operation must produce a finite value; otherwise NonFiniteResult.

namespace guarded {
double div(double x, double y);
double sqrt(double x);
double log(double x);
double exp(double x);
double pow(double x, double y);
}  // namespace guarded

// Flat postfix tape; the hot path for task evaluation. The naive recursive
// walk used to cross-check it lives in the test oracles.
class Compiled {
 public:
  explicit Compiled(const Program& p);

  // inputs in p.input_vars order; throws NonFiniteResult.
  double eval(std::span<const double> inputs) const;

  int input_count() const { return n_inputs_; }

 private:
  enum class Op : std::uint8_t {
    PushNum, PushVar, Store,
    Neg, Add, Sub, Mul, Div,
    Min, Max, Abs, Sqrt, Exp, Log, Pow, IfGt,
  };
  struct Instr {
    Op op;
    std::int32_t slot = 0;
    double num = 0.0;
  };

  void emit(const Expr& e, const std::map<std::string, int>& slots);

  std::vector<Instr> code_;
  int n_inputs_ = 0;
  int n_slots_ = 0;
  int max_stack_ = 0;
};

// Convenience single-shot evaluation against a name->value environment.
double evaluate(const Program& p, const std::map<std::string, double>& env);

// ---------------------------------------------------------------------------
// Random construction and grafting
// ---------------------------------------------------------------------------

// Grammar-directed sampling: 0..3 let bindings, every expression depth
// <= max_depth, deterministic per stream.
Program random_program(Rng& rng, const std::vector<std::string>& input_vars, int max_depth);

// Fresh expression over the given scope, depth <= max_depth.
Expr random_expr(Rng& rng, const std::vector<std::string>& scope, int max_depth);

// Address of one Expr node: which statement (statements.size() = result) and
// the child-index path from that statement's root expression.
struct Site {
  std::size_t stmt = 0;
  std::vector<int> path;
};

// All sites in statement order, preorder within each expression.
std::vector<Site> enumerate_sites(const Program& p);

const Expr& subtree_at(const Program& p, const Site& site);  // InvalidSite

// Replaces the addressed node with donor. Donor identifiers unbound at the
// site are rewritten (consistently per name) to a uniformly chosen in-scope
// identifier.
Program graft(const Program& host, const Expr& donor, const Site& site, Rng& rng);

}  // namespace las::dsl
