#include "las/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <set>

#include "las/errors.hpp"
#include "las/num_format.hpp"
#include "las/sha256.hpp"

namespace las::dsl {

const BuiltinInfo* find_builtin(std::string_view name) {
  for (const auto& b : kBuiltins) {
    if (name == b.name) return &b;
  }
  return nullptr;
}

const BuiltinInfo& builtin_info(Builtin fn) {
  return kBuiltins[static_cast<std::size_t>(fn)];
}

Expr Expr::number(double v) {
  Expr e;
  e.kind = ExprKind::Num;
  e.num = v;
  return e;
}

Expr Expr::var(std::string name) {
  Expr e;
  e.kind = ExprKind::Var;
  e.name = std::move(name);
  return e;
}

Expr Expr::unary(Expr inner) {
  Expr e;
  e.kind = ExprKind::Neg;
  e.args.push_back(std::move(inner));
  return e;
}

Expr Expr::binary(ExprKind op, Expr lhs, Expr rhs) {
  Expr e;
  e.kind = op;
  e.args.push_back(std::move(lhs));
  e.args.push_back(std::move(rhs));
  return e;
}

Expr Expr::call(Builtin fn, std::vector<Expr> args) {
  Expr e;
  e.kind = ExprKind::Call;
  e.fn = fn;
  e.args = std::move(args);
  return e;
}

int depth(const Expr& e) {
  int d = 0;
  for (const auto& a : e.args) d = std::max(d, depth(a));
  return d + 1;
}

int depth(const Program& p) {
  int d = depth(p.result);
  for (const auto& s : p.statements) d = std::max(d, depth(s.value));
  return d;
}

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

}  // namespace

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i + k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    i += n;
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    int tline = line, tcol = col;
    if (ident_start(c)) {
      std::size_t j = i + 1;
      while (j < src.size() && ident_char(src[j])) ++j;
      std::string text(src.substr(i, j - i));
      TokenKind kind = TokenKind::Identifier;
      if (text == "let" || text == "return") {
        kind = TokenKind::Keyword;
      } else if (find_builtin(text)) {
        kind = TokenKind::FunctionName;
      }
      out.push_back({kind, std::move(text), tline, tcol});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      if (j < src.size() && src[j] == '.') {
        ++j;
        if (j >= src.size() || !std::isdigit(static_cast<unsigned char>(src[j]))) {
          throw LexError(tline, tcol, "digit expected after decimal point");
        }
        while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      }
      if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < src.size() && (src[k] == '+' || src[k] == '-')) ++k;
        if (k >= src.size() || !std::isdigit(static_cast<unsigned char>(src[k]))) {
          throw LexError(tline, tcol, "digit expected in exponent");
        }
        while (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) ++k;
        j = k;
      }
      out.push_back({TokenKind::Number, std::string(src.substr(i, j - i)), tline, tcol});
      advance(j - i);
      continue;
    }
    if (c == '+' || c == '-' || c == '*' || c == '/' || c == '=' || c == ';' || c == '(' ||
        c == ')' || c == ',') {
      out.push_back({TokenKind::Punct, std::string(1, c), tline, tcol});
      advance(1);
      continue;
    }
    throw LexError(tline, tcol, std::string("unexpected character '") + c + "'");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace {

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::vector<std::string> input_vars)
      : tokens_(std::move(tokens)), input_vars_(std::move(input_vars)) {
    scope_.insert(input_vars_.begin(), input_vars_.end());
  }

  Program run() {
    Program p;
    p.input_vars = input_vars_;
    while (peek_is_keyword("let")) {
      next();
      const Token& name = expect(TokenKind::Identifier, "binding name");
      if (scope_.count(name.text)) throw DuplicateBinding(name.text);
      expect_punct("=");
      Expr value = expr();
      expect_punct(";");
      scope_.insert(name.text);
      p.statements.push_back({name.text, std::move(value)});
    }
    if (!peek_is_keyword("return")) fail("expected 'let' or 'return'");
    next();
    p.result = expr();
    if (pos_ != tokens_.size()) fail("expected end of input");
    return p;
  }

 private:
  Expr expr() {
    Expr lhs = term();
    while (peek_is_punct("+") || peek_is_punct("-")) {
      bool add = next().text == "+";
      Expr rhs = term();
      lhs = Expr::binary(add ? ExprKind::Add : ExprKind::Sub, std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  Expr term() {
    Expr lhs = unary();
    while (peek_is_punct("*") || peek_is_punct("/")) {
      bool mul = next().text == "*";
      Expr rhs = unary();
      lhs = Expr::binary(mul ? ExprKind::Mul : ExprKind::Div, std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  Expr unary() {
    if (peek_is_punct("-")) {
      next();
      return Expr::unary(unary());
    }
    return primary();
  }

  Expr primary() {
    if (pos_ >= tokens_.size()) fail("unexpected end of input");
    const Token& t = tokens_[pos_];
    switch (t.kind) {
      case TokenKind::Number: {
        ++pos_;
        double v = 0.0;
        auto res = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (res.ec != std::errc() || !std::isfinite(v)) {
          throw SyntaxError(t.line, t.col, t.text, "number out of range");
        }
        return Expr::number(v);
      }
      case TokenKind::Identifier: {
        ++pos_;
        if (!scope_.count(t.text)) throw UndefinedVariable(t.text);
        return Expr::var(t.text);
      }
      case TokenKind::FunctionName: {
        ++pos_;
        const BuiltinInfo* info = find_builtin(t.text);
        expect_punct("(");
        std::vector<Expr> args;
        args.push_back(expr());
        while (peek_is_punct(",")) {
          next();
          args.push_back(expr());
        }
        expect_punct(")");
        if (static_cast<int>(args.size()) != info->arity) {
          throw SyntaxError(t.line, t.col, t.text,
                            "expected " + std::to_string(info->arity) + " arguments, got " +
                                std::to_string(args.size()));
        }
        return Expr::call(info->fn, std::move(args));
      }
      case TokenKind::Punct:
        if (t.text == "(") {
          ++pos_;
          Expr inner = expr();
          expect_punct(")");
          return inner;
        }
        break;
      default:
        break;
    }
    fail("expected an expression");
  }

  bool peek_is_keyword(std::string_view kw) const {
    return pos_ < tokens_.size() && tokens_[pos_].kind == TokenKind::Keyword &&
           tokens_[pos_].text == kw;
  }

  bool peek_is_punct(std::string_view p) const {
    return pos_ < tokens_.size() && tokens_[pos_].kind == TokenKind::Punct &&
           tokens_[pos_].text == p;
  }

  const Token& next() { return tokens_[pos_++]; }

  const Token& expect(TokenKind kind, const std::string& what) {
    if (pos_ >= tokens_.size() || tokens_[pos_].kind != kind) fail("expected " + what);
    return tokens_[pos_++];
  }

  void expect_punct(std::string_view p) {
    if (!peek_is_punct(p)) fail(std::string("expected '") + std::string(p) + "'");
    ++pos_;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    if (pos_ < tokens_.size()) {
      const Token& t = tokens_[pos_];
      throw SyntaxError(t.line, t.col, t.text, msg);
    }
    int line = 1, col = 1;
    if (!tokens_.empty()) {
      line = tokens_.back().line;
      col = tokens_.back().col + static_cast<int>(tokens_.back().text.size());
    }
    throw SyntaxError(line, col, "<end of input>", msg);
  }

  std::vector<Token> tokens_;
  std::vector<std::string> input_vars_;
  std::set<std::string> scope_;
  std::size_t pos_ = 0;
};

}  // namespace

Program parse(std::string_view source, std::vector<std::string> input_vars) {
  return Parser(tokenize(source), std::move(input_vars)).run();
}

// ---------------------------------------------------------------------------
// Printer
// ---------------------------------------------------------------------------

namespace {

// + - are level 1, * / level 2, unary minus 3, atoms 4.
int precedence(const Expr& e) {
  switch (e.kind) {
    case ExprKind::Add:
    case ExprKind::Sub:
      return 1;
    case ExprKind::Mul:
    case ExprKind::Div:
      return 2;
    case ExprKind::Neg:
      return 3;
    default:
      return 4;
  }
}

const char* op_text(ExprKind k) {
  switch (k) {
    case ExprKind::Add: return "+";
    case ExprKind::Sub: return "-";
    case ExprKind::Mul: return "*";
    case ExprKind::Div: return "/";
    default: return "?";
  }
}

void print_expr(const Expr& e, std::string& out) {
  auto child = [&out](const Expr& c, bool needs_parens) {
    if (needs_parens) {
      out += '(';
      print_expr(c, out);
      out += ')';
    } else {
      print_expr(c, out);
    }
  };
  switch (e.kind) {
    case ExprKind::Num:
      out += format_double(e.num);
      break;
    case ExprKind::Var:
      out += e.name;
      break;
    case ExprKind::Neg:
      out += '-';
      child(e.args[0], precedence(e.args[0]) < 3);
      break;
    case ExprKind::Add:
    case ExprKind::Sub:
    case ExprKind::Mul:
    case ExprKind::Div: {
      int p = precedence(e);
      // Left-associative grammar: the right child needs parentheses at equal
      // precedence to round-trip structurally.
      child(e.args[0], precedence(e.args[0]) < p);
      out += ' ';
      out += op_text(e.kind);
      out += ' ';
      child(e.args[1], precedence(e.args[1]) <= p);
      break;
    }
    case ExprKind::Call: {
      out += builtin_info(e.fn).name;
      out += '(';
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i) out += ", ";
        print_expr(e.args[i], out);
      }
      out += ')';
      break;
    }
  }
}

}  // namespace

std::string serialize(const Program& p) {
  std::string out;
  for (const auto& s : p.statements) {
    out += "let ";
    out += s.name;
    out += " = ";
    print_expr(s.value, out);
    out += ";\n";
  }
  out += "return ";
  print_expr(p.result, out);
  return out;
}

// ---------------------------------------------------------------------------
// Canonical form
// ---------------------------------------------------------------------------

namespace {

void rename_vars(Expr& e, const std::map<std::string, std::string>& mapping) {
  if (e.kind == ExprKind::Var) {
    auto it = mapping.find(e.name);
    if (it != mapping.end()) e.name = it->second;
    return;
  }
  for (auto& a : e.args) rename_vars(a, mapping);
}

}  // namespace

Program alpha_rename(const Program& p) {
  std::set<std::string> taken(p.input_vars.begin(), p.input_vars.end());
  std::map<std::string, std::string> mapping;
  Program out;
  out.input_vars = p.input_vars;
  int next_id = 0;
  for (const auto& s : p.statements) {
    std::string fresh;
    do {
      fresh = "v" + std::to_string(next_id++);
    } while (taken.count(fresh));
    Expr value = s.value;
    rename_vars(value, mapping);
    mapping[s.name] = fresh;
    out.statements.push_back({std::move(fresh), std::move(value)});
  }
  out.result = p.result;
  rename_vars(out.result, mapping);
  return out;
}

CanonicalForm canonicalize(const Program& p) {
  CanonicalForm cf;
  cf.text = serialize(alpha_rename(p));
  cf.id = sha256_hex(cf.text);
  return cf;
}

// ---------------------------------------------------------------------------
// Guarded primitives
// ---------------------------------------------------------------------------

namespace guarded {

double div(double x, double y) {
  double d = std::max(std::fabs(y), 1e-9);
  return x / (y < 0.0 ? -d : d);  // sign(0) = +1
}

double sqrt(double x) { return std::sqrt(std::fabs(x)); }

double log(double x) { return std::log(std::max(x, 1e-9)); }

double exp(double x) { return std::exp(std::min(x, 50.0)); }

double pow(double x, double y) {
  double m = exp(y * std::log(std::fabs(x) + 1e-9));
  bool odd_int = y == std::nearbyint(y) && std::fmod(std::fabs(y), 2.0) == 1.0;
  return (x < 0.0 && odd_int) ? -m : m;
}

}  // namespace guarded

// ---------------------------------------------------------------------------
// Compilation and evaluation
// ---------------------------------------------------------------------------

Compiled::Compiled(const Program& p) {
  std::map<std::string, int> slots;
  n_inputs_ = static_cast<int>(p.input_vars.size());
  for (int i = 0; i < n_inputs_; ++i) slots[p.input_vars[i]] = i;
  int next = n_inputs_;
  for (const auto& s : p.statements) {
    emit(s.value, slots);
    slots[s.name] = next;
    code_.push_back({Op::Store, next, 0.0});
    ++next;
  }
  emit(p.result, slots);
  n_slots_ = next;

  int stack = 0;
  max_stack_ = 1;
  for (const auto& ins : code_) {
    switch (ins.op) {
      case Op::PushNum:
      case Op::PushVar: ++stack; break;
      case Op::Store: --stack; break;
      case Op::Neg: case Op::Abs: case Op::Sqrt: case Op::Exp: case Op::Log: break;
      case Op::Add: case Op::Sub: case Op::Mul: case Op::Div:
      case Op::Min: case Op::Max: case Op::Pow: --stack; break;
      case Op::IfGt: stack -= 3; break;
    }
    max_stack_ = std::max(max_stack_, stack);
  }
}

void Compiled::emit(const Expr& e, const std::map<std::string, int>& slots) {
  switch (e.kind) {
    case ExprKind::Num:
      code_.push_back({Op::PushNum, 0, e.num});
      return;
    case ExprKind::Var:
      code_.push_back({Op::PushVar, slots.at(e.name), 0.0});
      return;
    case ExprKind::Neg:
      emit(e.args[0], slots);
      code_.push_back({Op::Neg, 0, 0.0});
      return;
    case ExprKind::Add:
    case ExprKind::Sub:
    case ExprKind::Mul:
    case ExprKind::Div: {
      emit(e.args[0], slots);
      emit(e.args[1], slots);
      Op op = e.kind == ExprKind::Add   ? Op::Add
              : e.kind == ExprKind::Sub ? Op::Sub
              : e.kind == ExprKind::Mul ? Op::Mul
                                        : Op::Div;
      code_.push_back({op, 0, 0.0});
      return;
    }
    case ExprKind::Call: {
      for (const auto& a : e.args) emit(a, slots);
      Op op = Op::Min;
      switch (e.fn) {
        case Builtin::Min: op = Op::Min; break;
        case Builtin::Max: op = Op::Max; break;
        case Builtin::Abs: op = Op::Abs; break;
        case Builtin::Sqrt: op = Op::Sqrt; break;
        case Builtin::Exp: op = Op::Exp; break;
        case Builtin::Log: op = Op::Log; break;
        case Builtin::Pow: op = Op::Pow; break;
        case Builtin::IfGt: op = Op::IfGt; break;
      }
      code_.push_back({op, 0, 0.0});
      return;
    }
  }
}

double Compiled::eval(std::span<const double> inputs) const {
  constexpr int kInlineCap = 64;
  double slot_buf[kInlineCap];
  double stack_buf[kInlineCap];
  std::vector<double> slot_heap, stack_heap;
  double* slots = slot_buf;
  double* stack = stack_buf;
  if (n_slots_ > kInlineCap) {
    slot_heap.resize(n_slots_);
    slots = slot_heap.data();
  }
  if (max_stack_ > kInlineCap) {
    stack_heap.resize(max_stack_);
    stack = stack_heap.data();
  }
  for (int i = 0; i < n_inputs_; ++i) slots[i] = inputs[i];

  int sp = 0;
  for (const auto& ins : code_) {
    double v;
    switch (ins.op) {
      case Op::PushNum: stack[sp++] = ins.num; continue;
      case Op::PushVar: stack[sp++] = slots[ins.slot]; continue;
      case Op::Store: slots[ins.slot] = stack[--sp]; continue;
      case Op::Neg: v = -stack[sp - 1]; break;
      case Op::Add: --sp; v = stack[sp - 1] + stack[sp]; break;
      case Op::Sub: --sp; v = stack[sp - 1] - stack[sp]; break;
      case Op::Mul: --sp; v = stack[sp - 1] * stack[sp]; break;
      case Op::Div: --sp; v = guarded::div(stack[sp - 1], stack[sp]); break;
      case Op::Min: --sp; v = std::min(stack[sp - 1], stack[sp]); break;
      case Op::Max: --sp; v = std::max(stack[sp - 1], stack[sp]); break;
      case Op::Abs: v = std::fabs(stack[sp - 1]); break;
      case Op::Sqrt: v = guarded::sqrt(stack[sp - 1]); break;
      case Op::Exp: v = guarded::exp(stack[sp - 1]); break;
      case Op::Log: v = guarded::log(stack[sp - 1]); break;
      case Op::Pow: --sp; v = guarded::pow(stack[sp - 1], stack[sp]); break;
      case Op::IfGt:
        sp -= 3;
        v = stack[sp - 1] > stack[sp] ? stack[sp + 1] : stack[sp + 2];
        break;
      default: v = 0.0; break;
    }
    if (!std::isfinite(v)) throw NonFiniteResult();
    stack[sp - 1] = v;
  }
  return stack[0];
}

double evaluate(const Program& p, const std::map<std::string, double>& env) {
  std::vector<double> inputs;
  inputs.reserve(p.input_vars.size());
  for (const auto& name : p.input_vars) {
    auto it = env.find(name);
    if (it == env.end()) throw SignatureMismatch("environment misses input '" + name + "'");
    inputs.push_back(it->second);
  }
  return Compiled(p).eval(inputs);
}

// ---------------------------------------------------------------------------
// Random construction
// ---------------------------------------------------------------------------

Expr random_expr(Rng& rng, const std::vector<std::string>& scope, int max_depth) {
  auto leaf = [&]() {
    if (!scope.empty() && rng.uniform() < 0.62) {
      return Expr::var(scope[rng.uniform_int(scope.size())]);
    }
    // 3-decimal literals keep canonical texts readable.
    double v = std::round(rng.uniform(0.0, 10.0) * 1000.0) / 1000.0;
    return Expr::number(v);
  };
  if (max_depth <= 1) return leaf();
  double roll = rng.uniform();
  if (roll < 0.12) return leaf();
  if (roll < 0.17) return Expr::unary(random_expr(rng, scope, max_depth - 1));
  if (roll < 0.62) {
    static constexpr ExprKind kOps[] = {ExprKind::Add, ExprKind::Sub, ExprKind::Mul,
                                        ExprKind::Div};
    ExprKind op = kOps[rng.uniform_int(4)];
    Expr lhs = random_expr(rng, scope, max_depth - 1);
    Expr rhs = random_expr(rng, scope, max_depth - 1);
    return Expr::binary(op, std::move(lhs), std::move(rhs));
  }
  const BuiltinInfo& b = kBuiltins[rng.uniform_int(kBuiltins.size())];
  std::vector<Expr> args;
  args.reserve(b.arity);
  for (int i = 0; i < b.arity; ++i) args.push_back(random_expr(rng, scope, max_depth - 1));
  return Expr::call(b.fn, std::move(args));
}

Program random_program(Rng& rng, const std::vector<std::string>& input_vars, int max_depth) {
  if (max_depth < 1) throw InvalidParams("max_depth must be >= 1");
  Program p;
  p.input_vars = input_vars;
  std::set<std::string> taken(input_vars.begin(), input_vars.end());
  std::vector<std::string> scope = input_vars;
  int n_bind = static_cast<int>(rng.uniform_int(4));
  int name_id = 0;
  for (int i = 0; i < n_bind; ++i) {
    std::string name;
    do {
      name = std::string(1, static_cast<char>('a' + name_id % 26));
      if (name_id >= 26) name += std::to_string(name_id / 26);
      ++name_id;
    } while (taken.count(name) || find_builtin(name));
    taken.insert(name);
    Expr value = random_expr(rng, scope, std::max(1, max_depth - 1));
    scope.push_back(name);
    p.statements.push_back({std::move(name), std::move(value)});
  }
  p.result = random_expr(rng, scope, max_depth);
  return p;
}

// ---------------------------------------------------------------------------
// Sites and grafting
// ---------------------------------------------------------------------------

namespace {

void collect_sites(const Expr& e, std::size_t stmt, std::vector<int>& path,
                   std::vector<Site>& out) {
  out.push_back({stmt, path});
  for (int i = 0; i < static_cast<int>(e.args.size()); ++i) {
    path.push_back(i);
    collect_sites(e.args[i], stmt, path, out);
    path.pop_back();
  }
}

void collect_vars(const Expr& e, std::set<std::string>& out) {
  if (e.kind == ExprKind::Var) {
    out.insert(e.name);
    return;
  }
  for (const auto& a : e.args) collect_vars(a, out);
}

}  // namespace

std::vector<Site> enumerate_sites(const Program& p) {
  std::vector<Site> out;
  std::vector<int> path;
  for (std::size_t s = 0; s < p.statements.size(); ++s) {
    collect_sites(p.statements[s].value, s, path, out);
  }
  collect_sites(p.result, p.statements.size(), path, out);
  return out;
}

namespace {

Expr* navigate(Program& p, const Site& site) {
  Expr* node;
  if (site.stmt < p.statements.size()) {
    node = &p.statements[site.stmt].value;
  } else if (site.stmt == p.statements.size()) {
    node = &p.result;
  } else {
    throw InvalidSite("statement index out of range");
  }
  for (int idx : site.path) {
    if (idx < 0 || idx >= static_cast<int>(node->args.size())) {
      throw InvalidSite("path step out of range");
    }
    node = &node->args[idx];
  }
  return node;
}

}  // namespace

const Expr& subtree_at(const Program& p, const Site& site) {
  return *navigate(const_cast<Program&>(p), site);
}

Program graft(const Program& host, const Expr& donor, const Site& site, Rng& rng) {
  Program out = host;
  Expr* node = navigate(out, site);
  *node = donor;

  // Scope visible at the graft site: inputs plus bindings defined earlier.
  std::vector<std::string> scope = out.input_vars;
  std::size_t visible = std::min(site.stmt, out.statements.size());
  for (std::size_t i = 0; i < visible; ++i) scope.push_back(out.statements[i].name);

  std::set<std::string> defined(scope.begin(), scope.end());
  std::set<std::string> used;
  collect_vars(*node, used);
  std::map<std::string, std::string> repair;
  for (const auto& name : used) {
    if (defined.count(name)) continue;
    if (scope.empty()) {
      repair[name].clear();  // no identifier in scope; fall back to a literal
    } else {
      repair[name] = scope[rng.uniform_int(scope.size())];
    }
  }
  if (!repair.empty()) {
    struct Fix {
      const std::map<std::string, std::string>& repair;
      void operator()(Expr& e) const {
        if (e.kind == ExprKind::Var) {
          auto it = repair.find(e.name);
          if (it != repair.end()) {
            if (it->second.empty()) {
              e = Expr::number(1.0);
            } else {
              e.name = it->second;
            }
          }
          return;
        }
        for (auto& a : e.args) (*this)(a);
      }
    };
    Fix{repair}(*node);
  }
  return out;
}

}  // namespace las::dsl
