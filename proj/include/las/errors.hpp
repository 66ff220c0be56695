#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace las {

// Base class for every error the toolkit raises on purpose.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// --- dsl ---

struct LexError : Error {
  int line, col;
  LexError(int line_, int col_, const std::string& what_)
      : Error("lex error at " + std::to_string(line_) + ":" + std::to_string(col_) + ": " + what_),
        line(line_), col(col_) {}
};

struct SyntaxError : Error {
  int line, col;
  std::string lexeme;
  SyntaxError(int line_, int col_, const std::string& lexeme_, const std::string& what_)
      : Error("syntax error at " + std::to_string(line_) + ":" + std::to_string(col_) + " near '" +
              lexeme_ + "': " + what_),
        line(line_), col(col_), lexeme(lexeme_) {}
};

struct UndefinedVariable : Error {
  std::string name;
  explicit UndefinedVariable(const std::string& name_)
      : Error("undefined variable '" + name_ + "'"), name(name_) {}
};

struct DuplicateBinding : Error {
  std::string name;
  explicit DuplicateBinding(const std::string& name_)
      : Error("duplicate binding '" + name_ + "'"), name(name_) {}
};

struct NonFiniteResult : Error {
  NonFiniteResult() : Error("non-finite result") {}
};

struct InvalidSite : Error {
  using Error::Error;
};

// --- tasks ---

struct InvalidParams : Error {
  using Error::Error;
};

struct SignatureMismatch : Error {
  using Error::Error;
};

// --- search ---

struct EmptyPopulation : Error {
  EmptyPopulation() : Error("empty population") {}
};

struct GeneratorFailure : Error {
  using Error::Error;
};

// --- generators ---

struct ArityMismatch : Error {
  using Error::Error;
};

struct HttpError : Error {
  int status;  // 0 when no response was received
  HttpError(int status_, const std::string& what_)
      : Error("http error (status " + std::to_string(status_) + "): " + what_), status(status_) {}
};

struct NoCodeBlock : Error {
  NoCodeBlock() : Error("no code block in reply") {}
};

struct EmptyReply : Error {
  EmptyReply() : Error("empty reply") {}
};

// --- landscape ---

struct DanglingParent : Error {
  using Error::Error;
};

struct NoFeasibleCandidate : Error {
  NoFeasibleCandidate() : Error("log contains no feasible candidate") {}
};

// --- stats ---

struct EmptyInput : Error {
  EmptyInput() : Error("empty input") {}
};

struct DegenerateSample : Error {
  using Error::Error;
};

// --- similarity ---

struct InfeasibleOperand : Error {
  InfeasibleOperand() : Error("performance delta over an infeasible operand") {}
};

// --- io ---

struct IoError : Error {
  using Error::Error;
};

struct SchemaError : Error {
  long long line;        // 1-based line in the file, 0 when not line-specific
  std::string field;
  SchemaError(long long line_, const std::string& field_, const std::string& what_)
      : Error("schema error at line " + std::to_string(line_) + " (field '" + field_ + "'): " + what_),
        line(line_), field(field_) {}
};

}  // namespace las
