#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "las/dsl.hpp"

namespace las {

// Lower is better. Infeasible candidates carry the +inf sentinel and are
// excluded from statistics.
struct Fitness {
  double value = std::numeric_limits<double>::infinity();
  bool feasible = false;

  static Fitness infeasible() { return {}; }
  static Fitness of(double v) { return {v, true}; }

  bool operator==(const Fitness&) const = default;
};

enum class Operator { Init, E1, E2, M1, M2, Import };

const char* to_string(Operator op);
std::optional<Operator> operator_from_string(const std::string& s);

// One algorithm: raw source, canonical form, canonical id, and the parsed
// program when the source is valid DSL.
struct Candidate {
  std::string code;
  std::string canonical_code;  // empty when the source is not DSL
  std::string canonical_id;    // 64-hex sha256
  std::optional<dsl::Program> program;
};

// One record per evaluated candidate; the ordered list is the full search
// history.
struct GenerationEvent {
  std::int64_t eval_index = 0;
  Candidate candidate;
  Operator op = Operator::Init;
  std::vector<std::string> parent_ids;
  Fitness fitness;
  std::string note;
};

// Foreign (non-DSL) sources are identified by hashing whitespace-normalized
// text: runs of whitespace collapse to one space, ends trimmed.
std::string normalize_whitespace(const std::string& text);

inline constexpr const char* kToolkitVersion = "0.1.0";

}  // namespace las
