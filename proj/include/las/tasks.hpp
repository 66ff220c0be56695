#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "las/dsl.hpp"
#include "las/types.hpp"

namespace las::tasks {

enum class TaskKind { Obp, Tsp, Symreg };

const char* to_string(TaskKind k);
std::optional<TaskKind> task_kind_from_string(const std::string& s);

struct ObpParams {
  int n_instances = 5;
  int n_items = 50;
  double capacity = 150.0;
  int item_min = 20;
  int item_max = 100;
};

struct TspParams {
  int n_instances = 5;
  int n_cities = 50;
};

// Default target: logistic curve y = 2.5 / (1 + exp(-1.3 (x - 4))).
double default_symreg_target(double x);

struct SymregParams {
  int n_instances = 5;
  int n_samples = 100;
  double x_min = 0.0;
  double x_max = 10.0;
  // Only make_instances consults the target; it is not serialized. Tests
  // configure simpler targets through this hook.
  std::function<double(double)> target = default_symreg_target;
};

struct TaskSpec {
  TaskKind kind = TaskKind::Obp;
  std::uint64_t seed = 0;
  ObpParams obp;
  TspParams tsp;
  SymregParams symreg;

  std::vector<std::string> input_vars() const;
  int n_instances() const;
  void validate() const;  // InvalidParams
};

struct ObpInstance {
  std::vector<double> items;  // positive, each <= capacity
  double capacity = 0.0;
};

struct TspInstance {
  int n = 0;
  std::vector<double> xs, ys;  // unit square
  std::vector<double> dist;    // row-major n*n, symmetric, zero diagonal
  double nn_length = 0.0;      // nearest-neighbor tour baseline from city 0

  double d(int a, int b) const { return dist[static_cast<std::size_t>(a) * n + b]; }
};

struct SymregInstance {
  std::vector<double> x;  // strictly increasing
  std::vector<double> y;
};

using TaskInstance = std::variant<ObpInstance, TspInstance, SymregInstance>;

// Deterministic per spec.seed. Throws InvalidParams.
std::vector<TaskInstance> make_instances(const TaskSpec& spec);

// Per-instance scores: OBP bins_used / lower bound, TSP tour / NN baseline,
// SYMREG mean squared error. Mean over instances in index order; any
// NonFiniteResult makes the candidate infeasible.
Fitness evaluate_candidate(const TaskSpec& spec, const std::vector<TaskInstance>& instances,
                           const dsl::Program& p);

// Online packing: items in order, candidate scores every fitting open bin via
// env {item, cap: remaining}, highest score wins, ties to the lowest index.
int run_obp(const ObpInstance& inst, const dsl::Program& p);
int run_obp(const ObpInstance& inst, const dsl::Compiled& c);

// Constructive tour from city 0: candidate scores every unvisited city via
// env {d_cm, d_md, n_u, avg_md}; minimum score wins, ties to the lowest city
// index; the tour closes back at city 0.
double run_tsp(const TspInstance& inst, const dsl::Program& p);
double run_tsp(const TspInstance& inst, const dsl::Compiled& c);

double nearest_neighbor_length(const TspInstance& inst);

// Batch evaluation (OpenMP lane + serial reference). Null entries are treated
// as unparseable candidates and come back infeasible.
std::vector<Fitness> evaluate_batch(const TaskSpec& spec,
                                    const std::vector<TaskInstance>& instances,
                                    const std::vector<const dsl::Program*>& programs);
std::vector<Fitness> evaluate_batch_serial(const TaskSpec& spec,
                                           const std::vector<TaskInstance>& instances,
                                           const std::vector<const dsl::Program*>& programs);

}  // namespace las::tasks
