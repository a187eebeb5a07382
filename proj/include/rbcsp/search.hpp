#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rbcsp/hypergraph.hpp"
#include "rbcsp/model.hpp"

namespace rbcsp {

inline constexpr std::uint64_t kDefaultBudget = 10'000'000;

// For a variable ordering, the constraints that become fully assigned at
// each position: closing[i] holds the constraints whose scope lies within
// order[0..i] and contains order[i]. These are exactly the constraints an
// availability test at step i must consult.
class PrefixSchedule {
 public:
  PrefixSchedule(const Instance& inst, std::span<const Var> order);

  std::span<const Var> order() const { return order_; }
  const std::vector<std::uint32_t>& closing(std::size_t position) const { return closing_[position]; }

 private:
  std::vector<Var> order_;
  std::vector<std::vector<std::uint32_t>> closing_;
};

// True when u = v keeps `a` compatible with every constraint closing at `position`.
// `a` must already assign order[0..position-1].
bool is_available(const Instance& inst, const PrefixSchedule& schedule, std::size_t position, Assignment& a,
                  Value v);

std::vector<Value> available_values(const Instance& inst, const PrefixSchedule& schedule, std::size_t position,
                                    Assignment& a);

// Ordering from min-degree peeling of the constraint hypergraph.
std::vector<Var> width_optimal_order(const Instance& inst);

struct ValueRule {
  enum class Kind { LexMin, SeededRandom };
  Kind kind = Kind::LexMin;
  std::uint64_t seed = 0;

  static ValueRule lex_min() { return {}; }
  static ValueRule seeded_random(std::uint64_t seed) { return {Kind::SeededRandom, seed}; }

  // Chooses among a nonempty ascending candidate list. SeededRandom depends
  // only on (seed, variable, candidates).
  Value choose(Var variable, std::span<const Value> candidates) const;
};

struct GreedyOutcome {
  bool success = false;
  Assignment assignment;
  std::optional<Var> stuck_at;
  std::size_t steps = 0;  // variables assigned
};

GreedyOutcome greedy_run(const Instance& inst, std::span<const Var> order, const ValueRule& rule);

enum class SolveStatus { Sat, Unsat, BudgetExhausted };
std::string to_string(SolveStatus status);

struct SolveResult {
  SolveStatus status = SolveStatus::Unsat;
  std::optional<Assignment> witness;
  std::uint64_t dead_ends = 0;      // levels whose values ran out, forcing a retreat
  std::uint64_t nodes_visited = 0;  // successful single-variable extensions
};

// Chronological depth-first search over a static order, values ascending.
// Stops with BudgetExhausted once nodes_visited would exceed node_budget.
SolveResult backtrack_solve(const Instance& inst, std::span<const Var> order,
                            std::uint64_t node_budget = kDefaultBudget);

// Full enumeration of d^n assignments. Throws BudgetExceeded if d^n > budget.
bool brute_force_sat(const Instance& inst, std::uint64_t budget = kDefaultBudget);

// Decides backtrack-freeness under `order` by enumerating every compatible
// prefix assignment and checking it has an available value for the next
// variable. Throws BudgetExceeded once more than `budget` prefixes are visited.
bool exact_backtrack_free(const Instance& inst, std::span<const Var> order, std::uint64_t budget = kDefaultBudget);

// Backtrack-free under some ordering. With no candidates given: all n!
// orderings when n <= 8, otherwise only the width-optimal one.
bool is_backtrack_free(const Instance& inst, const std::vector<std::vector<Var>>& candidates = {},
                       std::uint64_t budget = kDefaultBudget);

// Flat key=value records for logs and CSV side files.
std::string to_record(const GreedyOutcome& outcome);
std::string to_record(const SolveResult& result);

}  // namespace rbcsp
