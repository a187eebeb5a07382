#include "rbcsp/search.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "rbcsp/rng.hpp"

namespace rbcsp {

PrefixSchedule::PrefixSchedule(const Instance& inst, std::span<const Var> order)
    : order_(order.begin(), order.end()), closing_(order.size()) {
  if (!is_permutation_of(order, inst.n())) throw std::invalid_argument("ordering is not a permutation of the variables");
  std::vector<std::uint32_t> pos(order.size());
  for (std::uint32_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
  const auto& cs = inst.constraints();
  for (std::uint32_t ci = 0; ci < cs.size(); ++ci) {
    std::uint32_t last = 0;
    for (Var v : cs[ci].scope) last = std::max(last, pos[v]);
    closing_[last].push_back(ci);
  }
}

bool is_available(const Instance& inst, const PrefixSchedule& schedule, std::size_t position, Assignment& a,
                  Value v) {
  const Var u = schedule.order()[position];
  a.set(u, v);
  bool ok = true;
  for (std::uint32_t ci : schedule.closing(position)) {
    const Constraint& c = inst.constraints()[ci];
    if (!c.compatible.contains(restrict_code(c.scope, a, inst.d()))) {
      ok = false;
      break;
    }
  }
  a.unset(u);
  return ok;
}

std::vector<Value> available_values(const Instance& inst, const PrefixSchedule& schedule, std::size_t position,
                                    Assignment& a) {
  std::vector<Value> out;
  for (Value v = 0; v < inst.d(); ++v)
    if (is_available(inst, schedule, position, a, v)) out.push_back(v);
  return out;
}

std::vector<Var> width_optimal_order(const Instance& inst) {
  return compute_width(from_instance(inst)).ordering.perm;
}

Value ValueRule::choose(Var variable, std::span<const Value> candidates) const {
  if (candidates.empty()) throw std::invalid_argument("ValueRule::choose: no candidates");
  if (kind == Kind::LexMin) return candidates.front();
  std::uint64_t h = derive_seed(seed, {variable, candidates.size()});
  for (Value v : candidates) h = mix64(h ^ v);
  return candidates[h % candidates.size()];
}

GreedyOutcome greedy_run(const Instance& inst, std::span<const Var> order, const ValueRule& rule) {
  const PrefixSchedule schedule(inst, order);
  GreedyOutcome out;
  out.assignment = Assignment(inst.n());
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto candidates = available_values(inst, schedule, i, out.assignment);
    if (candidates.empty()) {
      out.stuck_at = order[i];
      return out;
    }
    out.assignment.set(order[i], rule.choose(order[i], candidates));
    ++out.steps;
  }
  out.success = true;
  return out;
}

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Sat:
      return "SAT";
    case SolveStatus::Unsat:
      return "UNSAT";
    case SolveStatus::BudgetExhausted:
      return "BUDGET";
  }
  return "?";
}

SolveResult backtrack_solve(const Instance& inst, std::span<const Var> order, std::uint64_t node_budget) {
  const PrefixSchedule schedule(inst, order);
  const std::size_t n = order.size();
  SolveResult res;
  Assignment a(inst.n());
  // next_value[i]: first value still to try at depth i.
  std::vector<Value> next_value(n + 1, 0);
  std::size_t depth = 0;
  while (true) {
    if (depth == n) {
      res.status = SolveStatus::Sat;
      res.witness = a;
      return res;
    }
    Value v = next_value[depth];
    while (v < inst.d() && !is_available(inst, schedule, depth, a, v)) ++v;
    if (v < inst.d()) {
      if (res.nodes_visited == node_budget) {
        res.status = SolveStatus::BudgetExhausted;
        return res;
      }
      ++res.nodes_visited;
      a.set(order[depth], v);
      next_value[depth] = v + 1;
      ++depth;
      next_value[depth] = 0;
      continue;
    }
    ++res.dead_ends;
    if (depth == 0) {
      res.status = SolveStatus::Unsat;
      return res;
    }
    --depth;
    a.unset(order[depth]);
  }
}

bool brute_force_sat(const Instance& inst, std::uint64_t budget) {
  const std::uint32_t n = inst.n(), d = inst.d();
  std::uint64_t total = 1;
  for (std::uint32_t i = 0; i < n; ++i) {
    if (total > budget / d) throw BudgetExceeded("brute_force_sat: d^n exceeds the enumeration budget");
    total *= d;
  }
  Assignment a(n);
  for (Var v = 0; v < n; ++v) a.set(v, 0);
  for (std::uint64_t step = 0; step < total; ++step) {
    if (check_solution(inst, a)) return true;
    for (Var v = n; v-- > 0;) {  // odometer increment
      if (a[v] + 1 < d) {
        a.set(v, a[v] + 1);
        break;
      }
      a.set(v, 0);
    }
  }
  return false;
}

namespace {

class BackTrackFreeCheck {
 public:
  BackTrackFreeCheck(const Instance& inst, std::span<const Var> order, std::uint64_t budget)
      : inst_(inst), schedule_(inst, order), budget_(budget), a_(inst.n()) {}

  bool run() { return extend(0); }

 private:
  // a_ is compatible with every constraint inside order[0..depth-1].
  bool extend(std::size_t depth) {
    if (depth == schedule_.order().size()) return true;
    bool any = false;
    for (Value v = 0; v < inst_.d(); ++v) {
      if (!is_available(inst_, schedule_, depth, a_, v)) continue;
      any = true;
      if (++visited_ > budget_) throw BudgetExceeded("exact_backtrack_free: prefix enumeration budget exceeded");
      a_.set(schedule_.order()[depth], v);
      const bool ok = extend(depth + 1);
      a_.unset(schedule_.order()[depth]);
      if (!ok) return false;
    }
    return any;
  }

  const Instance& inst_;
  PrefixSchedule schedule_;
  std::uint64_t budget_;
  std::uint64_t visited_ = 0;
  Assignment a_;
};

}  // namespace

bool exact_backtrack_free(const Instance& inst, std::span<const Var> order, std::uint64_t budget) {
  return BackTrackFreeCheck(inst, order, budget).run();
}

bool is_backtrack_free(const Instance& inst, const std::vector<std::vector<Var>>& candidates, std::uint64_t budget) {
  if (!candidates.empty()) {
    return std::any_of(candidates.begin(), candidates.end(),
                       [&](const std::vector<Var>& order) { return exact_backtrack_free(inst, order, budget); });
  }
  if (inst.n() > 8) return exact_backtrack_free(inst, width_optimal_order(inst), budget);
  std::vector<Var> order(inst.n());
  std::iota(order.begin(), order.end(), Var{0});
  do {
    if (exact_backtrack_free(inst, order, budget)) return true;
  } while (std::next_permutation(order.begin(), order.end()));
  return false;
}

std::string to_record(const GreedyOutcome& outcome) {
  std::ostringstream out;
  out << "success=" << (outcome.success ? 1 : 0) << " steps=" << outcome.steps << " stuck_at=";
  if (outcome.stuck_at)
    out << *outcome.stuck_at;
  else
    out << "none";
  return out.str();
}

std::string to_record(const SolveResult& result) {
  std::ostringstream out;
  out << "status=" << to_string(result.status) << " dead_ends=" << result.dead_ends
      << " nodes_visited=" << result.nodes_visited;
  return out.str();
}

}  // namespace rbcsp
