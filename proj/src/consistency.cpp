#include "rbcsp/consistency.hpp"

#include <algorithm>
#include <bit>
#include <iterator>
#include <stdexcept>

#include "rbcsp/search.hpp"

namespace rbcsp {

std::vector<std::vector<std::uint32_t>> incidence(const Instance& inst) {
  std::vector<std::vector<std::uint32_t>> inc(inst.n());
  const auto& cs = inst.constraints();
  for (std::uint32_t ci = 0; ci < cs.size(); ++ci)
    for (Var v : cs[ci].scope) inc[v].push_back(ci);
  return inc;
}

namespace {

class WorkMeter {
 public:
  explicit WorkMeter(std::uint64_t budget) : budget_(budget) {}
  void charge(std::uint64_t units, const char* who) {
    used_ += units;
    if (used_ > budget_) throw BudgetExceeded(std::string(who) + ": enumeration budget exceeded");
  }

 private:
  std::uint64_t budget_;
  std::uint64_t used_ = 0;
};

// Neighborhood of u with respect to one centered constraint set, plus a
// depth-first enumerator of the compatible rest assignments.
class Neighborhood {
 public:
  Neighborhood(const Instance& inst, const std::vector<std::vector<std::uint32_t>>& inc, Var u,
               std::span<const std::uint32_t> centered)
      : inst_(inst), u_(u), centered_(centered.begin(), centered.end()) {
    const auto& cs = inst.constraints();
    for (std::uint32_t ci : centered_) {
      const auto& scope = cs.at(ci).scope;
      if (std::find(scope.begin(), scope.end(), u) == scope.end())
        throw std::invalid_argument("centered constraint " + std::to_string(ci) + " does not contain variable " +
                                    std::to_string(u));
      neighborhood_.insert(neighborhood_.end(), scope.begin(), scope.end());
    }
    std::sort(neighborhood_.begin(), neighborhood_.end());
    neighborhood_.erase(std::unique(neighborhood_.begin(), neighborhood_.end()), neighborhood_.end());
    std::copy_if(neighborhood_.begin(), neighborhood_.end(), std::back_inserter(rest_),
                 [u](Var v) { return v != u; });

    std::vector<std::int32_t> rest_pos(inst.n(), -1);
    for (std::size_t j = 0; j < rest_.size(); ++j) rest_pos[rest_[j]] = static_cast<std::int32_t>(j);
    closing_.resize(rest_.size());
    for (Var x : rest_) {
      for (std::uint32_t ci : inc[x]) {
        const auto& scope = cs[ci].scope;
        if (scope.front() != x) continue;  // visit each constraint once
        if (std::all_of(scope.begin(), scope.end(), [&](Var y) { return rest_pos[y] >= 0; })) {
          internal_.push_back(ci);
          closing_[rest_pos[scope.back()]].push_back(ci);
        }
      }
    }
    std::sort(internal_.begin(), internal_.end());
  }

  const std::vector<Var>& neighborhood() const { return neighborhood_; }
  const std::vector<Var>& rest() const { return rest_; }
  const std::vector<std::uint32_t>& internal() const { return internal_; }

  // Calls visit(a) for every compatible rest assignment; stops early when visit returns false.
  template <typename Visit>
  bool for_each_rest(Assignment& a, WorkMeter& meter, const char* who, Visit&& visit) const {
    return descend(0, a, meter, who, visit);
  }

  // Whether some value of u satisfies every centered constraint given `a` on the rest.
  bool has_value_for_u(Assignment& a, WorkMeter& meter, const char* who) const {
    meter.charge(inst_.d(), who);
    const auto& cs = inst_.constraints();
    for (Value v = 0; v < inst_.d(); ++v) {
      a.set(u_, v);
      const bool ok = std::all_of(centered_.begin(), centered_.end(), [&](std::uint32_t ci) {
        return cs[ci].compatible.contains(restrict_code(cs[ci].scope, a, inst_.d()));
      });
      a.unset(u_);
      if (ok) return true;
    }
    return false;
  }

  // The centered set is consistent at u.
  bool consistent(Assignment& a, WorkMeter& meter, const char* who) const {
    if (centered_.empty()) return true;
    return for_each_rest(a, meter, who, [&](Assignment& full) { return has_value_for_u(full, meter, who); });
  }

 private:
  template <typename Visit>
  bool descend(std::size_t depth, Assignment& a, WorkMeter& meter, const char* who, Visit& visit) const {
    if (depth == rest_.size()) return visit(a);
    const auto& cs = inst_.constraints();
    const Var x = rest_[depth];
    for (Value v = 0; v < inst_.d(); ++v) {
      meter.charge(1, who);
      a.set(x, v);
      const bool ok = std::all_of(closing_[depth].begin(), closing_[depth].end(), [&](std::uint32_t ci) {
        return cs[ci].compatible.contains(restrict_code(cs[ci].scope, a, inst_.d()));
      });
      if (ok && !descend(depth + 1, a, meter, who, visit)) {
        a.unset(x);
        return false;
      }
    }
    a.unset(x);
    return true;
  }

  const Instance& inst_;
  Var u_;
  std::vector<std::uint32_t> centered_;
  std::vector<Var> neighborhood_;
  std::vector<Var> rest_;
  std::vector<std::uint32_t> internal_;
  std::vector<std::vector<std::uint32_t>> closing_;  // internal constraints by last rest position
};

}  // namespace

NeighborhoodContext build_context(const Instance& inst, Var u, std::span<const std::uint32_t> centered,
                                  std::uint64_t budget) {
  if (u >= inst.n()) throw std::invalid_argument("build_context: variable out of range");
  const auto inc = incidence(inst);
  const Neighborhood nb(inst, inc, u, centered);
  NeighborhoodContext ctx;
  ctx.u = u;
  ctx.centered.assign(centered.begin(), centered.end());
  ctx.neighborhood = nb.neighborhood();
  ctx.rest = nb.rest();
  ctx.internal = nb.internal();
  WorkMeter meter(budget);
  Assignment a(inst.n());
  nb.for_each_rest(a, meter, "build_context", [&](const Assignment& full) {
    std::vector<Value> row;
    row.reserve(ctx.rest.size());
    for (Var x : ctx.rest) row.push_back(full[x]);
    ctx.compatible_rest.push_back(std::move(row));
    return true;
  });
  return ctx;
}

namespace {

bool vertex_consistent_with(const Instance& inst, const std::vector<std::vector<std::uint32_t>>& inc, Var u,
                            std::uint32_t t, const ConsistencyLimits& limits, WorkMeter& meter) {
  if (t == 0) return true;
  const auto& mine = inc[u];
  const auto deg = static_cast<std::uint32_t>(mine.size());
  if (deg > std::min<std::uint32_t>(limits.max_degree, 30))
    throw BudgetExceeded("vertex_centered_consistent: deg(" + std::to_string(u) + ") = " + std::to_string(deg) +
                         " exceeds the subset enumeration cap " + std::to_string(limits.max_degree));
  const std::uint32_t size_cap = std::min(t, deg);
  Assignment a(inst.n());
  std::vector<std::uint32_t> subset;
  for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << deg); ++mask) {
    if (static_cast<std::uint32_t>(std::popcount(mask)) > size_cap) continue;
    subset.clear();
    for (std::uint32_t j = 0; j < deg; ++j)
      if (mask & (std::uint32_t{1} << j)) subset.push_back(mine[j]);
    const Neighborhood nb(inst, inc, u, subset);
    if (!nb.consistent(a, meter, "vertex_centered_consistent")) return false;
  }
  return true;
}

}  // namespace

bool vertex_centered_consistent(const Instance& inst, Var u, std::uint32_t t, ConsistencyLimits limits) {
  if (u >= inst.n()) throw std::invalid_argument("vertex_centered_consistent: variable out of range");
  WorkMeter meter(limits.budget);
  return vertex_consistent_with(inst, incidence(inst), u, t, limits, meter);
}

bool instance_consistent(const Instance& inst, std::uint32_t t, ConsistencyLimits limits) {
  const auto inc = incidence(inst);
  WorkMeter meter(limits.budget);
  for (Var u = 0; u < inst.n(); ++u)
    if (!vertex_consistent_with(inst, inc, u, t, limits, meter)) return false;
  return true;
}

bool strong_bf_certificate(const Instance& inst, std::span<const Var> order, ConsistencyLimits limits) {
  const PrefixSchedule schedule(inst, order);
  const auto inc = incidence(inst);
  WorkMeter meter(limits.budget);
  Assignment a(inst.n());
  for (std::size_t i = 0; i < order.size(); ++i) {
    const Neighborhood nb(inst, inc, order[i], schedule.closing(i));
    if (!nb.consistent(a, meter, "strong_bf_certificate")) return false;
  }
  return true;
}

}  // namespace rbcsp
