#include "rbcsp/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "rbcsp/rng.hpp"

namespace rbcsp {

std::string to_string(ModelVariant model) { return model == ModelVariant::RB ? "RB" : "RD"; }

ModelVariant parse_model(const std::string& text) {
  if (text == "RB" || text == "rb") return ModelVariant::RB;
  if (text == "RD" || text == "rd") return ModelVariant::RD;
  throw std::invalid_argument("unknown model variant '" + text + "' (expected RB or RD)");
}

void GenParams::validate() const {
  auto fail = [](const std::string& msg) { throw std::invalid_argument("GenParams: " + msg); };
  if (k < 2) fail("k must be at least 2");
  if (n < k) fail("n must be at least k (n=" + std::to_string(n) + ", k=" + std::to_string(k) + ")");
  if (!(p > 0.0 && p < 1.0)) fail("p must lie in the open interval (0,1)");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) fail("alpha must be positive");
  if (!(r > 0.0) || !std::isfinite(r)) fail("r must be positive");
}

std::uint32_t GenParams::domain_size() const {
  const double d = std::round(std::pow(static_cast<double>(n), alpha));
  if (!(d < 4.0e9)) throw std::invalid_argument("GenParams: domain size n^alpha overflows");
  return std::max<std::uint32_t>(2, static_cast<std::uint32_t>(d));
}

std::uint64_t GenParams::constraint_count() const {
  const double m = std::round(r * n * std::log(static_cast<double>(n)));
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(m));
}

std::uint64_t GenParams::rb_compatible_count() const {
  const auto space = tuple_space(domain_size(), k);
  if (!space) throw std::invalid_argument("GenParams: d^k exceeds the supported tuple space");
  const double q = std::round((1.0 - p) * static_cast<double>(*space));
  return std::clamp<std::uint64_t>(static_cast<std::uint64_t>(q), 1, *space - 1);
}

std::optional<TupleCode> tuple_space(std::uint32_t d, std::uint32_t k) {
  TupleCode space = 1;
  for (std::uint32_t i = 0; i < k; ++i) {
    if (d != 0 && space > kMaxTupleSpace / d) return std::nullopt;
    space *= d;
  }
  return space;
}

TupleCode encode_tuple(std::span<const Value> values, std::uint32_t d) {
  TupleCode code = 0;
  for (Value v : values) {
    if (v >= d) {
      throw std::invalid_argument("encode_tuple: value " + std::to_string(v) + " outside domain of size " +
                                  std::to_string(d));
    }
    code = code * d + v;
  }
  return code;
}

std::vector<Value> decode_tuple(TupleCode code, std::uint32_t k, std::uint32_t d) {
  std::vector<Value> values(k);
  for (std::uint32_t i = k; i-- > 0;) {
    values[i] = static_cast<Value>(code % d);
    code /= d;
  }
  if (code != 0) throw std::invalid_argument("decode_tuple: code outside [0, d^k)");
  return values;
}

Relation Relation::full(TupleCode size) {
  Relation rel(size);
  for (TupleCode c = 0; c < size; ++c) rel.insert(c);
  return rel;
}

std::uint64_t Relation::count() const {
  std::uint64_t total = 0;
  for (std::uint64_t w : words_) total += static_cast<std::uint64_t>(std::popcount(w));
  return total;
}

std::vector<TupleCode> Relation::codes() const {
  std::vector<TupleCode> out;
  out.reserve(count());
  for (TupleCode c = 0; c < size_; ++c)
    if (contains(c)) out.push_back(c);
  return out;
}

std::optional<Value> Assignment::get(Var v) const {
  const Value x = values_.at(v);
  if (x == kUnassigned) return std::nullopt;
  return x;
}

bool Assignment::total() const {
  return std::none_of(values_.begin(), values_.end(), [](Value x) { return x == kUnassigned; });
}

std::size_t Assignment::assigned_count() const {
  return static_cast<std::size_t>(
      std::count_if(values_.begin(), values_.end(), [](Value x) { return x != kUnassigned; }));
}

Instance::Instance(GenParams params, std::uint32_t d, std::vector<Constraint> constraints)
    : params_(params), d_(d), constraints_(std::move(constraints)) {
  if (d_ < 1) throw std::invalid_argument("Instance: domain size must be positive");
  const auto space = tuple_space(d_, params_.k);
  if (!space) throw std::invalid_argument("Instance: d^k exceeds the supported tuple space");
  for (std::size_t i = 0; i < constraints_.size(); ++i) {
    const Constraint& c = constraints_[i];
    std::ostringstream where;
    where << "Instance: constraint " << i << ": ";
    if (c.scope.size() != params_.k) throw std::invalid_argument(where.str() + "scope arity differs from k");
    for (std::size_t j = 0; j < c.scope.size(); ++j) {
      if (c.scope[j] >= params_.n) throw std::invalid_argument(where.str() + "scope variable out of range");
      if (j > 0 && c.scope[j - 1] >= c.scope[j])
        throw std::invalid_argument(where.str() + "scope not strictly increasing");
    }
    if (c.compatible.size() != *space) throw std::invalid_argument(where.str() + "relation size is not d^k");
  }
}

std::vector<Var> draw_scope(const GenParams& params, std::uint64_t index) {
  Rng rng(derive_seed(params.seed, {index}));
  std::vector<Var> scope;
  scope.reserve(params.k);
  while (scope.size() < params.k) {
    const auto v = static_cast<Var>(rng.below(params.n));
    if (std::find(scope.begin(), scope.end(), v) == scope.end()) scope.push_back(v);
  }
  std::sort(scope.begin(), scope.end());
  return scope;
}

namespace {

// Exactly `target` distinct codes out of `space`, uniformly.
Relation draw_exact(Rng& rng, TupleCode space, std::uint64_t target) {
  const bool invert = target > space / 2;
  const std::uint64_t picks = invert ? space - target : target;
  Relation rel = invert ? Relation::full(space) : Relation(space);
  std::uint64_t done = 0;
  while (done < picks) {
    const TupleCode c = rng.below(space);
    if (rel.contains(c) == invert) {
      if (invert)
        rel.erase(c);
      else
        rel.insert(c);
      ++done;
    }
  }
  return rel;
}

Relation draw_independent(Rng& rng, TupleCode space, double p) {
  Relation rel(space);
  for (TupleCode c = 0; c < space; ++c)
    if (rng.unit() >= p) rel.insert(c);
  return rel;
}

}  // namespace

Instance generate(const GenParams& params) {
  params.validate();
  const std::uint32_t d = params.domain_size();
  const auto space = tuple_space(d, params.k);
  if (!space) {
    throw std::invalid_argument("generate: d^k = " + std::to_string(d) + "^" + std::to_string(params.k) +
                                " exceeds the supported tuple space");
  }
  const std::uint64_t m = params.constraint_count();
  const std::uint64_t q = params.model == ModelVariant::RB ? params.rb_compatible_count() : 0;

  std::vector<Constraint> constraints;
  constraints.reserve(m);
  for (std::uint64_t i = 0; i < m; ++i) {
    Constraint c;
    c.scope = draw_scope(params, i);
    // The relation draws continue on a second substream of the same constraint.
    Rng rng(derive_seed(params.seed, {i, 1}));
    c.compatible = params.model == ModelVariant::RB ? draw_exact(rng, *space, q)
                                                    : draw_independent(rng, *space, params.p);
    constraints.push_back(std::move(c));
  }
  return Instance(params, d, std::move(constraints));
}

TupleCode restrict_code(std::span<const Var> scope, const Assignment& a, std::uint32_t d) {
  TupleCode code = 0;
  for (Var v : scope) {
    const Value x = a[v];
    if (x == Assignment::kUnassigned)
      throw std::invalid_argument("assignment leaves scope variable " + std::to_string(v) + " unassigned");
    code = code * d + x;
  }
  return code;
}

bool is_compatible(const Constraint& c, const Assignment& a, std::uint32_t d) {
  for (Var v : c.scope) {
    if (v >= a.size()) throw std::invalid_argument("is_compatible: scope variable outside assignment");
    if (a[v] != Assignment::kUnassigned && a[v] >= d)
      throw std::invalid_argument("is_compatible: assigned value outside the domain");
  }
  return c.compatible.contains(restrict_code(c.scope, a, d));
}

bool check_solution(const Instance& inst, const Assignment& a) {
  if (a.size() != inst.n() || !a.total())
    throw std::invalid_argument("check_solution: assignment must be total on all variables");
  return std::all_of(inst.constraints().begin(), inst.constraints().end(),
                     [&](const Constraint& c) { return is_compatible(c, a, inst.d()); });
}

}  // namespace rbcsp
