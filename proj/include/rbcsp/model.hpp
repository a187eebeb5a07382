#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rbcsp {

using Var = std::uint32_t;
using Value = std::uint32_t;
using TupleCode = std::uint64_t;

// Largest tuple space d^k a single relation may span. Relations are stored
// as explicit bitsets, so this bounds the per-constraint memory (2 MiB).
inline constexpr TupleCode kMaxTupleSpace = TupleCode{1} << 24;

// Raised when a caller-supplied enumeration or node budget would be exceeded.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ModelVariant { RB, RD };

std::string to_string(ModelVariant model);
ModelVariant parse_model(const std::string& text);

// Control parameters of Model RB / Model RD.
//   d = round(n^alpha), at least 2
//   m = round(r * n * ln n), at least 1
//   q = round((1 - p) * d^k), clamped to [1, d^k - 1]   (RB only)
struct GenParams {
  std::uint32_t n = 0;
  std::uint32_t k = 2;
  double alpha = 1.0;
  double p = 0.5;
  double r = 1.0;
  ModelVariant model = ModelVariant::RD;
  std::uint64_t seed = 0;

  // Throws std::invalid_argument describing the first violated invariant.
  void validate() const;

  std::uint32_t domain_size() const;
  std::uint64_t constraint_count() const;
  std::uint64_t rb_compatible_count() const;

  friend bool operator==(const GenParams&, const GenParams&) = default;
};

// d^k, or nullopt when it exceeds kMaxTupleSpace.
std::optional<TupleCode> tuple_space(std::uint32_t d, std::uint32_t k);

// Base-d positional code of a scope assignment, first position most significant.
TupleCode encode_tuple(std::span<const Value> values, std::uint32_t d);
std::vector<Value> decode_tuple(TupleCode code, std::uint32_t k, std::uint32_t d);

// Set of compatible tuple codes over [0, size), stored as a bitset.
class Relation {
 public:
  Relation() = default;
  explicit Relation(TupleCode size) : size_(size), words_((size + 63) / 64, 0) {}

  static Relation full(TupleCode size);

  TupleCode size() const { return size_; }
  bool contains(TupleCode code) const { return (words_[code >> 6] >> (code & 63)) & 1U; }
  void insert(TupleCode code) { words_[code >> 6] |= std::uint64_t{1} << (code & 63); }
  void erase(TupleCode code) { words_[code >> 6] &= ~(std::uint64_t{1} << (code & 63)); }

  std::uint64_t count() const;
  std::vector<TupleCode> codes() const;

  friend bool operator==(const Relation&, const Relation&) = default;

 private:
  TupleCode size_ = 0;
  std::vector<std::uint64_t> words_;
};

struct Constraint {
  std::vector<Var> scope;  // strictly increasing
  Relation compatible;     // over d^|scope| codes

  friend bool operator==(const Constraint&, const Constraint&) = default;
};

// Partial assignment of values to variables [0, n).
class Assignment {
 public:
  static constexpr Value kUnassigned = std::numeric_limits<Value>::max();

  Assignment() = default;
  explicit Assignment(std::size_t n) : values_(n, kUnassigned) {}

  std::size_t size() const { return values_.size(); }
  bool assigned(Var v) const { return values_.at(v) != kUnassigned; }
  std::optional<Value> get(Var v) const;
  Value operator[](Var v) const { return values_[v]; }
  void set(Var v, Value value) { values_.at(v) = value; }
  void unset(Var v) { values_.at(v) = kUnassigned; }
  bool total() const;
  std::size_t assigned_count() const;

  const std::vector<Value>& raw() const { return values_; }

  friend bool operator==(const Assignment&, const Assignment&) = default;

 private:
  std::vector<Value> values_;
};

class Instance {
 public:
  Instance() = default;
  // Validates every scope (arity k, increasing, < n) and relation size d^k.
  Instance(GenParams params, std::uint32_t d, std::vector<Constraint> constraints);

  const GenParams& params() const { return params_; }
  std::uint32_t n() const { return params_.n; }
  std::uint32_t k() const { return params_.k; }
  std::uint32_t d() const { return d_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }

  friend bool operator==(const Instance&, const Instance&) = default;

 private:
  GenParams params_;
  std::uint32_t d_ = 0;
  std::vector<Constraint> constraints_;
};

// Draws the constraint scope for constraint `index`; shared with the
// hypergraph-only generator so both produce identical scopes.
std::vector<Var> draw_scope(const GenParams& params, std::uint64_t index);

Instance generate(const GenParams& params);

// Tuple code of `a` restricted to `scope`. Throws if a scope variable is unassigned.
TupleCode restrict_code(std::span<const Var> scope, const Assignment& a, std::uint32_t d);

bool is_compatible(const Constraint& c, const Assignment& a, std::uint32_t d);
bool check_solution(const Instance& inst, const Assignment& a);

}  // namespace rbcsp
