#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rbcsp/model.hpp"

namespace rbcsp {

// k-uniform multi-hypergraph. Edges are stored flat, `arity` pins each,
// ascending within an edge. Parallel edges are kept.
class Hypergraph {
 public:
  Hypergraph() = default;
  Hypergraph(std::uint32_t n_nodes, std::uint32_t arity, std::vector<Var> pins);

  std::uint32_t n_nodes() const { return n_nodes_; }
  std::uint32_t arity() const { return arity_; }
  std::size_t n_edges() const { return arity_ == 0 ? 0 : pins_.size() / arity_; }
  std::span<const Var> edge(std::size_t e) const { return {pins_.data() + e * arity_, arity_}; }
  const std::vector<Var>& pins() const { return pins_; }

  // Edges incident to node v (CSR layout, edge ids ascending, one entry per pin).
  std::span<const std::uint32_t> incident(Var v) const {
    return {incidence_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }

  friend bool operator==(const Hypergraph& a, const Hypergraph& b) {
    return a.n_nodes_ == b.n_nodes_ && a.arity_ == b.arity_ && a.pins_ == b.pins_;
  }

 private:
  std::uint32_t n_nodes_ = 0;
  std::uint32_t arity_ = 0;
  std::vector<Var> pins_;
  std::vector<std::uint32_t> offsets_{0};
  std::vector<std::uint32_t> incidence_;
};

Hypergraph from_instance(const Instance& inst);

// Constraint hypergraph of generate(params) without drawing any relation.
Hypergraph random_hypergraph(const GenParams& params);

std::vector<std::uint32_t> degrees(const Hypergraph& hg);
std::uint32_t max_degree(const Hypergraph& hg);

// Minimum degree over all nodes. Throws std::invalid_argument on an empty node set.
std::uint32_t linkage(const Hypergraph& hg);

// A variable ordering. perm[i] is the node at position i; widths[v] is the
// number of edges that contain v and lie entirely within perm[0..pos(v)].
struct Ordering {
  std::vector<Var> perm;
  std::vector<std::uint32_t> widths;

  std::uint32_t width() const;
  std::vector<std::uint32_t> positions() const;

  // Computes per-node widths of `perm` on `hg`. Throws if perm is not a permutation.
  static Ordering from_perm(const Hypergraph& hg, std::vector<Var> perm);
};

bool is_permutation_of(std::span<const Var> perm, std::uint32_t n);

enum class TieBreak { LowestIndex, SeededRandom };

struct PeelOptions {
  TieBreak tie_break = TieBreak::LowestIndex;
  std::uint64_t seed = 0;
};

struct WidthResult {
  std::uint32_t width = 0;
  Ordering ordering;
};

// Min-degree peeling. The ordering is the reverse of the removal order, so each
// node's width equals its degree at removal; the maximum is the hypergraph width.
WidthResult compute_width(const Hypergraph& hg, PeelOptions options = {});

struct CoreResult {
  std::vector<Var> nodes;              // ascending; empty when no core exists
  std::vector<std::uint32_t> edges;    // ids of edges lying entirely inside `nodes`
  std::vector<Var> peel_trace;         // removal order
  std::vector<std::uint32_t> peel_degrees;  // degree of each trace node when removed (< min_degree)

  bool empty() const { return nodes.empty(); }
};

// The maximal sub-hypergraph with minimum degree >= min_degree, found by
// repeatedly deleting a node of degree < min_degree together with its edges.
CoreResult find_core(const Hypergraph& hg, std::uint32_t min_degree, PeelOptions options = {});

// Induced sub-hypergraph on `nodes` (relabelled 0..|nodes|-1 in ascending order).
Hypergraph induced(const Hypergraph& hg, std::span<const Var> nodes);

// "hgraph v1" dump: header, "n_nodes k n_edges", then one ascending edge per line.
std::string serialize(const Hypergraph& hg);
Hypergraph deserialize_hypergraph(std::string_view text);

}  // namespace rbcsp
