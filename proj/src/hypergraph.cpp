#include "rbcsp/hypergraph.hpp"

#include <algorithm>
#include <iterator>
#include <set>
#include <sstream>
#include <stdexcept>

#include "rbcsp/instance_io.hpp"
#include "rbcsp/rng.hpp"

namespace rbcsp {

Hypergraph::Hypergraph(std::uint32_t n_nodes, std::uint32_t arity, std::vector<Var> pins)
    : n_nodes_(n_nodes), arity_(arity), pins_(std::move(pins)) {
  if (arity_ == 0 && !pins_.empty()) throw std::invalid_argument("Hypergraph: zero arity with pins");
  if (arity_ != 0 && pins_.size() % arity_ != 0) throw std::invalid_argument("Hypergraph: ragged edge list");
  for (std::size_t e = 0; e < n_edges(); ++e) {
    auto pins_e = edge(e);
    for (std::size_t j = 0; j < pins_e.size(); ++j) {
      if (pins_e[j] >= n_nodes_) throw std::invalid_argument("Hypergraph: node index out of range");
      if (j > 0 && pins_e[j - 1] >= pins_e[j])
        throw std::invalid_argument("Hypergraph: edge pins must be strictly increasing");
    }
  }
  offsets_.assign(static_cast<std::size_t>(n_nodes_) + 1, 0);
  for (Var v : pins_) ++offsets_[v + 1];
  for (std::uint32_t v = 0; v < n_nodes_; ++v) offsets_[v + 1] += offsets_[v];
  incidence_.resize(pins_.size());
  std::vector<std::uint32_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (std::size_t e = 0; e < n_edges(); ++e)
    for (Var v : edge(e)) incidence_[fill[v]++] = static_cast<std::uint32_t>(e);
}

Hypergraph from_instance(const Instance& inst) {
  std::vector<Var> pins;
  pins.reserve(inst.constraints().size() * inst.k());
  for (const Constraint& c : inst.constraints()) pins.insert(pins.end(), c.scope.begin(), c.scope.end());
  return Hypergraph(inst.n(), inst.k(), std::move(pins));
}

Hypergraph random_hypergraph(const GenParams& params) {
  params.validate();
  const std::uint64_t m = params.constraint_count();
  std::vector<Var> pins;
  pins.reserve(m * params.k);
  for (std::uint64_t i = 0; i < m; ++i) {
    const auto scope = draw_scope(params, i);
    pins.insert(pins.end(), scope.begin(), scope.end());
  }
  return Hypergraph(params.n, params.k, std::move(pins));
}

std::vector<std::uint32_t> degrees(const Hypergraph& hg) {
  std::vector<std::uint32_t> deg(hg.n_nodes());
  for (Var v = 0; v < hg.n_nodes(); ++v) deg[v] = static_cast<std::uint32_t>(hg.incident(v).size());
  return deg;
}

std::uint32_t max_degree(const Hypergraph& hg) {
  const auto deg = degrees(hg);
  return deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
}

std::uint32_t linkage(const Hypergraph& hg) {
  if (hg.n_nodes() == 0) throw std::invalid_argument("linkage: hypergraph has no nodes");
  const auto deg = degrees(hg);
  return *std::min_element(deg.begin(), deg.end());
}

bool is_permutation_of(std::span<const Var> perm, std::uint32_t n) {
  if (perm.size() != n) return false;
  std::vector<char> seen(n, 0);
  for (Var v : perm) {
    if (v >= n || seen[v]) return false;
    seen[v] = 1;
  }
  return true;
}

std::uint32_t Ordering::width() const {
  return widths.empty() ? 0 : *std::max_element(widths.begin(), widths.end());
}

std::vector<std::uint32_t> Ordering::positions() const {
  std::vector<std::uint32_t> pos(perm.size());
  for (std::uint32_t i = 0; i < perm.size(); ++i) pos[perm[i]] = i;
  return pos;
}

Ordering Ordering::from_perm(const Hypergraph& hg, std::vector<Var> perm) {
  if (!is_permutation_of(perm, hg.n_nodes())) throw std::invalid_argument("Ordering: not a permutation of the nodes");
  Ordering ord;
  ord.perm = std::move(perm);
  const auto pos = ord.positions();
  ord.widths.assign(hg.n_nodes(), 0);
  for (std::size_t e = 0; e < hg.n_edges(); ++e) {
    auto pins = hg.edge(e);
    const Var last = *std::max_element(pins.begin(), pins.end(), [&](Var a, Var b) { return pos[a] < pos[b]; });
    ++ord.widths[last];
  }
  return ord;
}

namespace {

// Bucket queue over current degrees. Removing a node kills every edge that
// still contains it, since such an edge can no longer lie inside the
// remaining node set.
class Peeler {
 public:
  Peeler(const Hypergraph& hg, PeelOptions options)
      : hg_(hg), options_(options), rng_(options.seed), deg_(degrees(hg)), removed_(hg.n_nodes(), 0),
        edge_dead_(hg.n_edges(), 0) {
    const std::uint32_t top = deg_.empty() ? 0 : *std::max_element(deg_.begin(), deg_.end());
    buckets_.resize(static_cast<std::size_t>(top) + 1);
    for (Var v = 0; v < hg.n_nodes(); ++v) buckets_[deg_[v]].insert(v);
    remaining_ = hg.n_nodes();
  }

  std::uint32_t remaining() const { return remaining_; }
  std::uint32_t degree(Var v) const { return deg_[v]; }
  bool removed(Var v) const { return removed_[v] != 0; }
  bool edge_alive(std::size_t e) const { return edge_dead_[e] == 0; }

  std::uint32_t min_degree() {
    while (buckets_[cursor_].empty()) ++cursor_;
    return cursor_;
  }

  Var pick_min() {
    const auto& bucket = buckets_[min_degree()];
    if (options_.tie_break == TieBreak::LowestIndex) return *bucket.begin();
    return *std::next(bucket.begin(), static_cast<std::ptrdiff_t>(rng_.below(bucket.size())));
  }

  void remove(Var v) {
    buckets_[deg_[v]].erase(v);
    removed_[v] = 1;
    --remaining_;
    for (std::uint32_t e : hg_.incident(v)) {
      if (edge_dead_[e]) continue;
      edge_dead_[e] = 1;
      for (Var w : hg_.edge(e)) {
        if (w == v) continue;
        buckets_[deg_[w]].erase(w);
        --deg_[w];
        buckets_[deg_[w]].insert(w);
        cursor_ = std::min(cursor_, deg_[w]);
      }
    }
  }

 private:
  const Hypergraph& hg_;
  PeelOptions options_;
  Rng rng_;
  std::vector<std::uint32_t> deg_;
  std::vector<char> removed_;
  std::vector<char> edge_dead_;
  std::vector<std::set<Var>> buckets_;
  std::uint32_t cursor_ = 0;
  std::uint32_t remaining_ = 0;
};

}  // namespace

WidthResult compute_width(const Hypergraph& hg, PeelOptions options) {
  Peeler peeler(hg, options);
  WidthResult result;
  result.ordering.perm.resize(hg.n_nodes());
  result.ordering.widths.assign(hg.n_nodes(), 0);
  for (std::uint32_t i = hg.n_nodes(); i-- > 0;) {
    const Var v = peeler.pick_min();
    result.ordering.perm[i] = v;
    result.ordering.widths[v] = peeler.degree(v);
    result.width = std::max(result.width, peeler.degree(v));
    peeler.remove(v);
  }
  return result;
}

CoreResult find_core(const Hypergraph& hg, std::uint32_t min_degree, PeelOptions options) {
  if (min_degree < 1) throw std::invalid_argument("find_core: minimum degree must be at least 1");
  Peeler peeler(hg, options);
  CoreResult result;
  while (peeler.remaining() > 0 && peeler.min_degree() < min_degree) {
    const Var v = peeler.pick_min();
    result.peel_trace.push_back(v);
    result.peel_degrees.push_back(peeler.degree(v));
    peeler.remove(v);
  }
  for (Var v = 0; v < hg.n_nodes(); ++v)
    if (!peeler.removed(v)) result.nodes.push_back(v);
  for (std::size_t e = 0; e < hg.n_edges(); ++e)
    if (peeler.edge_alive(e)) result.edges.push_back(static_cast<std::uint32_t>(e));
  return result;
}

Hypergraph induced(const Hypergraph& hg, std::span<const Var> nodes) {
  std::vector<Var> sorted(nodes.begin(), nodes.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<Var> relabel(hg.n_nodes(), Assignment::kUnassigned);
  for (std::uint32_t i = 0; i < sorted.size(); ++i) relabel.at(sorted[i]) = i;
  std::vector<Var> pins;
  for (std::size_t e = 0; e < hg.n_edges(); ++e) {
    auto pins_e = hg.edge(e);
    if (std::all_of(pins_e.begin(), pins_e.end(), [&](Var v) { return relabel[v] != Assignment::kUnassigned; }))
      for (Var v : pins_e) pins.push_back(relabel[v]);
  }
  return Hypergraph(static_cast<std::uint32_t>(sorted.size()), hg.arity(), std::move(pins));
}

std::string serialize(const Hypergraph& hg) {
  std::ostringstream out;
  out << "hgraph v1\n" << hg.n_nodes() << ' ' << hg.arity() << ' ' << hg.n_edges() << '\n';
  for (std::size_t e = 0; e < hg.n_edges(); ++e) {
    auto pins = hg.edge(e);
    for (std::size_t j = 0; j < pins.size(); ++j) out << (j ? " " : "") << pins[j];
    out << '\n';
  }
  return out.str();
}

Hypergraph deserialize_hypergraph(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string magic, version;
  if (!(in >> magic >> version) || magic != "hgraph" || version != "v1")
    throw FormatError("hypergraph: missing 'hgraph v1' header");
  std::uint32_t n = 0, k = 0;
  std::uint64_t m = 0;
  if (!(in >> n >> k >> m)) throw FormatError("hypergraph: malformed size line");
  std::vector<Var> pins(m * k);
  for (auto& v : pins)
    if (!(in >> v)) throw FormatError("hypergraph: truncated edge list");
  std::string extra;
  if (in >> extra) throw FormatError("hypergraph: trailing data after edge list");
  try {
    return Hypergraph(n, k, std::move(pins));
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
}

}  // namespace rbcsp
