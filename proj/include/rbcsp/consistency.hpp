#pragma once

// Vertex-centered (also called variable-centered) consistency.
//
// For a variable u and a set C_u of constraints that all contain u, let N be
// the variables those constraints touch and let the internal constraints be
// every instance constraint whose scope lies inside N \ {u}. The rest-set T
// holds each assignment of N \ {u} compatible with all internal constraints.
// u is consistent for C_u when every member of T extends by some value of u
// that satisfies all of C_u at once.

#include <cstdint>
#include <span>
#include <vector>

#include "rbcsp/model.hpp"

namespace rbcsp {

struct ConsistencyLimits {
  std::uint32_t max_degree = 16;       // cap on deg(u) for exhaustive subset enumeration
  std::uint64_t budget = 10'000'000;   // enumeration work units per call
};

struct NeighborhoodContext {
  Var u = 0;
  std::vector<std::uint32_t> centered;  // C_u, constraint indices
  std::vector<Var> neighborhood;        // N, ascending; empty when C_u is empty
  std::vector<Var> rest;                // N \ {u}, ascending
  std::vector<std::uint32_t> internal;  // constraints with scope inside `rest`
  // T: each entry assigns rest[j] the value at index j. Holds one empty
  // entry when `rest` is empty.
  std::vector<std::vector<Value>> compatible_rest;
};

// Constraint indices per variable.
std::vector<std::vector<std::uint32_t>> incidence(const Instance& inst);

NeighborhoodContext build_context(const Instance& inst, Var u, std::span<const std::uint32_t> centered,
                                  std::uint64_t budget = 10'000'000);

bool vertex_centered_consistent(const Instance& inst, Var u, std::uint32_t t, ConsistencyLimits limits = {});
bool instance_consistent(const Instance& inst, std::uint32_t t, ConsistencyLimits limits = {});

// Sufficient condition for backtrack-freeness under `order`: for every
// position, u-centered consistency holds for the constraints closing at u.
// True certifies exact_backtrack_free(inst, order); false is inconclusive.
bool strong_bf_certificate(const Instance& inst, std::span<const Var> order, ConsistencyLimits limits = {});

}  // namespace rbcsp
