#pragma once

#include <cstddef>

#include "kanon/graph.hpp"

namespace kanon {

struct MatchScore {
  bool isomorphic = false;
  double degree_fidelity = 0.0;  // 0 unless isomorphic
  bool exhaustive = true;        // false when the search budget ran out
};

enum class FidelityNorm {
  kExternalSum,  // 1 - sum|diff| / (sum ext1 + sum ext2)
  kMaxSpread,    // 1 - sum|diff| / (members * max_spread)
};

struct FidelityOptions {
  FidelityNorm norm = FidelityNorm::kExternalSum;
  double max_spread = 0.0;  // used by kMaxSpread; e.g. max degree - min degree of the host
  std::size_t state_budget = 200000;
};

/// Rooted isomorphism test: a bijection between the member sets that maps
/// reference to reference and preserves internal edges.
bool vf2_isomorphic(const NeighborhoodSubgraph& s1, const NeighborhoodSubgraph& s2);

/// Isomorphism plus degree fidelity: over all rooted isomorphisms, the one
/// minimizing the total external-degree mismatch is scored.
MatchScore vf2d_score(const NeighborhoodSubgraph& s1, const NeighborhoodSubgraph& s2,
                      const FidelityOptions& options = {});

}  // namespace kanon
