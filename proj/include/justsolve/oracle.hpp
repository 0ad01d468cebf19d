#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "justsolve/game.hpp"

namespace pg {

struct OracleLimits {
    std::size_t max_nodes = 12;       // strategy spaces grow with out-degree products
    std::size_t max_plays = 1000000;  // cap for play enumeration
};

struct OracleBoundExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/**
 * Ground-truth solver for small games: enumerates every memoryless strategy
 * of each candidate winner over its owned non-parameter nodes and keeps the
 * counter-play test polynomial (parameter reachability plus top-priority
 * cycle analysis of the strategy-fixed subgraph). Deliberately free of any
 * justification machinery.
 */
Solution oracle_solve(const ParityGame& g, const ParameterMap& p, OracleLimits limits = {});

/**
 * All maximal plays from v consistent with a partial strategy (kNoNode
 * entries leave the node unconstrained): each play either halts at a
 * parameter or is cut at the first revisited node with a cycle marker.
 */
std::vector<Play> enumerate_plays(const ParityGame& g, const ParameterMap& p, NodeId v,
                                  const std::vector<NodeId>& strategy, OracleLimits limits = {});

/**
 * Reproducible random game: every node gets an owner, a priority in
 * [0, max_priority], each candidate edge independently with the given
 * density, and at least one successor. The generator is self-contained so
 * the same seed yields the same game on every platform.
 */
ParityGame random_game(std::uint64_t seed, std::size_t n_nodes, int max_priority,
                       double edge_density);

}  // namespace pg
