#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "justsolve/justify.hpp"

namespace pg {

enum class Algorithm : std::uint8_t { fixpoint, zielonka, priority_promotion };

struct SolverConfig {
    Algorithm algorithm = Algorithm::zielonka;
    ResetPolicy reset = ResetPolicy::minimal;
    bool collect_trace = false;
    bool audit = false;  // per-step safety and progress checks; implies collect_trace
    DependencyIndex dependency_index = DependencyIndex::scan_predecessors;
};

/// A sub-area solved at some level together with its promotion target.
struct Region {
    std::vector<NodeId> nodes;  // all with level >= the region level
    int level = 0;
    Level escape = Level::infinity();
};

struct PromotionEvent {
    int from_level;
    Level to_level;
};

struct SolverStats {
    std::size_t steps = 0;
    std::size_t resets = 0;
    std::size_t frames = 0;          // recursion frames entered beyond the first
    std::size_t stalls_broken = 0;   // steps taken outside the scripted order
    std::vector<PromotionEvent> promotions;  // priority promotion only
};

/// Raised in audited mode when a run violates a claimed invariant.
struct AuditError : std::logic_error {
    using std::logic_error::logic_error;
};

struct SolveResult {
    Solution solution;
    Justification justification;
    std::vector<JustifyStep> trace;
    SolverStats stats;
};

/// Solves a valid game with the configured algorithm; the winner map is the
/// final hypothesis and the strategies come from the justification graph.
SolveResult solve(const ParityGame& g, const SolverConfig& config = {});

SolveResult solve_fixpoint(const ParityGame& g, const SolverConfig& config = {});
SolveResult solve_zielonka(const ParityGame& g, const SolverConfig& config = {});
SolveResult solve_priority_promotion(const ParityGame& g, const SolverConfig& config = {});

/**
 * Whether the region {v in subgame | level(v) >= p} is closed: every node of
 * priority p in the subgame is justified. `region` must be exactly that set.
 */
bool region_closed(const Justification& j, std::span<const NodeId> region,
                   std::span<const NodeId> subgame, int p);

/**
 * Promotion target of a closed region: the minimum level among nodes outside
 * the region that a justification edge leaves it to, infinity when no such
 * escape exists. The result is a lower bound on the region's levels.
 */
Level escape_level(const Justification& j, std::span<const NodeId> region);

}  // namespace pg
