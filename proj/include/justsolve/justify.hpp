#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "justsolve/justification.hpp"

namespace pg {

/**
 * Progress measure of a justification: per level, the number of justified
 * nodes whose justification level equals it. Levels run from infinity down
 * through the game's priority range; the total is bounded by the node count.
 */
struct SizeTuple {
    std::uint32_t at_infinity = 0;
    std::vector<std::uint32_t> at_priority;  // indexed by priority, 0..max

    bool operator==(const SizeTuple&) const = default;
};

/// Lexicographic order, most significant level first: infinity, then
/// priorities in descending order.
std::strong_ordering lex_compare(const SizeTuple& a, const SizeTuple& b);

/// Current size of a justification.
SizeTuple size_of(const Justification& j);

/**
 * Which nodes lose their direct justification when a hypothesis flips:
 * minimal resets exactly the nodes reaching the flipped node, aggressive
 * resets every node with a level below the new justification's level.
 */
enum class ResetPolicy : std::uint8_t { minimal, aggressive };

/**
 * Decides whether Justify(j, v, dj) may fire, and for which player: dj must
 * win v under the hypothesis, and its level must be at least v's level (or
 * strictly above it when v is already justified). Safety of j is a contract
 * of the caller, not re-checked here.
 */
std::optional<Player> executable(const Justification& j, NodeId v, DirectJustification dj);

struct JustifyEffect {
    Player winner = Player::even;
    bool hypothesis_flipped = false;
    std::vector<NodeId> reset;    // nodes that became parameters again (sorted)
    std::vector<NodeId> touched;  // nodes whose level may have changed (sorted)
};

/**
 * The Justify step: installs dj at v for the winning player; when that flips
 * v's hypothesis, the reset set reverts to unjustified with default winners
 * first, all in one batch. Throws std::logic_error when not executable.
 */
JustifyEffect justify(Justification& j, NodeId v, DirectJustification dj,
                      ResetPolicy policy = ResetPolicy::minimal);

/**
 * Some executable pair on a safe justification with unjustified nodes:
 * the lowest-id unjustified node of minimal priority, with the first
 * hypothesis-agreeing owner move if one exists and all edges otherwise.
 * Throws std::logic_error when every node is justified.
 */
std::pair<NodeId, DirectJustification> find_justifiable(const Justification& j);

/// One recorded Justify step of a solver run.
struct JustifyStep {
    std::uint32_t index = 0;
    NodeId node = kNoNode;
    DirectJustification dj = DirectJustification::all_successors();
    Player winner = Player::even;
    std::vector<NodeId> reset;
    SizeTuple size_before;
    SizeTuple size_after;
};

/**
 * Tab-separated trace: one line per step with step number, node, dj targets,
 * winner, reset count and the resulting size tuple as level=count pairs in
 * descending level order. Header comments carry the node count.
 */
void write_trace(std::ostream& os, const ParityGame& g, std::span<const JustifyStep> steps);

}  // namespace pg
