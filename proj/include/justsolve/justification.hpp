#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "justsolve/game.hpp"

namespace pg {

/// A justification level: a priority, or infinity when no parameter is reachable.
class Level {
public:
    constexpr Level() = default;  // infinity
    static constexpr Level infinity() { return Level(); }
    static constexpr Level of(int priority) { return Level(priority); }

    constexpr bool is_infinity() const { return value_ == kInf; }
    constexpr int priority() const { return value_; }

    friend constexpr auto operator<=>(Level, Level) = default;

    std::string str() const { return is_infinity() ? "inf" : std::to_string(value_); }

private:
    static constexpr int kInf = std::numeric_limits<int>::max();
    constexpr explicit Level(int v) : value_(v) {}
    int value_ = kInf;
};

/**
 * A direct justification in its compact single-field form: either one chosen
 * successor (a move of the node's owner) or a marker standing for all
 * outgoing edges (the opponent owns the node). The edge set itself is never
 * materialized.
 */
class DirectJustification {
public:
    static constexpr DirectJustification all_successors() { return DirectJustification(kNoNode); }
    static constexpr DirectJustification single(NodeId target) { return DirectJustification(target); }

    constexpr bool is_all() const { return target_ == kNoNode; }
    constexpr NodeId target() const { return target_; }

    bool operator==(const DirectJustification&) const = default;

    /// True when the edge (v, w) belongs to this direct justification of v.
    bool covers(const ParityGame& g, NodeId v, NodeId w) const;

    std::string str(const ParityGame& g, NodeId v) const;

private:
    constexpr explicit DirectJustification(NodeId t) : target_(t) {}
    NodeId target_ = kNoNode;
};

template <typename F>
void for_each_target(const ParityGame& g, NodeId v, DirectJustification dj, F f) {
    if (dj.is_all()) {
        for (NodeId w : g.successors(v)) f(w);
    } else {
        f(dj.target());
    }
}

/// How reverse edges of the justification graph are obtained.
enum class DependencyIndex : std::uint8_t {
    scan_predecessors,  // scan game predecessors, test dj membership
    dependent_sets,     // maintain an explicit set of dependents per node
};

/**
 * A justification (V, D, H) over a fixed game: a partial assignment of direct
 * justifications (the subgraph D) plus a total hypothesis H. Nodes without a
 * direct justification are unjustified and act as the parameters of the
 * induced parametrized game.
 *
 * Justification levels are cached per node and invalidated along the nodes
 * that reach a modified node; stale entries are recomputed lazily by a
 * strongly-connected-component pass over the stale part of D.
 *
 * Single writer; reads during a mutation are undefined.
 */
class Justification {
public:
    Justification(const ParityGame& g, Hypothesis hypothesis,
                  DependencyIndex index = DependencyIndex::scan_predecessors);

    /// The empty justification with the default hypothesis.
    static Justification initial(const ParityGame& g,
                                 DependencyIndex index = DependencyIndex::scan_predecessors);

    const ParityGame& game() const { return *game_; }
    DependencyIndex dependency_index() const { return index_; }

    bool justified(NodeId v) const { return direct_[v].has_value(); }
    std::optional<DirectJustification> direct(NodeId v) const { return direct_[v]; }
    Player hypothesis(NodeId v) const { return hyp_[v]; }
    const Hypothesis& hypothesis() const { return hyp_; }

    std::size_t justified_count() const { return justified_count_; }
    std::size_t unjustified_count() const { return game_->node_count() - justified_count_; }

    struct Update {
        NodeId node;
        std::optional<DirectJustification> dj;  // nullopt removes the direct justification
        Player hypothesis;
    };

    /**
     * Replaces the outgoing D-edges and hypothesis of every listed node in one
     * batch; updates are independent of order, so a node may appear only once
     * (std::invalid_argument otherwise, likewise for malformed djs).
     */
    void apply(std::span<const Update> updates);
    void apply(std::initializer_list<Update> updates) {
        apply(std::span<const Update>(updates.begin(), updates.size()));
    }

    /// Justification level of a node (cached).
    Level level(NodeId v) const;

    /// Justification level of a direct justification: min over its targets.
    Level level_of(NodeId v, DirectJustification dj) const;

    /// Reference recomputation that ignores the cache; exists to test it.
    Level level_from_scratch(NodeId v) const;

    /// D-predecessors of v, through the configured dependency index.
    template <typename F>
    void for_each_direct_predecessor(NodeId v, F f) const {
        if (index_ == DependencyIndex::scan_predecessors) {
            for (NodeId u : game_->predecessors(v))
                if (direct_[u] && direct_[u]->covers(*game_, u, v)) f(u);
        } else {
            for (NodeId u : dependents_[v]) f(u);
        }
    }

    /// D-predecessors of v as a sorted list (index-mode agnostic result).
    std::vector<NodeId> direct_predecessors(NodeId v) const;

    /// Nodes reaching v in D, including v (closed under incoming edges).
    std::vector<NodeId> reach_down(NodeId v) const;

    /// Nodes reachable from v in D, including v.
    std::vector<NodeId> reach_up(NodeId v) const;

private:
    void invalidate_levels_reaching(std::span<const NodeId> roots);
    void refresh_levels() const;

    const ParityGame* game_;
    DependencyIndex index_;
    std::vector<std::optional<DirectJustification>> direct_;
    Hypothesis hyp_;
    std::vector<std::vector<NodeId>> dependents_;  // dependent_sets mode only
    std::size_t justified_count_ = 0;

    mutable std::vector<Level> level_cache_;
    mutable std::vector<char> level_valid_;
    mutable std::size_t stale_levels_ = 0;
};

/// Convenience spelling of the justification level.
inline Level jl(const Justification& j, NodeId v) { return j.level(v); }

/**
 * The player for whom dj wins v under the current hypothesis, if any: a single
 * chosen edge wins for the owner, the all-successors marker for the opponent,
 * and every target must carry the winner's hypothesis. Throws
 * std::invalid_argument when dj is not shaped for v at all.
 */
std::optional<Player> wins_for(const Justification& j, NodeId v, DirectJustification dj);

/// Restriction of H to the unjustified nodes.
ParameterMap parameters_of(const Justification& j);

struct SafetyViolation {
    enum class Kind : std::uint8_t {
        unwinning_direct_justification,  // a justified node's dj does not win it
        losing_cycle,                    // a D-cycle won by the wrong player
        nondefault_parameter,            // an unjustified node with H != default
        level_below_priority,            // jl(v) < Pr(v)
    };
    Kind kind;
    std::vector<NodeId> nodes;  // the offending node, or the nodes of the cycle

    bool mentions(NodeId v) const;
};

struct SafetyReport {
    bool weakly_winning = false;
    bool winning = false;
    bool safe = false;
    std::vector<SafetyViolation> witnesses;

    bool mentions(NodeId v) const;
};

/// Weak winning only: every justified node's dj wins it for its hypothesis.
SafetyReport check_weakly_winning(const Justification& j);

/// Weak winning plus cycle correctness: every D-cycle is won by the
/// hypothesis of its nodes (per-class SCC analysis, witness producing).
SafetyReport check_winning(const Justification& j);

/// Full safety: winning, unjustified nodes carry default winners, and every
/// node's justification level is at least its priority.
SafetyReport check_safe(const Justification& j);

/// The strategy sigma_{J,alpha}: owner moves of nodes owned and
/// hypothetically won by alpha. kNoNode outside the domain.
std::vector<NodeId> extract_strategy(const Justification& j, Player alpha);

/// Graphviz rendering: label "name:priority", fill colour by hypothesis,
/// bold edges in D, dotted edges in E \ D, thick border on parameters.
std::string to_dot(const Justification& j);

}  // namespace pg
