#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace pg {

using NodeId = std::uint32_t;

/// Sentinel used by partial node maps (strategies, parents).
inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

enum class Player : std::uint8_t { even = 0, odd = 1 };

constexpr Player opponent(Player a) {
    return static_cast<Player>(1 - static_cast<int>(a));
}

constexpr int index_of(Player a) { return static_cast<int>(a); }

/// Winner of a priority: Even wins even priorities, Odd wins odd ones.
constexpr Player winner_of_priority(int priority) {
    return static_cast<Player>(priority & 1);
}

inline char player_char(Player a) { return a == Player::even ? '0' : '1'; }

struct NodeSpec {
    int priority = 0;
    Player owner = Player::even;
    std::vector<NodeId> successors;
    std::string name;
    long long original_id = -1;  // defaults to the dense index
};

/**
 * An immutable parity game: per node an owner, a non-negative priority and an
 * ordered, duplicate-free successor list. Node identity is a dense 0-based
 * index; the id found in an input file is kept as original_id for
 * round-tripping. Construction accepts structurally bad data (leaves,
 * out-of-range edges) so that validate_game can report it.
 */
class ParityGame {
public:
    ParityGame() = default;
    explicit ParityGame(std::vector<NodeSpec> nodes);

    std::size_t node_count() const { return nodes_.size(); }
    bool empty() const { return nodes_.empty(); }

    Player owner(NodeId v) const { return nodes_[v].owner; }
    int priority(NodeId v) const { return nodes_[v].priority; }
    std::span<const NodeId> successors(NodeId v) const { return nodes_[v].successors; }

    /// Predecessors over in-range edges only.
    std::span<const NodeId> predecessors(NodeId v) const { return predecessors_[v]; }

    const std::string& name(NodeId v) const { return nodes_[v].name; }
    long long original_id(NodeId v) const { return nodes_[v].original_id; }

    /// Name when present, otherwise the original id as text.
    std::string display_name(NodeId v) const;

    int min_priority() const { return min_priority_; }
    int max_priority() const { return max_priority_; }

    bool operator==(const ParityGame& other) const;

private:
    std::vector<NodeSpec> nodes_;
    std::vector<std::vector<NodeId>> predecessors_;
    int min_priority_ = 0;
    int max_priority_ = 0;
};

struct GameViolation {
    enum class Kind : std::uint8_t {
        missing_successor,
        edge_out_of_range,
        duplicate_edge,
        negative_priority,
    };
    Kind kind;
    NodeId node;
    NodeId target = kNoNode;

    std::string describe(const ParityGame& g) const;
};

/// Structural checks; an empty result means the game is well-formed.
std::vector<GameViolation> validate_game(const ParityGame& g);

/// Total hypothetical-winner assignment, one player per node.
using Hypothesis = std::vector<Player>;

/// Assigns to every node the winner of its priority.
Hypothesis default_hypothesis(const ParityGame& g);

/**
 * Partial assignment of winners to parameter nodes. Plays that reach a
 * parameter halt immediately in favour of the assigned player.
 */
class ParameterMap {
public:
    ParameterMap() = default;
    explicit ParameterMap(std::size_t universe) : assign_(universe, kUnset) {}

    void assign(NodeId v, Player a);
    void clear(NodeId v);
    bool contains(NodeId v) const { return v < assign_.size() && assign_[v] != kUnset; }
    Player at(NodeId v) const { return static_cast<Player>(assign_[v]); }
    std::optional<Player> get(NodeId v) const;

    std::size_t domain_size() const { return count_; }
    bool empty() const { return count_ == 0; }
    std::size_t universe() const { return assign_.size(); }

    template <typename F>
    void for_each(F f) const {
        for (NodeId v = 0; v < assign_.size(); ++v)
            if (assign_[v] != kUnset) f(v, static_cast<Player>(assign_[v]));
    }

    bool operator==(const ParameterMap&) const = default;

private:
    static constexpr std::uint8_t kUnset = 2;
    std::vector<std::uint8_t> assign_;
    std::size_t count_ = 0;
};

/**
 * A finite representation of a play: either it halted at a parameter (the
 * last node), or the successor of the last node closes a cycle back to
 * nodes[cycle_start]. Memoryless determinacy makes this lossless for
 * verification purposes.
 */
struct Play {
    enum class Terminal : std::uint8_t { halted_at_parameter, entered_cycle };

    std::vector<NodeId> nodes;
    Terminal terminal = Terminal::halted_at_parameter;
    std::size_t cycle_start = 0;

    bool operator==(const Play&) const = default;
};

/// Winner of a well-formed play; throws std::invalid_argument otherwise.
Player play_winner(const ParityGame& g, const ParameterMap& p, const Play& play);

/**
 * A claimed solution: a winner per node plus one memoryless strategy per
 * player. strategy[a][v] is kNoNode outside the strategy's domain, which must
 * be exactly the nodes owned and won by `a` that are not parameters.
 */
struct Solution {
    std::vector<Player> winner;
    std::array<std::vector<NodeId>, 2> strategy;

    std::vector<NodeId>& strategy_of(Player a) { return strategy[index_of(a)]; }
    const std::vector<NodeId>& strategy_of(Player a) const { return strategy[index_of(a)]; }

    bool operator==(const Solution&) const = default;
};

/**
 * Reduction of a parametrized game to a plain parity game: each parameter
 * keeps its owner but gets a single self-loop and priority P(v). Winners are
 * preserved node for node.
 */
ParityGame ppg_to_pg(const ParityGame& g, const ParameterMap& p);

struct SolutionCheck {
    enum class Fault : std::uint8_t {
        none,
        parameter_winner,   // a parameter is claimed for the wrong player
        strategy_domain,    // dom(strategy) is not (won & owned & non-parameter)
        strategy_target,    // strategy move is not an edge of the game
        losing_play,        // the loser can realize a play against the claim
    };

    Fault fault = Fault::none;
    std::vector<NodeId> witness;  // offending node first, then a path/cycle when available
    std::string message;

    bool ok() const { return fault == Fault::none; }
    explicit operator bool() const { return ok(); }
};

/**
 * Decides whether `s` solves (g, p): every play from v consistent with the
 * winner's strategy must be won by winner(v). Checked on the strategy-restricted
 * graph: the claimed loser must reach neither an opposing parameter nor a cycle
 * whose top priority it wins.
 */
SolutionCheck check_solution(const ParityGame& g, const ParameterMap& p, const Solution& s);

}  // namespace pg
