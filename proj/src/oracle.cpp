#include "justsolve/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cassert>

namespace pg {

namespace {

using Mask = std::uint64_t;

constexpr Mask bit(NodeId v) { return Mask(1) << v; }

constexpr Mask full_mask(std::size_t n) { return bit(static_cast<NodeId>(n)) - 1; }

// Successors once a candidate's strategy is fixed: parameters halt, nodes of
// the candidate follow the chosen move, opponent nodes keep every edge.
template <typename F>
void fixed_successors(const ParityGame& g, const ParameterMap& p, Player candidate,
                      const std::vector<NodeId>& choice, NodeId v, F f) {
    if (p.contains(v)) return;
    if (g.owner(v) == candidate) {
        f(choice[v]);
        return;
    }
    for (NodeId w : g.successors(v)) f(w);
}

// Nodes won by the candidate under one fixed strategy: the opponent must not
// reach one of its parameters nor close a cycle whose top priority it wins.
Mask winning_mask(const ParityGame& g, const ParameterMap& p, Player candidate,
                  const std::vector<NodeId>& choice) {
    const std::size_t n = g.node_count();
    const Player foe = opponent(candidate);

    Mask bad = 0;
    for (NodeId v = 0; v < n; ++v)
        if (p.contains(v) && p.at(v) == foe) bad |= bit(v);

    for (NodeId t = 0; t < n; ++t) {
        if (p.contains(t) || winner_of_priority(g.priority(t)) != foe) continue;
        // A cycle through t avoiding higher priorities makes t's priority the top.
        Mask seen = bit(t);
        std::vector<NodeId> stack{t};
        bool cycles = false;
        while (!stack.empty() && !cycles) {
            NodeId u = stack.back();
            stack.pop_back();
            fixed_successors(g, p, candidate, choice, u, [&](NodeId w) {
                if (cycles || g.priority(w) > g.priority(t)) return;
                if (w == t) {
                    cycles = true;
                    return;
                }
                if (!(seen & bit(w))) {
                    seen |= bit(w);
                    stack.push_back(w);
                }
            });
        }
        if (cycles) bad |= bit(t);
    }

    // Backward closure: anything that can reach a bad node is lost too.
    bool grew = true;
    while (grew) {
        grew = false;
        for (NodeId v = 0; v < n; ++v) {
            if (bad & bit(v)) continue;
            bool to_bad = false;
            fixed_successors(g, p, candidate, choice, v, [&](NodeId w) {
                if (bad & bit(w)) to_bad = true;
            });
            if (to_bad) {
                bad |= bit(v);
                grew = true;
            }
        }
    }
    return ~bad & full_mask(n);
}

}  // namespace

Solution oracle_solve(const ParityGame& g, const ParameterMap& p, OracleLimits limits) {
    const std::size_t n = g.node_count();
    if (n > limits.max_nodes || n > 63)
        throw OracleBoundExceeded("oracle: game larger than the configured bound");
    if (!validate_game(g).empty())
        throw std::invalid_argument("oracle: game is not well-formed");

    Solution result;
    result.winner.assign(n, Player::even);
    Mask won[2] = {0, 0};

    for (Player candidate : {Player::even, Player::odd}) {
        std::vector<NodeId> owned;
        for (NodeId v = 0; v < n; ++v)
            if (g.owner(v) == candidate && !p.contains(v)) owned.push_back(v);

        std::vector<NodeId> choice(n, kNoNode);
        std::vector<std::size_t> odo(owned.size(), 0);
        for (NodeId v : owned) choice[v] = g.successors(v)[0];

        Mask united = 0;
        Mask best_mask = 0;
        std::vector<NodeId> best_choice = choice;
        for (;;) {
            Mask w = winning_mask(g, p, candidate, choice);
            united |= w;
            if (std::popcount(w) > std::popcount(best_mask)) {
                best_mask = w;
                best_choice = choice;
            }
            // Odometer over the owned nodes' move choices.
            std::size_t i = 0;
            for (; i < owned.size(); ++i) {
                NodeId v = owned[i];
                if (++odo[i] < g.successors(v).size()) {
                    choice[v] = g.successors(v)[odo[i]];
                    break;
                }
                odo[i] = 0;
                choice[v] = g.successors(v)[0];
            }
            if (i == owned.size()) break;
        }

        // Memoryless determinacy: one strategy attains the whole union.
        assert(best_mask == united);
        won[index_of(candidate)] = united;

        auto& sigma = result.strategy_of(candidate);
        sigma.assign(n, kNoNode);
        for (NodeId v : owned)
            if (united & bit(v)) sigma[v] = best_choice[v];
    }

    if ((won[0] ^ won[1]) != full_mask(n) || (won[0] & won[1]) != 0)
        throw std::logic_error("oracle: winners do not partition the nodes");

    for (NodeId v = 0; v < n; ++v)
        result.winner[v] = (won[0] & bit(v)) ? Player::even : Player::odd;
    return result;
}

std::vector<Play> enumerate_plays(const ParityGame& g, const ParameterMap& p, NodeId v,
                                  const std::vector<NodeId>& strategy, OracleLimits limits) {
    std::vector<Play> plays;
    std::vector<NodeId> path;
    std::vector<int> position(g.node_count(), -1);

    auto moves = [&](NodeId u, auto f) {
        if (strategy.size() == g.node_count() && strategy[u] != kNoNode)
            f(strategy[u]);
        else
            for (NodeId w : g.successors(u)) f(w);
    };

    // Depth-first over all consistent choices; a revisited node closes the play.
    auto walk = [&](auto&& self, NodeId u) -> void {
        if (plays.size() > limits.max_plays)
            throw OracleBoundExceeded("enumerate_plays: too many plays");
        if (position[u] != -1) {
            Play play{path, Play::Terminal::entered_cycle,
                      static_cast<std::size_t>(position[u])};
            plays.push_back(std::move(play));
            return;
        }
        position[u] = static_cast<int>(path.size());
        path.push_back(u);
        if (p.contains(u)) {
            plays.push_back({path, Play::Terminal::halted_at_parameter, 0});
        } else {
            moves(u, [&](NodeId w) { self(self, w); });
        }
        path.pop_back();
        position[u] = -1;
    };
    walk(walk, v);
    return plays;
}

namespace {

// Self-contained generator so seeded games are identical across platforms.
struct SplitMix64 {
    std::uint64_t state;
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    std::uint64_t below(std::uint64_t bound) { return next() % bound; }
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

}  // namespace

ParityGame random_game(std::uint64_t seed, std::size_t n_nodes, int max_priority,
                       double edge_density) {
    if (n_nodes == 0) throw std::invalid_argument("random_game: need at least one node");
    SplitMix64 rng{seed};
    std::vector<NodeSpec> specs(n_nodes);
    for (NodeId v = 0; v < n_nodes; ++v) {
        NodeSpec& spec = specs[v];
        spec.owner = static_cast<Player>(rng.below(2));
        spec.priority = static_cast<int>(rng.below(static_cast<std::uint64_t>(max_priority) + 1));
        for (NodeId w = 0; w < n_nodes; ++w)
            if (rng.unit() < edge_density) spec.successors.push_back(w);
        if (spec.successors.empty())
            spec.successors.push_back(static_cast<NodeId>(rng.below(n_nodes)));
    }
    return ParityGame(std::move(specs));
}

}  // namespace pg
