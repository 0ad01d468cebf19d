#include "justsolve/game.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>
#include <unordered_set>

namespace pg {

ParityGame::ParityGame(std::vector<NodeSpec> nodes) : nodes_(std::move(nodes)) {
    const std::size_t n = nodes_.size();
    predecessors_.resize(n);
    bool first = true;
    for (NodeId v = 0; v < n; ++v) {
        NodeSpec& spec = nodes_[v];
        if (spec.original_id < 0) spec.original_id = static_cast<long long>(v);
        if (first) {
            min_priority_ = max_priority_ = spec.priority;
            first = false;
        } else {
            min_priority_ = std::min(min_priority_, spec.priority);
            max_priority_ = std::max(max_priority_, spec.priority);
        }
        for (NodeId w : spec.successors)
            if (w < n) predecessors_[w].push_back(v);
    }
}

std::string ParityGame::display_name(NodeId v) const {
    const NodeSpec& spec = nodes_[v];
    return spec.name.empty() ? std::to_string(spec.original_id) : spec.name;
}

bool ParityGame::operator==(const ParityGame& other) const {
    if (nodes_.size() != other.nodes_.size()) return false;
    for (std::size_t v = 0; v < nodes_.size(); ++v) {
        const NodeSpec& a = nodes_[v];
        const NodeSpec& b = other.nodes_[v];
        if (a.priority != b.priority || a.owner != b.owner ||
            a.successors != b.successors || a.name != b.name ||
            a.original_id != b.original_id)
            return false;
    }
    return true;
}

std::string GameViolation::describe(const ParityGame& g) const {
    std::string who = node < g.node_count() ? g.display_name(node) : std::to_string(node);
    switch (kind) {
        case Kind::missing_successor:
            return "node " + who + " has no successor (every node needs at least one move)";
        case Kind::edge_out_of_range:
            return "node " + who + " has an edge to unknown node " + std::to_string(target);
        case Kind::duplicate_edge:
            return "node " + who + " lists successor " + std::to_string(target) + " twice";
        case Kind::negative_priority:
            return "node " + who + " has a negative priority";
    }
    return "unknown violation";
}

std::vector<GameViolation> validate_game(const ParityGame& g) {
    std::vector<GameViolation> out;
    const std::size_t n = g.node_count();
    std::vector<NodeId> seen;
    for (NodeId v = 0; v < n; ++v) {
        if (g.priority(v) < 0)
            out.push_back({GameViolation::Kind::negative_priority, v});
        auto succ = g.successors(v);
        if (succ.empty())
            out.push_back({GameViolation::Kind::missing_successor, v});
        seen.assign(succ.begin(), succ.end());
        std::sort(seen.begin(), seen.end());
        for (std::size_t i = 0; i < seen.size(); ++i) {
            if (seen[i] >= n) {
                out.push_back({GameViolation::Kind::edge_out_of_range, v, seen[i]});
            } else if (i > 0 && seen[i] == seen[i - 1]) {
                out.push_back({GameViolation::Kind::duplicate_edge, v, seen[i]});
            }
        }
    }
    return out;
}

Hypothesis default_hypothesis(const ParityGame& g) {
    Hypothesis h(g.node_count(), Player::even);
    for (NodeId v = 0; v < g.node_count(); ++v)
        h[v] = winner_of_priority(g.priority(v));
    return h;
}

void ParameterMap::assign(NodeId v, Player a) {
    if (v >= assign_.size()) throw std::out_of_range("parameter node out of range");
    if (assign_[v] == kUnset) ++count_;
    assign_[v] = static_cast<std::uint8_t>(a);
}

void ParameterMap::clear(NodeId v) {
    if (v < assign_.size() && assign_[v] != kUnset) {
        assign_[v] = kUnset;
        --count_;
    }
}

std::optional<Player> ParameterMap::get(NodeId v) const {
    if (!contains(v)) return std::nullopt;
    return at(v);
}

namespace {

bool has_edge(const ParityGame& g, NodeId from, NodeId to) {
    auto succ = g.successors(from);
    return std::find(succ.begin(), succ.end(), to) != succ.end();
}

}  // namespace

Player play_winner(const ParityGame& g, const ParameterMap& p, const Play& play) {
    const auto& nodes = play.nodes;
    if (nodes.empty()) throw std::invalid_argument("play has no nodes");
    for (NodeId v : nodes)
        if (v >= g.node_count()) throw std::invalid_argument("play leaves the game");
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
        if (!has_edge(g, nodes[i], nodes[i + 1]))
            throw std::invalid_argument("play follows a non-edge");

    if (play.terminal == Play::Terminal::halted_at_parameter) {
        for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
            if (p.contains(nodes[i]))
                throw std::invalid_argument("play passes a parameter without halting");
        if (!p.contains(nodes.back()))
            throw std::invalid_argument("halted play does not end at a parameter");
        return p.at(nodes.back());
    }

    if (play.cycle_start >= nodes.size())
        throw std::invalid_argument("cycle start out of range");
    if (!has_edge(g, nodes.back(), nodes[play.cycle_start]))
        throw std::invalid_argument("cycle does not close on an edge");
    for (NodeId v : nodes)
        if (p.contains(v))
            throw std::invalid_argument("cycling play passes a parameter");

    int top = g.priority(nodes[play.cycle_start]);
    for (std::size_t i = play.cycle_start; i < nodes.size(); ++i)
        top = std::max(top, g.priority(nodes[i]));
    return winner_of_priority(top);
}

ParityGame ppg_to_pg(const ParityGame& g, const ParameterMap& p) {
    std::vector<NodeSpec> specs;
    specs.reserve(g.node_count());
    for (NodeId v = 0; v < g.node_count(); ++v) {
        NodeSpec spec;
        spec.owner = g.owner(v);
        spec.name = g.name(v);
        spec.original_id = g.original_id(v);
        if (p.contains(v)) {
            spec.priority = static_cast<int>(p.at(v));
            spec.successors = {v};
        } else {
            spec.priority = g.priority(v);
            spec.successors.assign(g.successors(v).begin(), g.successors(v).end());
        }
        specs.push_back(std::move(spec));
    }
    return ParityGame(std::move(specs));
}

namespace {

SolutionCheck fail(SolutionCheck::Fault fault, std::vector<NodeId> witness, std::string message) {
    SolutionCheck r;
    r.fault = fault;
    r.witness = std::move(witness);
    r.message = std::move(message);
    return r;
}

// Successors of v in the subgraph where alpha is pinned to its strategy.
// Parameters have no moves (plays halt there).
template <typename F>
void restricted_successors(const ParityGame& g, const ParameterMap& p, Player alpha,
                           const std::vector<NodeId>& strategy, NodeId v, F f) {
    if (p.contains(v)) return;
    if (g.owner(v) == alpha && strategy[v] != kNoNode) {
        f(strategy[v]);
        return;
    }
    for (NodeId w : g.successors(v)) f(w);
}

}  // namespace

SolutionCheck check_solution(const ParityGame& g, const ParameterMap& p, const Solution& s) {
    const std::size_t n = g.node_count();
    if (s.winner.size() != n || s.strategy[0].size() != n || s.strategy[1].size() != n)
        return fail(SolutionCheck::Fault::strategy_domain, {},
                    "solution does not cover every node exactly once");

    for (NodeId v = 0; v < n; ++v) {
        if (p.contains(v) && s.winner[v] != p.at(v))
            return fail(SolutionCheck::Fault::parameter_winner, {v},
                        "parameter " + g.display_name(v) + " claimed for the wrong player");
        for (Player a : {Player::even, Player::odd}) {
            NodeId move = s.strategy_of(a)[v];
            bool in_domain = move != kNoNode;
            bool expected = s.winner[v] == a && g.owner(v) == a && !p.contains(v);
            if (in_domain != expected)
                return fail(SolutionCheck::Fault::strategy_domain, {v},
                            "strategy domain mismatch at node " + g.display_name(v));
            if (in_domain && !has_edge(g, v, move))
                return fail(SolutionCheck::Fault::strategy_target, {v, move},
                            "strategy at node " + g.display_name(v) + " is not an edge");
        }
    }

    // For each player, nodes from which the opponent can counter the claim:
    // reach an opposing parameter or realize a cycle it wins, all inside the
    // strategy-restricted subgraph.
    for (Player alpha : {Player::even, Player::odd}) {
        const auto& sigma = s.strategy_of(alpha);
        const Player beta = opponent(alpha);

        std::vector<char> bad(n, 0);
        std::vector<NodeId> bad_seed;
        for (NodeId v = 0; v < n; ++v)
            if (p.contains(v) && p.at(v) == beta) {
                bad[v] = 1;
                bad_seed.push_back(v);
            }

        // Cycles won by beta: some node t of beta parity closes a cycle while
        // avoiding priorities above its own.
        std::vector<NodeId> cycle_witness;
        for (NodeId t = 0; t < n; ++t) {
            if (p.contains(t) || winner_of_priority(g.priority(t)) != beta) continue;
            std::vector<NodeId> parent(n, kNoNode);
            std::vector<char> visited(n, 0);
            std::vector<NodeId> stack{t};
            bool found = false;
            while (!stack.empty() && !found) {
                NodeId u = stack.back();
                stack.pop_back();
                restricted_successors(g, p, alpha, sigma, u, [&](NodeId w) {
                    if (found || g.priority(w) > g.priority(t)) return;
                    if (w == t) {
                        found = true;
                        cycle_witness.clear();
                        for (NodeId x = u; x != kNoNode && x != t; x = parent[x])
                            cycle_witness.push_back(x);
                        cycle_witness.push_back(t);
                        std::reverse(cycle_witness.begin(), cycle_witness.end());
                        return;
                    }
                    if (!visited[w]) {
                        visited[w] = 1;
                        parent[w] = u;
                        stack.push_back(w);
                    }
                });
            }
            if (found && !bad[t]) {
                bad[t] = 1;
                bad_seed.push_back(t);
                if (cycle_witness.size() > 1) cycle_witness.front() = t;  // keep t first
            }
        }

        // Backward closure over the restricted subgraph.
        std::vector<NodeId> queue = bad_seed;
        while (!queue.empty()) {
            NodeId w = queue.back();
            queue.pop_back();
            for (NodeId u : g.predecessors(w)) {
                if (bad[u]) continue;
                bool edge_present = false;
                restricted_successors(g, p, alpha, sigma, u, [&](NodeId x) {
                    if (x == w) edge_present = true;
                });
                if (edge_present) {
                    bad[u] = 1;
                    queue.push_back(u);
                }
            }
        }

        for (NodeId v = 0; v < n; ++v) {
            if (s.winner[v] != alpha || !bad[v]) continue;
            return fail(SolutionCheck::Fault::losing_play, {v},
                        "node " + g.display_name(v) + " claimed for " + player_char(alpha) +
                            " but the opponent has a counter-play");
        }
    }

    return {};
}

}  // namespace pg
