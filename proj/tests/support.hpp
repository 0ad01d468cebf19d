#pragma once

// Shared test fixtures: a tiny game builder, the six-node worked example
// from the README, seeded corpora and random justification states.

#include <cstdint>
#include <utility>
#include <vector>

#include "justsolve/justification.hpp"
#include "justsolve/justify.hpp"
#include "justsolve/oracle.hpp"

namespace pg::testing {

struct Node {
    int priority;
    int owner;
    std::vector<NodeId> successors;
    const char* name = "";
};

inline ParityGame build(std::vector<Node> nodes) {
    std::vector<NodeSpec> specs;
    for (Node& n : nodes)
        specs.push_back({n.priority, static_cast<Player>(n.owner), std::move(n.successors),
                         n.name, -1});
    return ParityGame(std::move(specs));
}

// The worked example bundled as games/demo.pg: six nodes a..f.
enum DemoNode : NodeId { A = 0, B, C, D, E, F };

inline ParityGame demo_game() {
    return build({
        {3, 1, {B}, "a"},
        {4, 0, {A, C}, "b"},
        {1, 1, {C}, "c"},
        {2, 1, {C}, "d"},
        {0, 0, {D}, "e"},
        {2, 1, {F, E}, "f"},
    });
}

// Parameters of the worked example: a assigned to Odd, d to Even.
inline ParameterMap demo_params() {
    ParameterMap p(6);
    p.assign(A, Player::odd);
    p.assign(D, Player::even);
    return p;
}

// The winning (but not safe) justification state discussed in the README:
// b, c, e, f justified, a and d parameters.
inline Justification demo_justification(const ParityGame& g,
                                        DependencyIndex index = DependencyIndex::scan_predecessors) {
    Hypothesis h{Player::odd, Player::odd, Player::odd, Player::even, Player::even, Player::even};
    Justification j(g, std::move(h), index);
    j.apply({
        Justification::Update{B, DirectJustification::all_successors(), Player::odd},
        Justification::Update{C, DirectJustification::single(C), Player::odd},
        Justification::Update{E, DirectJustification::single(D), Player::even},
        Justification::Update{F, DirectJustification::all_successors(), Player::even},
    });
    return j;
}

// Deterministic generator for test-local choices, independent of the library's.
struct Rng {
    std::uint64_t state;
    std::uint64_t next() {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        return state;
    }
    std::uint64_t below(std::uint64_t bound) { return next() % bound; }
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

// The shared random corpus: node counts 3..8, priorities up to 6, densities
// across 0.2..1.0, one game per index, reproducible from the index alone.
inline ParityGame corpus_game(std::size_t i) {
    Rng rng{0x9e3779b97f4a7c15ULL ^ (i + 1)};
    std::size_t nodes = 3 + rng.below(6);
    int max_priority = static_cast<int>(rng.below(7));
    double density = 0.2 + 0.8 * rng.unit();
    return random_game(rng.next(), nodes, max_priority, density);
}

// All executable (node, dj) pairs of a state, in the deterministic order
// node-ascending, owner moves in successor order before the all-edges form.
inline std::vector<std::pair<NodeId, DirectJustification>> executable_pairs(
    const Justification& j) {
    std::vector<std::pair<NodeId, DirectJustification>> out;
    const ParityGame& g = j.game();
    for (NodeId v = 0; v < g.node_count(); ++v) {
        for (NodeId w : g.successors(v)) {
            DirectJustification dj = DirectJustification::single(w);
            if (executable(j, v, dj)) out.emplace_back(v, dj);
        }
        DirectJustification all = DirectJustification::all_successors();
        if (executable(j, v, all)) out.emplace_back(v, all);
    }
    return out;
}

// A reachable safe state: a random walk of executable steps from the initial
// justification.
inline Justification random_safe_state(const ParityGame& g, Rng& rng, std::size_t max_steps,
                                       ResetPolicy policy = ResetPolicy::minimal) {
    Justification j = Justification::initial(g);
    std::size_t steps = rng.below(max_steps + 1);
    for (std::size_t s = 0; s < steps; ++s) {
        auto pairs = executable_pairs(j);
        if (pairs.empty()) break;
        auto [v, dj] = pairs[rng.below(pairs.size())];
        justify(j, v, dj, policy);
    }
    return j;
}

}  // namespace pg::testing
