#include <doctest.h>

#include <algorithm>
#include <set>

#include "justsolve/justification.hpp"
#include "justsolve/justify.hpp"
#include "justsolve/oracle.hpp"
#include "support.hpp"

using namespace pg;
using namespace pg::testing;

namespace {

// Brute-force closure over materialized D-edges, kept independent of the
// reach_down/reach_up implementations it checks.
std::vector<std::vector<NodeId>> materialize_d(const Justification& j) {
    const ParityGame& g = j.game();
    std::vector<std::vector<NodeId>> edges(g.node_count());
    for (NodeId v = 0; v < g.node_count(); ++v)
        if (j.justified(v))
            for_each_target(g, v, *j.direct(v), [&](NodeId w) { edges[v].push_back(w); });
    return edges;
}

std::vector<NodeId> closure(const std::vector<std::vector<NodeId>>& edges, NodeId start,
                            bool forward) {
    std::size_t n = edges.size();
    std::vector<char> in(n, 0);
    in[start] = 1;
    bool grew = true;
    while (grew) {
        grew = false;
        for (NodeId v = 0; v < n; ++v)
            for (NodeId w : edges[v]) {
                NodeId from = forward ? v : w;
                NodeId to = forward ? w : v;
                if (in[from] && !in[to]) {
                    in[to] = 1;
                    grew = true;
                }
            }
    }
    std::vector<NodeId> out;
    for (NodeId v = 0; v < n; ++v)
        if (in[v]) out.push_back(v);
    return out;
}

}  // namespace

TEST_CASE("wins_for") {
    ParityGame g = demo_game();
    Justification j = demo_justification(g);

    SUBCASE("a single owner move to an agreeing successor wins") {
        // d is owned by Odd and c is hypothetically won by Odd
        CHECK(wins_for(j, D, DirectJustification::single(C)) == Player::odd);
    }
    SUBCASE("owner with one move wins through it") {
        CHECK(wins_for(j, E, DirectJustification::single(D)) == Player::even);
    }
    SUBCASE("mixed successors win for nobody") {
        Justification mixed(g, Hypothesis{Player::odd, Player::even, Player::even, Player::even,
                                          Player::even, Player::even});
        // b is owned by Even; all of b's successors must agree for Odd to win it
        CHECK_FALSE(wins_for(mixed, B, DirectJustification::all_successors()).has_value());
    }
    SUBCASE("a chosen edge that is not an edge is rejected") {
        CHECK_THROWS_AS(wins_for(j, C, DirectJustification::single(A)), std::invalid_argument);
    }
}

TEST_CASE("parameters_of") {
    ParityGame g = demo_game();

    SUBCASE("the empty justification makes every node a parameter") {
        Justification j = Justification::initial(g);
        ParameterMap p = parameters_of(j);
        CHECK(p.domain_size() == 6);
        for (NodeId v = 0; v < 6; ++v) CHECK(p.at(v) == default_hypothesis(g)[v]);
    }
    SUBCASE("a fully justified state has none") {
        ParityGame loop = build({{0, 0, {0}}});
        Justification j = Justification::initial(loop);
        j.apply({Justification::Update{0, DirectJustification::single(0), Player::even}});
        CHECK(parameters_of(j).empty());
    }
    SUBCASE("the worked example leaves a and d") {
        Justification j = demo_justification(g);
        ParameterMap p = parameters_of(j);
        CHECK(p.domain_size() == 2);
        CHECK(p.at(A) == Player::odd);
        CHECK(p.at(D) == Player::even);
    }
}

TEST_CASE("reach_down and reach_up") {
    ParityGame g = demo_game();
    Justification j = demo_justification(g);

    SUBCASE("unjustified node with no dependents") {
        ParityGame lone = build({{0, 0, {1}}, {1, 1, {0}}});
        Justification empty = Justification::initial(lone);
        CHECK(empty.reach_down(0) == std::vector<NodeId>{0});
        CHECK(empty.reach_up(0) == std::vector<NodeId>{0});
    }
    SUBCASE("chains accumulate") {
        // e -> d in D, f -> e in D, so d is reached by d, e, f
        CHECK(j.reach_down(D) == std::vector<NodeId>{D, E, F});
        CHECK(j.reach_up(F) == std::vector<NodeId>{D, E, F});
    }
    SUBCASE("randomized states match the brute-force closure") {
        Rng rng{31337};
        for (int i = 0; i < 300; ++i) {
            ParityGame game = random_game(rng.next(), 2 + rng.below(6), 5, 0.2 + 0.8 * rng.unit());
            Justification state = random_safe_state(game, rng, 2 * game.node_count());
            auto edges = materialize_d(state);
            for (NodeId v = 0; v < game.node_count(); ++v) {
                CHECK(state.reach_down(v) == closure(edges, v, false));
                CHECK(state.reach_up(v) == closure(edges, v, true));
            }
        }
    }
}

TEST_CASE("justification levels") {
    ParityGame g = demo_game();
    Justification j = demo_justification(g);

    SUBCASE("the worked example's levels") {
        CHECK(j.level(B) == Level::of(3));
        CHECK(j.level(C) == Level::infinity());
        CHECK(j.level(E) == Level::of(2));
        CHECK(j.level(F) == Level::of(2));
    }
    SUBCASE("an unjustified node sits at its own priority") {
        CHECK(j.level(A) == Level::of(3));
        CHECK(j.level(D) == Level::of(2));
    }
    SUBCASE("every node justified into cycles means all levels infinite") {
        ParityGame loop = build({{2, 0, {1}}, {2, 1, {0}}});
        Justification full = Justification::initial(loop);
        full.apply({Justification::Update{0, DirectJustification::single(1), Player::even},
                    Justification::Update{1, DirectJustification::all_successors(), Player::even}});
        CHECK(full.level(0) == Level::infinity());
        CHECK(full.level(1) == Level::infinity());
    }
    SUBCASE("dj level is the minimum over its targets") {
        CHECK(j.level_of(B, DirectJustification::all_successors()) == Level::of(3));
        CHECK(j.level_of(D, DirectJustification::single(C)) == Level::infinity());
        CHECK(j.level_of(F, DirectJustification::all_successors()) == Level::of(2));
    }
    SUBCASE("cache agrees with the from-scratch recompute across random mutations") {
        Rng rng{424242};
        for (int i = 0; i < 200; ++i) {
            ParityGame game = random_game(rng.next(), 2 + rng.below(6), 5, 0.2 + 0.8 * rng.unit());
            for (auto index :
                 {DependencyIndex::scan_predecessors, DependencyIndex::dependent_sets}) {
                Justification state = Justification::initial(game, index);
                for (int s = 0; s < 12; ++s) {
                    auto pairs = executable_pairs(state);
                    if (pairs.empty()) break;
                    auto [v, dj] = pairs[rng.below(pairs.size())];
                    justify(state, v, dj,
                            rng.below(2) ? ResetPolicy::aggressive : ResetPolicy::minimal);
                    for (NodeId w = 0; w < game.node_count(); ++w)
                        CHECK(state.level(w) == state.level_from_scratch(w));
                }
            }
        }
    }
    SUBCASE("levels are antitone towards a node along D") {
        Rng rng{9090};
        for (int i = 0; i < 200; ++i) {
            ParityGame game = random_game(rng.next(), 2 + rng.below(6), 5, 0.2 + 0.8 * rng.unit());
            Justification state = random_safe_state(game, rng, 2 * game.node_count());
            for (NodeId v = 0; v < game.node_count(); ++v)
                for (NodeId w : state.reach_down(v)) CHECK(state.level(w) <= state.level(v));
        }
    }
}

TEST_CASE("weakly winning, winning, safe") {
    ParityGame g = demo_game();

    SUBCASE("the empty justification is safe") {
        Justification j = Justification::initial(g);
        SafetyReport r = check_safe(j);
        CHECK(r.weakly_winning);
        CHECK(r.winning);
        CHECK(r.safe);
        CHECK(r.witnesses.empty());
    }
    SUBCASE("the worked example is winning but not safe, witnessed by b") {
        Justification j = demo_justification(g);
        SafetyReport weak = check_weakly_winning(j);
        CHECK(weak.weakly_winning);
        SafetyReport winning = check_winning(j);
        CHECK(winning.winning);
        SafetyReport safe = check_safe(j);
        CHECK_FALSE(safe.safe);
        CHECK(safe.winning);
        REQUIRE_FALSE(safe.witnesses.empty());
        CHECK(safe.witnesses[0].kind == SafetyViolation::Kind::level_below_priority);
        CHECK(safe.mentions(B));
    }
    SUBCASE("justifying a through b creates a losing cycle") {
        Justification j = demo_justification(g);
        justify(j, A, DirectJustification::single(B));
        SafetyReport r = check_winning(j);
        CHECK(r.weakly_winning);
        CHECK_FALSE(r.winning);
        REQUIRE_FALSE(r.witnesses.empty());
        const SafetyViolation& cycle = r.witnesses[0];
        CHECK(cycle.kind == SafetyViolation::Kind::losing_cycle);
        std::set<NodeId> nodes(cycle.nodes.begin(), cycle.nodes.end());
        CHECK(nodes == std::set<NodeId>{A, B});
    }
    SUBCASE("acyclic weakly winning states are winning") {
        Justification j(g, Hypothesis{Player::odd, Player::odd, Player::odd, Player::even,
                                      Player::even, Player::even});
        j.apply({Justification::Update{E, DirectJustification::single(D), Player::even}});
        CHECK(check_winning(j).winning);
    }
    SUBCASE("a self loop of matching parity is winning") {
        ParityGame loop = build({{2, 0, {0}}});
        Justification j = Justification::initial(loop);
        justify(j, 0, DirectJustification::single(0));
        CHECK(check_winning(j).winning);
        CHECK(check_safe(j).safe);
    }
    SUBCASE("mutating the hypothesis of a dj target breaks weak winning with a witness") {
        Rng rng{60606};
        int mutated = 0;
        for (int i = 0; i < 600 && mutated < 100; ++i) {
            ParityGame game = random_game(rng.next(), 3 + rng.below(4), 4, 0.3 + 0.7 * rng.unit());
            Justification state = random_safe_state(game, rng, 2 * game.node_count());
            // pick a justified node and flip the hypothesis of one dj target
            std::vector<NodeId> justified;
            for (NodeId v = 0; v < game.node_count(); ++v)
                if (state.justified(v)) justified.push_back(v);
            if (justified.empty()) continue;
            NodeId v = justified[rng.below(justified.size())];
            NodeId target = kNoNode;
            for_each_target(game, v, *state.direct(v), [&](NodeId w) {
                if (target == kNoNode) target = w;
            });
            state.apply({Justification::Update{target, state.direct(target),
                                               opponent(state.hypothesis(target))}});
            SafetyReport r = check_weakly_winning(state);
            CHECK_FALSE(r.weakly_winning);
            CHECK(r.mentions(v));
            ++mutated;
        }
        CHECK(mutated == 100);
    }
}

TEST_CASE("extract_strategy") {
    ParityGame g = demo_game();
    Justification j = demo_justification(g);

    SUBCASE("the worked example's strategies") {
        std::vector<NodeId> sigma0 = extract_strategy(j, Player::even);
        CHECK(sigma0[E] == D);  // Even wins e by playing to d
        CHECK(sigma0[F] == kNoNode);
        std::vector<NodeId> sigma1 = extract_strategy(j, Player::odd);
        CHECK(sigma1[C] == C);        // Odd wins c by playing to c
        CHECK(sigma1[B] == kNoNode);  // b is not owned by its hypothetical winner
    }
    SUBCASE("the empty justification has empty strategies") {
        Justification empty = Justification::initial(g);
        for (Player a : {Player::even, Player::odd})
            for (NodeId move : extract_strategy(empty, a)) CHECK(move == kNoNode);
    }
}

TEST_CASE("apply") {
    ParityGame g = demo_game();

    SUBCASE("withdrawing a justification resets the node") {
        Justification j = demo_justification(g);
        j.apply({Justification::Update{C, std::nullopt, default_hypothesis(g)[C]}});
        CHECK_FALSE(j.justified(C));
        CHECK(j.hypothesis(C) == Player::odd);
        CHECK(j.level(C) == Level::of(1));
    }
    SUBCASE("duplicate updates are rejected") {
        Justification j = Justification::initial(g);
        CHECK_THROWS_AS(j.apply({Justification::Update{A, std::nullopt, Player::odd},
                                 Justification::Update{A, std::nullopt, Player::even}}),
                        std::invalid_argument);
    }
    SUBCASE("installing an agreeing dj with no path back creates no cycle through the node") {
        Justification j = demo_justification(g);
        j.apply({Justification::Update{D, DirectJustification::single(C), Player::odd}});
        // d's successors cannot reach d, so d lies on no cycle
        std::vector<NodeId> up = j.reach_up(D);
        std::vector<NodeId> down = j.reach_down(D);
        for (NodeId w : up)
            if (w != D)
                CHECK(std::find(down.begin(), down.end(), w) == down.end());
    }
    SUBCASE("the dependents index mirrors the reverse adjacency after any updates") {
        Rng rng{808};
        for (int i = 0; i < 200; ++i) {
            ParityGame game = random_game(rng.next(), 2 + rng.below(6), 5, 0.2 + 0.8 * rng.unit());
            Justification scan(game, default_hypothesis(game),
                               DependencyIndex::scan_predecessors);
            Justification sets(game, default_hypothesis(game), DependencyIndex::dependent_sets);
            for (int s = 0; s < 10; ++s) {
                auto pairs = executable_pairs(scan);
                if (pairs.empty()) break;
                auto [v, dj] = pairs[rng.below(pairs.size())];
                justify(scan, v, dj);
                justify(sets, v, dj);
                auto edges = materialize_d(scan);
                std::vector<std::vector<NodeId>> reverse(game.node_count());
                for (NodeId a = 0; a < game.node_count(); ++a)
                    for (NodeId b : edges[a]) reverse[b].push_back(a);
                for (auto& r : reverse) {
                    std::sort(r.begin(), r.end());
                    r.erase(std::unique(r.begin(), r.end()), r.end());
                }
                for (NodeId w = 0; w < game.node_count(); ++w) {
                    CHECK(scan.direct_predecessors(w) == reverse[w]);
                    CHECK(sets.direct_predecessors(w) == reverse[w]);
                }
            }
        }
    }
}

TEST_CASE("weak winning holds on every reachable state and connects hypotheses") {
    Rng rng{111};
    for (int i = 0; i < 250; ++i) {
        ParityGame game = random_game(rng.next(), 2 + rng.below(5), 5, 0.2 + 0.8 * rng.unit());
        Justification state = random_safe_state(game, rng, 2 * game.node_count());
        REQUIRE(check_weakly_winning(state).weakly_winning);

        // D-connected nodes share a hypothesis.
        for (NodeId v = 0; v < game.node_count(); ++v) {
            if (!state.justified(v)) continue;
            for_each_target(game, v, *state.direct(v), [&](NodeId w) {
                CHECK(state.hypothesis(v) == state.hypothesis(w));
            });
        }
    }
}

TEST_CASE("apply keeps weak winning under the documented preconditions") {
    Rng rng{222};
    int case_fresh = 0, case_reset = 0, case_agree = 0;
    for (int i = 0; i < 400; ++i) {
        ParityGame game = random_game(rng.next(), 3 + rng.below(4), 4, 0.3 + 0.7 * rng.unit());
        Justification state = random_safe_state(game, rng, 2 * game.node_count());

        // a winning dj on a node with an opposing hypothesis and no incoming
        // D-edges
        for (NodeId v = 0; v < game.node_count() && case_fresh < 100; ++v) {
            if (state.justified(v) || state.direct_predecessors(v).size() > 0) continue;
            Player h = state.hypothesis(v);
            Player owner = game.owner(v);
            std::optional<DirectJustification> candidate;
            Player winner = Player::even;
            if (owner == opponent(h)) {
                for (NodeId w : game.successors(v))
                    if (state.hypothesis(w) == owner) {
                        candidate = DirectJustification::single(w);
                        winner = owner;
                        break;
                    }
            } else {
                bool all = true;
                for (NodeId w : game.successors(v)) all = all && state.hypothesis(w) == opponent(h);
                if (all && !game.successors(v).empty()) {
                    candidate = DirectJustification::all_successors();
                    winner = opponent(h);
                }
            }
            if (candidate && winner == opponent(h)) {
                Justification copy = state;
                copy.apply({Justification::Update{v, candidate, winner}});
                CHECK(check_weakly_winning(copy).weakly_winning);
                ++case_fresh;
            }
        }

        // resetting any down-closed set with arbitrary hypotheses
        {
            Justification copy = state;
            NodeId v = static_cast<NodeId>(rng.below(game.node_count()));
            std::vector<Justification::Update> updates;
            for (NodeId w : copy.reach_down(v))
                updates.push_back({w, std::nullopt, static_cast<Player>(rng.below(2))});
            copy.apply(updates);
            CHECK(check_weakly_winning(copy).weakly_winning);
            ++case_reset;
        }

        // installing a winning dj that agrees with the hypothesis
        for (auto& [v, dj] : executable_pairs(state)) {
            if (*wins_for(state, v, dj) != state.hypothesis(v)) continue;
            Justification copy = state;
            copy.apply({Justification::Update{v, dj, state.hypothesis(v)}});
            CHECK(check_weakly_winning(copy).weakly_winning);
            ++case_agree;
            break;
        }
    }
    CHECK(case_fresh == 100);
    CHECK(case_reset == 400);
    CHECK(case_agree > 150);
}

TEST_CASE("dot rendering shows the justification") {
    ParityGame g = demo_game();
    Justification j = demo_justification(g);
    std::string dot = to_dot(j);
    CHECK(dot.find("label=\"a:3\"") != std::string::npos);
    CHECK(dot.find("label=\"b:4\"") != std::string::npos);
    CHECK(dot.find("style=bold") != std::string::npos);
    CHECK(dot.find("style=dotted") != std::string::npos);
    CHECK(dot.find("penwidth=3") != std::string::npos);  // parameters stand out
}
