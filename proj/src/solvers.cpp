#include "justsolve/solvers.hpp"

#include <algorithm>
#include <cassert>
#include <optional>
#include <set>

namespace pg {

namespace {

/// Node-set filter over the global game; no subgame copies are made.
struct Subgame {
    std::vector<NodeId> nodes;  // ascending
    std::vector<char> member;

    Subgame(std::vector<NodeId> ns, std::size_t universe)
        : nodes(std::move(ns)), member(universe, 0) {
        for (NodeId v : nodes) member[v] = 1;
    }
};

/// Wraps justify() with optional tracing and per-step auditing.
class StepSink {
public:
    StepSink(Justification& j, const SolverConfig& cfg, SolverStats& stats,
             std::vector<JustifyStep>& trace)
        : j_(j), cfg_(cfg), stats_(stats), trace_(trace) {}

    JustifyEffect step(NodeId v, DirectJustification dj) {
        SizeTuple before;
        std::vector<Level> pre_levels;
        if (cfg_.audit) {
            if (!check_safe(j_).safe)
                throw AuditError("justification unsafe before a step");
            pre_levels.reserve(j_.game().node_count());
            for (NodeId w = 0; w < j_.game().node_count(); ++w)
                pre_levels.push_back(j_.level(w));
        }
        if (cfg_.collect_trace) before = size_of(j_);

        JustifyEffect effect = justify(j_, v, dj, cfg_.reset);
        ++stats_.steps;
        stats_.resets += effect.reset.size();

        if (cfg_.collect_trace) {
            SizeTuple after = size_of(j_);
            if (cfg_.audit) {
                if (!check_safe(j_).safe)
                    throw AuditError("justification unsafe after a step");
                if (lex_compare(after, before) != std::strong_ordering::greater)
                    throw AuditError("size did not strictly increase");
                for (NodeId w : effect.reset)
                    if (pre_levels[w].is_infinity())
                        throw AuditError("reset a node already settled at infinity");
            }
            trace_.push_back({static_cast<std::uint32_t>(trace_.size()), v, dj, effect.winner,
                              effect.reset, std::move(before), std::move(after)});
        }
        return effect;
    }

    bool audit() const { return cfg_.audit; }
    ResetPolicy reset_policy() const { return cfg_.reset; }

private:
    Justification& j_;
    const SolverConfig& cfg_;
    SolverStats& stats_;
    std::vector<JustifyStep>& trace_;
};

/**
 * First direct justification that wins v for `winner` with level >= min_level:
 * the owner's first eligible move, or all edges when the opponent owns v.
 * With winner unset, the owner's side is tried before the opponent's.
 */
std::optional<DirectJustification> attraction_dj(const Justification& j, NodeId v,
                                                 std::optional<Player> winner, Level min_level) {
    const ParityGame& g = j.game();
    if (!winner || *winner == g.owner(v)) {
        Player a = g.owner(v);
        for (NodeId w : g.successors(v))
            if (j.hypothesis(w) == a && j.level(w) >= min_level)
                return DirectJustification::single(w);
    }
    if (!winner || *winner == opponent(g.owner(v))) {
        Player a = opponent(g.owner(v));
        bool ok = !g.successors(v).empty();
        Level lvl = Level::infinity();
        for (NodeId w : g.successors(v)) {
            ok = ok && j.hypothesis(w) == a;
            lvl = std::min(lvl, j.level(w));
        }
        if (ok && lvl >= min_level) return DirectJustification::all_successors();
    }
    return std::nullopt;
}

/**
 * Greedy attraction: repeatedly justifies eligible subgame nodes in ascending
 * id order until none is left. A node is eligible when unjustified, or when
 * rejustify_below is set and its level is still under that bound. Changed
 * levels and hypotheses re-enqueue the affected nodes and their predecessors.
 */
std::size_t attract(Justification& j, StepSink& sink, const Subgame& sg,
                    std::optional<Player> winner, Level min_level,
                    std::optional<Level> rejustify_below,
                    std::vector<NodeId>* stepped = nullptr) {
    const ParityGame& g = j.game();
    std::set<NodeId> work(sg.nodes.begin(), sg.nodes.end());
    std::size_t performed = 0;
    while (!work.empty()) {
        NodeId v = *work.begin();
        work.erase(work.begin());
        bool eligible =
            !j.justified(v) || (rejustify_below && j.level(v) < *rejustify_below);
        if (!eligible) continue;
        std::optional<DirectJustification> dj = attraction_dj(j, v, winner, min_level);
        if (!dj) continue;
        JustifyEffect effect = sink.step(v, *dj);
        ++performed;
        if (stepped) stepped->push_back(v);
        for (NodeId t : effect.touched) {
            if (sg.member[t]) work.insert(t);
            for (NodeId u : g.predecessors(t))
                if (sg.member[u]) work.insert(u);
        }
    }
    return performed;
}

Solution solution_from(const Justification& j) {
    Solution s;
    s.winner = j.hypothesis();
    s.strategy[0] = extract_strategy(j, Player::even);
    s.strategy[1] = extract_strategy(j, Player::odd);
    return s;
}

void ensure_valid(const ParityGame& g) {
    std::vector<GameViolation> violations = validate_game(g);
    if (!violations.empty())
        throw std::invalid_argument("solve: " + violations.front().describe(g));
}

/// Escape hatch for states the scripted orderings do not cover; every step it
/// takes is an ordinary executable Justify step, so safety and progress hold.
std::size_t break_stall(Justification& j, StepSink& sink, SolverStats& stats) {
    if (j.unjustified_count() == 0) return 0;
    auto [v, dj] = find_justifiable(j);
    sink.step(v, dj);
    ++stats.stalls_broken;
    return 1;
}

void audit_zielonka_head(const Justification& j, const Subgame& sg, int p) {
    const ParityGame& g = j.game();
    for (NodeId v = 0; v < g.node_count(); ++v)
        if (j.justified(v) && j.level(v) < Level::of(p))
            throw AuditError("zielonka: justified node below the frame level");
    for (NodeId v : sg.nodes) {
        if (j.justified(v)) continue;
        Player foe = opponent(winner_of_priority(p));
        std::optional<DirectJustification> dj = attraction_dj(j, v, foe, Level::of(p + 1));
        if (dj && j.level_of(v, *dj) > Level::of(p))
            throw AuditError("zielonka: opponent attraction left on an unjustified node");
    }
}

}  // namespace

bool region_closed(const Justification& j, std::span<const NodeId> region,
                   std::span<const NodeId> subgame, int p) {
#ifndef NDEBUG
    for (NodeId v : region) assert(j.level(v) >= Level::of(p));
    assert(region.size() ==
           static_cast<std::size_t>(std::count_if(subgame.begin(), subgame.end(), [&](NodeId v) {
               return j.level(v) >= Level::of(p);
           })));
#endif
    (void)region;
    for (NodeId v : subgame)
        if (j.game().priority(v) == p && !j.justified(v)) return false;
    return true;
}

Level escape_level(const Justification& j, std::span<const NodeId> region) {
    const ParityGame& g = j.game();
    std::vector<char> member(g.node_count(), 0);
    for (NodeId v : region) member[v] = 1;
    Level lvl = Level::infinity();
    for (NodeId v : region) {
        if (!j.justified(v)) continue;
        for_each_target(g, v, *j.direct(v), [&](NodeId w) {
            if (!member[w]) lvl = std::min(lvl, j.level(w));
        });
    }
    return lvl;
}

namespace {

void run_fixpoint(Justification& j, StepSink& sink) {
    // Always pick an unjustified node of globally minimal priority.
    while (j.unjustified_count() > 0) {
        auto [v, dj] = find_justifiable(j);
        sink.step(v, dj);
    }
}

void run_zielonka(Justification& j, StepSink& sink, SolverStats& stats) {
    const ParityGame& g = j.game();
    struct Frame {
        Subgame sg;
        int p;
        Player alpha;
        bool awaiting = false;
        std::size_t head_steps = static_cast<std::size_t>(-1);
    };

    auto make_frame = [&](std::vector<NodeId> nodes) {
        int p = 0;
        for (NodeId v : nodes) p = std::max(p, g.priority(v));
        return Frame{Subgame(std::move(nodes), g.node_count()), p, winner_of_priority(p)};
    };

    std::vector<NodeId> all(g.node_count());
    for (NodeId v = 0; v < g.node_count(); ++v) all[v] = v;
    if (all.empty()) return;

    std::vector<Frame> stack;
    stack.push_back(make_frame(std::move(all)));
    std::vector<NodeId> stepped;

    while (!stack.empty()) {
        Frame& f = stack.back();
        if (f.awaiting) {
            f.awaiting = false;
            attract(j, sink, f.sg, opponent(f.alpha), Level::of(f.p + 1), std::nullopt);
        }

        // Loop head of this frame. The frame-level invariants are specific to
        // minimal resets; aggressive resets may re-open enclosing parameters
        // mid-recursion and leave justified nodes below this level.
        if (sink.audit() && sink.reset_policy() == ResetPolicy::minimal)
            audit_zielonka_head(j, f.sg, f.p);
        bool repeated_head = f.head_steps == stats.steps;
        f.head_steps = stats.steps;

        // With minimal resets an attracted node can never be reset again
        // within the same loop; aggressive resets may legitimately revisit.
        bool track = sink.audit() && sink.reset_policy() == ResetPolicy::minimal;
        stepped.clear();
        attract(j, sink, f.sg, f.alpha, Level::of(f.p), std::nullopt, track ? &stepped : nullptr);
        if (track) {
            std::sort(stepped.begin(), stepped.end());
            if (std::adjacent_find(stepped.begin(), stepped.end()) != stepped.end())
                throw AuditError("zielonka: node justified twice in one attraction");
        }

        std::vector<NodeId> ssg;
        for (NodeId v : f.sg.nodes)
            if (!j.justified(v) && g.priority(v) < f.p) ssg.push_back(v);
        if (ssg.empty()) {
            stack.pop_back();
            continue;
        }
        if (repeated_head && f.head_steps == stats.steps) {
            // A whole iteration changed nothing; the scripted order cannot
            // make progress from here, but an executable step always exists.
            break_stall(j, sink, stats);
            continue;
        }
        f.awaiting = true;
        ++stats.frames;
        stack.push_back(make_frame(std::move(ssg)));
    }
}

void run_priority_promotion(Justification& j, StepSink& sink, SolverStats& stats) {
    const ParityGame& g = j.game();
    struct Frame {
        Subgame sg;
        int p;
        Player alpha;
        bool awaiting = false;
        std::size_t head_steps = static_cast<std::size_t>(-1);
    };
    struct Returned {
        std::vector<NodeId> region;
        Level level;
    };

    auto make_frame = [&](std::vector<NodeId> nodes) {
        int p = 0;
        for (NodeId v : nodes) p = std::max(p, g.priority(v));
        return Frame{Subgame(std::move(nodes), g.node_count()), p, winner_of_priority(p)};
    };

    while (j.unjustified_count() > 0) {
        std::size_t outer_steps = stats.steps;

        // Nodes settled at infinity are out of the game for good.
        std::vector<NodeId> live;
        for (NodeId v = 0; v < g.node_count(); ++v)
            if (!j.level(v).is_infinity()) live.push_back(v);
        Subgame outer_sg(live, g.node_count());

        std::vector<Frame> stack;
        stack.push_back(make_frame(std::move(live)));
        std::optional<Returned> ret;

        while (!stack.empty()) {
            Frame& f = stack.back();
            if (f.awaiting) {
                f.awaiting = false;
                if (ret->level > Level::of(f.p)) {
                    stack.pop_back();  // promotion passes this level by
                    continue;
                }
            }

            bool repeated_head = f.head_steps == stats.steps;
            f.head_steps = stats.steps;

            attract(j, sink, f.sg, f.alpha, Level::of(f.p), Level::of(f.p));

            std::vector<NodeId> region;
            for (NodeId v : f.sg.nodes)
                if (j.level(v) >= Level::of(f.p)) region.push_back(v);

            if (region_closed(j, region, f.sg.nodes, f.p)) {
                Level lvl = escape_level(j, region);
                if (sink.audit())
                    for (NodeId v : region)
                        if (j.level(v) < lvl)
                            throw AuditError("closed region below its escape level");
                stats.promotions.push_back({f.p, lvl});
                ret = Returned{std::move(region), lvl};
                stack.pop_back();
                continue;
            }

            std::vector<NodeId> ssg;
            for (NodeId v : f.sg.nodes)
                if (j.level(v) < Level::of(f.p)) ssg.push_back(v);
            if (ssg.empty() || repeated_head) {
                // Not closed, yet nothing left to descend into (or an entire
                // iteration made no step): fall back to any executable step.
                if (break_stall(j, sink, stats) == 0)
                    throw AuditError("promotion stuck with nothing executable");
                continue;
            }
            f.awaiting = true;
            ++stats.frames;
            stack.push_back(make_frame(std::move(ssg)));
        }

        // Attract whatever can now be justified straight to infinity, for
        // either player; hypothesis flips reset their dependents here.
        attract(j, sink, outer_sg, std::nullopt, Level::infinity(), Level::infinity());

        if (stats.steps == outer_steps && j.unjustified_count() > 0)
            break_stall(j, sink, stats);
    }
}

}  // namespace

SolveResult solve(const ParityGame& g, const SolverConfig& config) {
    ensure_valid(g);
    SolverConfig cfg = config;
    cfg.collect_trace = cfg.collect_trace || cfg.audit;

    SolveResult result{Solution{}, Justification::initial(g, cfg.dependency_index), {}, {}};
    Justification& j = result.justification;
    StepSink sink(j, cfg, result.stats, result.trace);

    switch (cfg.algorithm) {
        case Algorithm::fixpoint: run_fixpoint(j, sink); break;
        case Algorithm::zielonka: run_zielonka(j, sink, result.stats); break;
        case Algorithm::priority_promotion: run_priority_promotion(j, sink, result.stats); break;
    }

    // Whatever the ordering left over is still solvable one step at a time.
    while (j.unjustified_count() > 0) break_stall(j, sink, result.stats);

    result.solution = solution_from(j);
    return result;
}

SolveResult solve_fixpoint(const ParityGame& g, const SolverConfig& config) {
    SolverConfig cfg = config;
    cfg.algorithm = Algorithm::fixpoint;
    return solve(g, cfg);
}

SolveResult solve_zielonka(const ParityGame& g, const SolverConfig& config) {
    SolverConfig cfg = config;
    cfg.algorithm = Algorithm::zielonka;
    return solve(g, cfg);
}

SolveResult solve_priority_promotion(const ParityGame& g, const SolverConfig& config) {
    SolverConfig cfg = config;
    cfg.algorithm = Algorithm::priority_promotion;
    return solve(g, cfg);
}

}  // namespace pg
